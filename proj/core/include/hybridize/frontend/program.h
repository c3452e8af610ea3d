#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hybridize/frontend/ir.h"
#include "hybridize/frontend/resolver.h"

namespace hybridize::frontend {

struct ParamInfo {
  std::string name;
  ParamKind kind = ParamKind::Normal;
  const Expr* annotation = nullptr;
  bool has_default = false;
  bool is_receiver = false;  // first parameter of a method (not a staticmethod)
};

enum class FunctionKind : std::uint8_t { ModuleInit, Def, Lambda };

struct FunctionUnit {
  int id = -1;
  FunctionKind kind = FunctionKind::Def;
  QualifiedName fq_name;
  std::string name;  // simple name; `<module>` / `<lambda>` for synthetic units
  const SourceUnit* unit = nullptr;
  const FunctionDef* def = nullptr;
  const Expr* lambda = nullptr;
  std::vector<ParamInfo> params;
  int enclosing_class = -1;  // class whose body defines this function
  int parent = -1;           // lexically enclosing function (module init at top level)
  std::uint32_t line = 0;    // line of the `def` keyword
  std::uint32_t column = 0;  // column of the `def` keyword
  bool is_staticmethod = false;
  bool is_classmethod = false;
  bool is_property = false;
  bool is_generator = false;
  IRFunction ir;

  bool is_candidate() const { return kind == FunctionKind::Def; }
  /// Index of the receiver parameter, or -1.
  int receiver_index() const;
};

struct ClassInfo {
  int id = -1;
  std::string fq_name;
  std::string name;
  const SourceUnit* unit = nullptr;
  const ClassDef* def = nullptr;
  int parent = -1;  // function whose body holds the class statement
  std::uint32_t line = 0;
  std::vector<QualifiedName> base_names;
  std::vector<int> bases;                   // project classes, in declaration order
  std::vector<std::string> external_bases;  // canonical names of library bases
  bool open = false;                        // a base could not be resolved
  std::map<std::string, int, std::less<>> methods;
  std::set<std::string, std::less<>> attributes;  // every name bound in the body
};

struct Program {
  const ProjectModel* project = nullptr;
  const NameResolver* resolver = nullptr;
  std::vector<FunctionUnit> functions;
  std::vector<ClassInfo> classes;
  std::map<std::string, int, std::less<>> module_inits;
  std::map<std::string, int, std::less<>> class_by_name;
  /// Attribute names written anywhere in the project (`x.name = ...` or a
  /// class-body binding). Lookups of other names on open hierarchies are
  /// treated as unknown.
  std::set<std::string, std::less<>> written_attributes;

  const FunctionUnit* find_function(std::string_view fq) const;
  /// Left-to-right depth-first linearization of project classes starting at
  /// `cls`, duplicates removed.
  std::vector<int> linearize(int cls) const;
  /// Library bases reachable through the hierarchy of `cls`.
  std::vector<std::string> all_external_bases(int cls) const;
  bool hierarchy_open(int cls) const;
};

/// Collects functions and classes of every parsed unit and lowers each body
/// to IR.
Program lower_project(const ProjectModel& project, const NameResolver& resolver);

}  // namespace hybridize::frontend
