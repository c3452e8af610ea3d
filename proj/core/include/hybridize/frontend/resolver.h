#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hybridize/frontend/project.h"

namespace hybridize::frontend {

enum class NameOrigin : std::uint8_t { Local, Imported, Builtin, Unresolved };

const char* to_string(NameOrigin origin);

struct QualifiedName {
  std::vector<std::string> segments;
  NameOrigin origin = NameOrigin::Unresolved;

  std::string str() const;
  bool resolved() const { return origin != NameOrigin::Unresolved; }
  bool operator==(const QualifiedName&) const = default;
};

/// Top-level bindings of one module. Statements nested in if/try/with/loops
/// at module level count; function and class bodies do not.
struct ModuleScope {
  std::map<std::string, std::string, std::less<>> defs;     // def/class -> fq name
  std::map<std::string, std::string, std::less<>> imports;  // alias -> imported fq name
  std::set<std::string, std::less<>> assigned;
  std::vector<std::string> wildcards;                       // absolute source modules
  std::optional<std::vector<std::string>> all;              // literal __all__ only
};

ModuleScope collect_module_scope(const SourceUnit& unit);

bool is_builtin_name(std::string_view name);

class NameResolver {
 public:
  /// Answers whether a canonical external name (e.g. `tensorflow.ones`) is
  /// known to the library summaries; used for wildcard imports of external
  /// modules and for the conventional `tf` root.
  using KnownExternal = std::function<bool(std::string_view)>;

  explicit NameResolver(const ProjectModel& project, KnownExternal known = {});

  const ProjectModel& project() const { return *project_; }

  /// Resolves a Name/Attribute chain as seen from module scope of `unit`.
  /// Anything else resolves to an unresolved name with no segments.
  QualifiedName resolve(const SourceUnit& unit, const Expr& expr) const;
  QualifiedName resolve_dotted(const SourceUnit& unit, std::string_view dotted) const;

  /// Follows project re-exports (`from .impl import f` in a package) until
  /// reaching a definition or leaving the project.
  std::string canonicalize(std::string_view fq) const;

  const ModuleScope* scope(std::string_view module) const;

  /// Names a wildcard import of `module` binds.
  std::vector<std::string> public_names(std::string_view module) const;

  bool known_external(std::string_view canonical) const { return known_ && known_(canonical); }

 private:
  QualifiedName resolve_in(const SourceUnit& unit, const std::vector<std::string>& parts,
                           int depth) const;
  std::string canonicalize(std::string_view fq, int depth) const;

  const ProjectModel* project_;
  KnownExternal known_;
  std::map<std::string, ModuleScope, std::less<>> scopes_;
};

std::vector<std::string> split_dotted(std::string_view dotted);
std::string join_dotted(const std::vector<std::string>& parts, std::size_t from = 0);

}  // namespace hybridize::frontend
