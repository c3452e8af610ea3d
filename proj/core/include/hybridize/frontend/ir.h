#pragma once

#include <string>
#include <vector>

#include "hybridize/frontend/ast.h"

namespace hybridize::frontend {

enum class InstrKind : std::uint8_t {
  LoadName,
  StoreName,
  Call,
  AttrRead,
  AttrWrite,
  SubscriptRead,
  SubscriptWrite,
  ContainerBuild,
  Iterate,
  Return,
  MakeFunction,
  MakeClass,
  Decorate,
  Import,
  Operator,
  Opaque,
};

const char* to_string(InstrKind kind);

/// Where a LoadName/StoreName variable lives.
enum class NameScope : std::uint8_t {
  Local,     // local of function `owner`
  Global,    // module-level name of `module`
  External,  // library or builtin name; `name` holds the canonical api
};

enum class ContainerKind : std::uint8_t { List, Tuple, Set, Dict, Generator };

const char* to_string(ContainerKind kind);

struct Operand {
  enum class Kind : std::uint8_t { None, Value, Constant };
  Kind kind = Kind::None;
  int value = -1;  // index of the defining instruction
  LiteralKind literal = LiteralKind::None;

  static Operand none() { return {}; }
  static Operand of(int v) { return {Kind::Value, v, LiteralKind::None}; }
  static Operand constant(LiteralKind k) { return {Kind::Constant, -1, k}; }
  bool is_value() const { return kind == Kind::Value; }
  bool is_constant() const { return kind == Kind::Constant; }
};

/// Three-address instruction. Instructions that define a value are referred
/// to by their index; operand layout by kind:
///   LoadName        -> value; name, scope, owner/module
///   StoreName       {value}; name, scope, owner/module
///   Call            -> value; {callee, positional..., keyword...}; keywords
///                   names the trailing keyword operands ("" marks **kwargs)
///   AttrRead        -> value; {object}; name = attribute
///   AttrWrite       {object, value} (value absent for `del`); name
///   SubscriptRead   -> value; {object, index}; element = -1 or tuple slot
///   SubscriptWrite  {object, index, value}
///   ContainerBuild  -> value; elements (Dict: key, value, key, value...)
///   Iterate         -> value; {iterable}
///   Return          {value}
///   MakeFunction    -> value; target = function id
///   MakeClass       -> value; {bases...}; target = class id
///   Decorate        -> value; {decorator, decorated}
///   Import          -> value; name = absolute dotted target
///   Operator        -> value; operands; name = operator
///   Opaque          -> value; operands evaluated for effect only
struct Instruction {
  InstrKind kind = InstrKind::Opaque;
  bool defines = false;
  std::string name;
  NameScope scope = NameScope::Local;
  int owner = -1;
  std::string module;
  std::vector<Operand> operands;
  std::vector<std::string> keywords;
  int element = -1;
  ContainerKind container = ContainerKind::List;
  int target = -1;
  bool opaque = false;     // dynamic construct; consumers treat the result as unknown
  bool is_delete = false;  // AttrWrite/SubscriptWrite from `del`
  bool inplace = false;    // Operator from an augmented assignment
  std::uint32_t line = 0;
  std::uint32_t column = 0;
};

struct IRFunction {
  std::string fq_name;
  std::vector<Instruction> instructions;
};

/// Human-readable listing, one instruction per line (`%3 = call %1(%2)`).
std::string to_string(const IRFunction& fn);

}  // namespace hybridize::frontend
