#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hybridize/frontend/tokenizer.h"

namespace hybridize::frontend {

enum class LiteralKind : std::uint8_t { Number, String, Bytes, Boolean, None, Ellipsis };

const char* to_string(LiteralKind kind);

enum class ExprKind : std::uint8_t {
  Name,
  Constant,
  FormattedString,
  Attribute,
  Subscript,
  Slice,
  Call,
  Tuple,
  List,
  Set,
  Dict,
  ListComp,
  SetComp,
  DictComp,
  GeneratorExp,
  Lambda,
  IfExp,
  BoolOp,
  BinOp,
  UnaryOp,
  Compare,
  Starred,
  Await,
  Yield,
  YieldFrom,
  NamedExpr,
};

const char* to_string(ExprKind kind);

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;
using Body = std::vector<StmtPtr>;

/// `name=value` call argument; `name` is empty for `**value`.
struct Keyword {
  std::string name;
  ExprPtr value;
  SourceRange range;
};

struct Comprehension {
  ExprPtr target;
  ExprPtr iter;
  std::vector<ExprPtr> conditions;
  bool is_async = false;
};

enum class ParamKind : std::uint8_t { PositionalOnly, Normal, VarArgs, KeywordOnly, VarKeywords };

/// The range of a parameter covers the name only; annotations and defaults
/// carry their own ranges.
struct Parameter {
  std::string name;
  ParamKind kind = ParamKind::Normal;
  ExprPtr annotation;
  ExprPtr default_value;
  SourceRange range;
};

/// Expression node. Operand layout by kind:
///   Attribute       children = {value}; id = attribute name
///   Subscript       children = {value, index}
///   Slice           children = {lower, upper, step}, entries may be null
///   Call            children = {func, positional args...}; keywords
///   Tuple/List/Set  children = elements
///   Dict            children = {key0, value0, key1, value1, ...}; a null key
///                   marks `**value`
///   *Comp/GenExp    children = {element} or {key, value}; generators
///   Lambda          children = {body}; params
///   IfExp           children = {body, test, orelse}
///   BoolOp/BinOp    children = operands; id = operator
///   UnaryOp         children = {operand}; id = operator
///   Compare         children = {left, comparators...}; ops
///   Starred         children = {value}; id = "*" or "**"
///   Await/Yield*    children = {value} or empty
///   NamedExpr       children = {target, value}
///   Name            id = identifier
///   Constant        id = raw source text; literal = kind
struct Expr {
  ExprKind kind;
  SourceRange range;
  std::string id;
  LiteralKind literal = LiteralKind::None;
  std::vector<ExprPtr> children;
  std::vector<Keyword> keywords;
  std::vector<Comprehension> generators;
  std::vector<std::string> ops;
  std::vector<Parameter> params;

  Expr(ExprKind k, SourceRange r) : kind(k), range(r) {}

  const Expr* child(std::size_t i) const {
    return i < children.size() ? children[i].get() : nullptr;
  }
};

struct Alias {
  std::string name;    // dotted module or member name
  std::string asname;  // empty when absent
  SourceRange range;
};

struct ExceptHandler {
  ExprPtr type;
  std::string name;
  Body body;
  SourceRange range;
};

struct WithItem {
  ExprPtr context;
  ExprPtr target;
};

/// A decorator line. `line_begin` is the start of the physical line holding
/// the `@`; `line_end` is the end of the logical line, after its newline.
struct Decorator {
  ExprPtr expr;
  SourcePos at;
  SourcePos line_begin;
  SourcePos line_end;
};

struct FunctionDef {
  std::string name;
  std::vector<Parameter> params;
  ExprPtr returns;
  std::vector<Decorator> decorators;
  Body body;
  SourcePos keyword;  // position of `def` (or `async`)
  SourcePos line_begin;  // start of the physical line holding `keyword`
  bool is_async = false;
};

struct ClassDef {
  std::string name;
  std::vector<ExprPtr> bases;
  std::vector<Keyword> keywords;
  std::vector<Decorator> decorators;
  Body body;
  SourcePos keyword;
};

struct MatchCase {
  ExprPtr pattern;
  ExprPtr guard;
  Body body;
};

enum class StmtKind : std::uint8_t {
  Expr,
  Assign,
  AugAssign,
  AnnAssign,
  Return,
  Pass,
  Break,
  Continue,
  Raise,
  Global,
  Nonlocal,
  Delete,
  Assert,
  Import,
  ImportFrom,
  If,
  For,
  While,
  Try,
  With,
  FunctionDef,
  ClassDef,
  Match,
};

const char* to_string(StmtKind kind);

/// Statement node. Field use by kind:
///   Expr            value
///   Assign          targets (chained), value
///   AugAssign       targets = {target}, op, value
///   AnnAssign       targets = {target}, annotation, value (may be null)
///   Return          value (may be null)
///   Raise           value = exception, cause
///   Global/Nonlocal names
///   Delete          targets
///   Assert          value = test, message
///   Import          aliases
///   ImportFrom      module, level, aliases (a single "*" alias for wildcard)
///   If/While        value = test, body, orelse
///   For             targets = {target}, value = iterable, body, orelse
///   Try             body, handlers, orelse, finalbody
///   With            items, body
///   FunctionDef     function
///   ClassDef        klass
///   Match           value = subject, cases
struct Stmt {
  StmtKind kind;
  SourceRange range;
  std::vector<ExprPtr> targets;
  ExprPtr value;
  ExprPtr annotation;
  ExprPtr cause;
  ExprPtr message;
  std::string op;
  std::vector<std::string> names;
  std::vector<Alias> aliases;
  std::string module;
  int level = 0;
  Body body;
  Body orelse;
  Body finalbody;
  std::vector<ExceptHandler> handlers;
  std::vector<WithItem> items;
  std::vector<MatchCase> cases;
  std::unique_ptr<FunctionDef> function;
  std::unique_ptr<ClassDef> klass;
  bool is_async = false;

  Stmt(StmtKind k, SourceRange r) : kind(k), range(r) {}
};

struct Module {
  Body body;
};

/// Canonical, position-free rendering of a tree. Two trees with equal dumps
/// are structurally identical.
std::string dump(const Module& module);
std::string dump(const Expr& expr);
std::string dump(const Stmt& stmt);

/// Dotted name of a Name/Attribute chain ("tf.keras.Model"), or empty when
/// `expr` is anything else.
std::string dotted_name(const Expr& expr);

}  // namespace hybridize::frontend
