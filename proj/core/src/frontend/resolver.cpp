#include "hybridize/frontend/resolver.h"

#include <algorithm>
#include <array>

namespace hybridize::frontend {

namespace {

constexpr int kMaxDepth = 16;

constexpr std::string_view kBuiltins[] = {
    "abs",          "aiter",      "all",        "anext",     "any",
    "ascii",        "bin",        "bool",       "breakpoint", "bytearray",
    "bytes",        "callable",   "chr",        "classmethod", "compile",
    "complex",      "delattr",    "dict",       "dir",       "divmod",
    "enumerate",    "eval",       "exec",       "filter",    "float",
    "format",       "frozenset",  "getattr",    "globals",   "hasattr",
    "hash",         "help",       "hex",        "id",        "input",
    "int",          "isinstance", "issubclass", "iter",      "len",
    "list",         "locals",     "map",        "max",       "memoryview",
    "min",          "next",       "object",     "oct",       "open",
    "ord",          "pow",        "print",      "property",  "range",
    "repr",         "reversed",   "round",      "set",       "setattr",
    "slice",        "sorted",     "staticmethod", "str",     "sum",
    "super",        "tuple",      "type",       "vars",      "zip",
    "__import__",   "Exception",  "BaseException", "ValueError", "TypeError",
    "KeyError",     "IndexError", "RuntimeError", "AttributeError", "NotImplementedError",
    "StopIteration", "AssertionError", "NotImplemented", "Ellipsis",
};

void collect_target_names(const Expr& target, std::set<std::string, std::less<>>& out) {
  switch (target.kind) {
    case ExprKind::Name:
      out.insert(target.id);
      break;
    case ExprKind::Tuple:
    case ExprKind::List:
      for (const ExprPtr& c : target.children) collect_target_names(*c, out);
      break;
    case ExprKind::Starred:
      if (target.child(0)) collect_target_names(*target.child(0), out);
      break;
    default:
      break;
  }
}

std::optional<std::vector<std::string>> literal_string_list(const Expr& e) {
  if (e.kind != ExprKind::List && e.kind != ExprKind::Tuple) return std::nullopt;
  std::vector<std::string> names;
  for (const ExprPtr& c : e.children) {
    if (c->kind != ExprKind::Constant || c->literal != LiteralKind::String) return std::nullopt;
    std::string_view raw = c->id;
    auto q = raw.find_first_of("'\"");
    if (q == std::string_view::npos) return std::nullopt;
    char quote = raw[q];
    std::size_t width = raw.compare(q, 3, std::string(3, quote)) == 0 ? 3 : 1;
    if (raw.size() < q + 2 * width) return std::nullopt;
    names.emplace_back(raw.substr(q + width, raw.size() - q - 2 * width));
  }
  return names;
}

void collect_body(const SourceUnit& unit, const Body& body, ModuleScope& scope) {
  for (const StmtPtr& sp : body) {
    const Stmt& s = *sp;
    switch (s.kind) {
      case StmtKind::FunctionDef:
        scope.defs[s.function->name] = unit.module + "." + s.function->name;
        break;
      case StmtKind::ClassDef:
        scope.defs[s.klass->name] = unit.module + "." + s.klass->name;
        break;
      case StmtKind::Import:
        for (const Alias& a : s.aliases) {
          if (!a.asname.empty()) {
            scope.imports[a.asname] = a.name;
          } else {
            std::string head = a.name.substr(0, a.name.find('.'));
            scope.imports[head] = head;
          }
        }
        break;
      case StmtKind::ImportFrom: {
        std::string source = resolve_relative(unit, s.level, s.module);
        if (source.empty() && s.level > 0) break;
        for (const Alias& a : s.aliases) {
          if (a.name == "*") {
            scope.wildcards.push_back(source);
            continue;
          }
          std::string bound = a.asname.empty() ? a.name : a.asname;
          scope.imports[bound] = source.empty() ? a.name : source + "." + a.name;
        }
        break;
      }
      case StmtKind::Assign:
      case StmtKind::AugAssign:
      case StmtKind::AnnAssign:
      case StmtKind::For:
        for (const ExprPtr& t : s.targets) {
          collect_target_names(*t, scope.assigned);
          if (s.kind == StmtKind::Assign && t->kind == ExprKind::Name && t->id == "__all__" &&
              s.value) {
            scope.all = literal_string_list(*s.value);
          }
        }
        break;
      case StmtKind::With:
        for (const WithItem& item : s.items) {
          if (item.target) collect_target_names(*item.target, scope.assigned);
        }
        break;
      default:
        break;
    }
    collect_body(unit, s.body, scope);
    collect_body(unit, s.orelse, scope);
    collect_body(unit, s.finalbody, scope);
    for (const ExceptHandler& h : s.handlers) {
      if (!h.name.empty()) scope.assigned.insert(h.name);
      collect_body(unit, h.body, scope);
    }
    for (const MatchCase& c : s.cases) collect_body(unit, c.body, scope);
  }
}

}  // namespace

const char* to_string(NameOrigin origin) {
  switch (origin) {
    case NameOrigin::Local: return "local";
    case NameOrigin::Imported: return "imported";
    case NameOrigin::Builtin: return "builtin";
    case NameOrigin::Unresolved: return "unresolved";
  }
  return "?";
}

std::string QualifiedName::str() const { return join_dotted(segments); }

std::vector<std::string> split_dotted(std::string_view dotted) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    auto dot = dotted.find('.', start);
    if (dot == std::string_view::npos) dot = dotted.size();
    if (dot > start) parts.emplace_back(dotted.substr(start, dot - start));
    start = dot + 1;
  }
  return parts;
}

std::string join_dotted(const std::vector<std::string>& parts, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < parts.size(); ++i) {
    if (i > from) out += '.';
    out += parts[i];
  }
  return out;
}

bool is_builtin_name(std::string_view name) {
  return std::find(std::begin(kBuiltins), std::end(kBuiltins), name) != std::end(kBuiltins);
}

ModuleScope collect_module_scope(const SourceUnit& unit) {
  ModuleScope scope;
  if (unit.tree) collect_body(unit, unit.tree->body, scope);
  return scope;
}

NameResolver::NameResolver(const ProjectModel& project, KnownExternal known)
    : project_(&project), known_(std::move(known)) {
  for (const auto& unit : project.units) {
    if (project.find_module(unit->module) != unit.get()) continue;
    scopes_.emplace(unit->module, collect_module_scope(*unit));
  }
}

const ModuleScope* NameResolver::scope(std::string_view module) const {
  auto it = scopes_.find(module);
  return it == scopes_.end() ? nullptr : &it->second;
}

std::vector<std::string> NameResolver::public_names(std::string_view module) const {
  const ModuleScope* s = scope(module);
  if (s == nullptr) return {};
  if (s->all) return *s->all;
  std::set<std::string> names;
  auto add = [&](const std::string& n) {
    if (!n.empty() && n[0] != '_') names.insert(n);
  };
  for (const auto& [n, _] : s->defs) add(n);
  for (const auto& [n, _] : s->imports) add(n);
  for (const auto& n : s->assigned) add(n);
  return {names.begin(), names.end()};
}

QualifiedName NameResolver::resolve(const SourceUnit& unit, const Expr& expr) const {
  std::string dotted = dotted_name(expr);
  if (dotted.empty()) return {};
  return resolve_dotted(unit, dotted);
}

QualifiedName NameResolver::resolve_dotted(const SourceUnit& unit, std::string_view dotted) const {
  std::vector<std::string> parts = split_dotted(dotted);
  if (parts.empty()) return {};
  return resolve_in(unit, parts, 0);
}

QualifiedName NameResolver::resolve_in(const SourceUnit& unit, const std::vector<std::string>& parts,
                                       int depth) const {
  QualifiedName unresolved{parts, NameOrigin::Unresolved};
  const ModuleScope* s = scope(unit.module);
  if (s == nullptr || depth > kMaxDepth) return unresolved;
  const std::string& head = parts[0];
  std::string rest = join_dotted(parts, 1);
  auto with_rest = [&](const std::string& base) { return rest.empty() ? base : base + "." + rest; };

  if (auto it = s->defs.find(head); it != s->defs.end()) {
    return {split_dotted(canonicalize(with_rest(it->second))), NameOrigin::Local};
  }
  if (auto it = s->imports.find(head); it != s->imports.end()) {
    return {split_dotted(canonicalize(with_rest(it->second))), NameOrigin::Imported};
  }
  if (s->assigned.count(head)) {
    return {split_dotted(with_rest(unit.module + "." + head)), NameOrigin::Local};
  }
  for (auto it = s->wildcards.rbegin(); it != s->wildcards.rend(); ++it) {
    const std::string& source = *it;
    if (const SourceUnit* src = project_->find_module(source)) {
      std::vector<std::string> names = public_names(source);
      if (std::find(names.begin(), names.end(), head) != names.end()) {
        QualifiedName q = resolve_in(*src, parts, depth + 1);
        if (q.resolved()) q.origin = NameOrigin::Imported;
        return q;
      }
    } else if (known_external(with_rest(source + "." + head))) {
      return {split_dotted(with_rest(source + "." + head)), NameOrigin::Imported};
    }
  }
  if (is_builtin_name(head)) {
    return {split_dotted(with_rest("builtins." + head)), NameOrigin::Builtin};
  }
  // The conventional `tf` root is accepted without an import, but only for
  // names the summaries know about.
  if (head == "tf" && known_external(with_rest("tensorflow"))) {
    return {split_dotted(with_rest("tensorflow")), NameOrigin::Imported};
  }
  return unresolved;
}

std::string NameResolver::canonicalize(std::string_view fq) const { return canonicalize(fq, 0); }

std::string NameResolver::canonicalize(std::string_view fq, int depth) const {
  std::vector<std::string> parts = split_dotted(fq);
  if (depth > kMaxDepth) return std::string(fq);
  // Longest prefix that names a project module.
  for (std::size_t n = parts.size(); n > 0; --n) {
    std::string module = join_dotted({parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(n)});
    const SourceUnit* unit = project_->find_module(module);
    if (unit == nullptr) continue;
    if (n == parts.size()) return std::string(fq);
    const ModuleScope* s = scope(module);
    if (s == nullptr) return std::string(fq);
    const std::string& name = parts[n];
    if (s->defs.count(name) || s->assigned.count(name)) return std::string(fq);
    std::string tail = join_dotted(parts, n + 1);
    if (auto it = s->imports.find(name); it != s->imports.end()) {
      return canonicalize(tail.empty() ? it->second : it->second + "." + tail, depth + 1);
    }
    QualifiedName q = resolve_in(*unit, std::vector<std::string>(parts.begin() + static_cast<std::ptrdiff_t>(n), parts.end()), depth + 1);
    if (q.resolved() && q.origin != NameOrigin::Builtin) return q.str();
    return std::string(fq);
  }
  return std::string(fq);
}

}  // namespace hybridize::frontend
