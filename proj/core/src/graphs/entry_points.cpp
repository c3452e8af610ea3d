#include "hybridize/graphs/entry_points.h"

#include <algorithm>
#include <functional>

namespace hybridize::graphs {

using frontend::Expr;
using frontend::ExprKind;
using frontend::Stmt;
using frontend::StmtKind;

const char* to_string(EntryKind kind) {
  return kind == EntryKind::ModuleScript ? "module_script" : "test_function";
}

namespace {

bool contains_call(const Expr* e) {
  if (e == nullptr) return false;
  if (e->kind == ExprKind::Call || e->kind == ExprKind::Await || e->kind == ExprKind::Yield ||
      e->kind == ExprKind::YieldFrom) {
    return true;
  }
  if (e->kind == ExprKind::Lambda) return false;
  for (const frontend::ExprPtr& c : e->children) {
    if (contains_call(c.get())) return true;
  }
  for (const frontend::Comprehension& c : e->generators) {
    if (contains_call(c.iter.get())) return true;
    for (const frontend::ExprPtr& cond : c.conditions) {
      if (contains_call(cond.get())) return true;
    }
  }
  return false;
}

bool passive(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Import:
    case StmtKind::ImportFrom:
    case StmtKind::Pass:
    case StmtKind::Global:
      return true;
    case StmtKind::FunctionDef:
    case StmtKind::ClassDef:
      // Decorators and bases run at definition time.
      return true;
    case StmtKind::Expr:
      return s.value->kind == ExprKind::Constant &&
             (s.value->literal == frontend::LiteralKind::String || s.value->literal == frontend::LiteralKind::Ellipsis);
    case StmtKind::Assign:
    case StmtKind::AnnAssign:
    case StmtKind::AugAssign: {
      if (contains_call(s.value.get())) return false;
      for (const frontend::ExprPtr& t : s.targets) {
        if (contains_call(t.get())) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

bool is_module_script(const frontend::Module& module) {
  return !std::all_of(module.body.begin(), module.body.end(),
                      [](const frontend::StmtPtr& s) { return passive(*s); });
}

bool is_test_file(std::string_view path) {
  std::size_t slash = path.rfind('/');
  std::string_view base = slash == std::string_view::npos ? path : path.substr(slash + 1);
  if (base.size() < 3 || base.substr(base.size() - 3) != ".py") return false;
  std::string_view stem = base.substr(0, base.size() - 3);
  return stem.rfind("test_", 0) == 0 ||
         (stem.size() > 5 && stem.substr(stem.size() - 5) == "_test");
}

std::vector<EntryPoint> discover_entry_points(const frontend::Program& program, bool pytest_entry_points) {
  std::vector<EntryPoint> entries;
  for (const auto& unit : program.project->units) {
    if (!unit->parsed()) continue;
    auto init = program.module_inits.find(unit->module);
    if (init == program.module_inits.end()) continue;
    if (is_module_script(*unit->tree)) {
      entries.push_back({EntryKind::ModuleScript, unit->module, unit->module, init->second, -1});
    }
    if (!pytest_entry_points || !is_test_file(unit->path)) continue;
    std::vector<const frontend::FunctionUnit*> tests;
    for (const frontend::FunctionUnit& f : program.functions) {
      if (f.unit != unit.get() || f.kind != frontend::FunctionKind::Def) continue;
      if (f.name.rfind("test", 0) != 0) continue;
      bool top_level = f.parent == init->second && f.enclosing_class < 0;
      bool test_method = false;
      if (f.enclosing_class >= 0) {
        const frontend::ClassInfo& c = program.classes[static_cast<std::size_t>(f.enclosing_class)];
        test_method = c.parent == init->second && c.name.rfind("Test", 0) == 0;
      }
      if (!top_level && !test_method) continue;
      if (f.name.rfind("test_", 0) != 0 && f.name != "test") continue;
      tests.push_back(&f);
    }
    std::sort(tests.begin(), tests.end(), [](const auto* a, const auto* b) { return a->line < b->line; });
    for (const frontend::FunctionUnit* f : tests) {
      entries.push_back({EntryKind::TestFunction, f->fq_name.str(), unit->module, f->id, f->enclosing_class});
    }
  }
  return entries;
}

}  // namespace hybridize::graphs
