#include <algorithm>
#include <functional>

#include "hybridize/frontend/program.h"

namespace hybridize::frontend {

int FunctionUnit::receiver_index() const {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].is_receiver) return static_cast<int>(i);
  }
  return -1;
}

const FunctionUnit* Program::find_function(std::string_view fq) const {
  for (const FunctionUnit& f : functions) {
    if (f.fq_name.str() == fq) return &f;
  }
  return nullptr;
}

std::vector<int> Program::linearize(int cls) const {
  std::vector<int> order;
  std::function<void(int)> visit = [&](int c) {
    if (std::find(order.begin(), order.end(), c) != order.end()) return;
    order.push_back(c);
    for (int b : classes[static_cast<std::size_t>(c)].bases) visit(b);
  };
  visit(cls);
  return order;
}

std::vector<std::string> Program::all_external_bases(int cls) const {
  std::vector<std::string> out;
  for (int c : linearize(cls)) {
    for (const std::string& b : classes[static_cast<std::size_t>(c)].external_bases) {
      if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    }
  }
  return out;
}

bool Program::hierarchy_open(int cls) const {
  for (int c : linearize(cls)) {
    if (classes[static_cast<std::size_t>(c)].open) return true;
  }
  return false;
}

namespace {

void walk_expr(const Expr* e, const std::function<void(const Expr&)>& fn) {
  if (e == nullptr) return;
  fn(*e);
  if (e->kind == ExprKind::Lambda) return;
  for (const ExprPtr& c : e->children) walk_expr(c.get(), fn);
  for (const Keyword& k : e->keywords) walk_expr(k.value.get(), fn);
  for (const Comprehension& c : e->generators) {
    walk_expr(c.target.get(), fn);
    walk_expr(c.iter.get(), fn);
    for (const ExprPtr& cond : c.conditions) walk_expr(cond.get(), fn);
  }
}

/// Calls `fn` on every expression owned directly by `s` (not by nested
/// statements).
void stmt_exprs(const Stmt& s, const std::function<void(const Expr*)>& fn) {
  for (const ExprPtr& t : s.targets) fn(t.get());
  fn(s.value.get());
  fn(s.annotation.get());
  fn(s.cause.get());
  fn(s.message.get());
  for (const WithItem& item : s.items) {
    fn(item.context.get());
    fn(item.target.get());
  }
  for (const ExceptHandler& h : s.handlers) fn(h.type.get());
  for (const MatchCase& c : s.cases) {
    fn(c.pattern.get());
    fn(c.guard.get());
  }
}

void target_names(const Expr* t, std::set<std::string>& out) {
  if (t == nullptr) return;
  switch (t->kind) {
    case ExprKind::Name:
      out.insert(t->id);
      break;
    case ExprKind::Tuple:
    case ExprKind::List:
      for (const ExprPtr& c : t->children) target_names(c.get(), out);
      break;
    case ExprKind::Starred:
      target_names(t->child(0), out);
      break;
    default:
      break;
  }
}

struct Bindings {
  std::set<std::string> locals;
  std::set<std::string> globals;
  std::set<std::string> nonlocals;
  bool has_yield = false;
};

void collect_bindings(const Body& body, Bindings& b) {
  for (const StmtPtr& sp : body) {
    const Stmt& s = *sp;
    switch (s.kind) {
      case StmtKind::Assign:
      case StmtKind::AugAssign:
      case StmtKind::AnnAssign:
      case StmtKind::For:
      case StmtKind::Delete:
        for (const ExprPtr& t : s.targets) target_names(t.get(), b.locals);
        break;
      case StmtKind::With:
        for (const WithItem& item : s.items) target_names(item.target.get(), b.locals);
        break;
      case StmtKind::Import:
        for (const Alias& a : s.aliases) {
          b.locals.insert(a.asname.empty() ? a.name.substr(0, a.name.find('.')) : a.asname);
        }
        break;
      case StmtKind::ImportFrom:
        for (const Alias& a : s.aliases) {
          if (a.name != "*") b.locals.insert(a.asname.empty() ? a.name : a.asname);
        }
        break;
      case StmtKind::FunctionDef:
        b.locals.insert(s.function->name);
        continue;
      case StmtKind::ClassDef:
        b.locals.insert(s.klass->name);
        continue;
      case StmtKind::Global:
        b.globals.insert(s.names.begin(), s.names.end());
        break;
      case StmtKind::Nonlocal:
        b.nonlocals.insert(s.names.begin(), s.names.end());
        break;
      default:
        break;
    }
    stmt_exprs(s, [&](const Expr* e) {
      walk_expr(e, [&](const Expr& x) {
        if (x.kind == ExprKind::NamedExpr) target_names(x.child(0), b.locals);
        if (x.kind == ExprKind::Yield || x.kind == ExprKind::YieldFrom) b.has_yield = true;
      });
    });
    for (const ExceptHandler& h : s.handlers) {
      if (!h.name.empty()) b.locals.insert(h.name);
      collect_bindings(h.body, b);
    }
    collect_bindings(s.body, b);
    collect_bindings(s.orelse, b);
    collect_bindings(s.finalbody, b);
    for (const MatchCase& c : s.cases) collect_bindings(c.body, b);
  }
  for (const std::string& g : b.globals) b.locals.erase(g);
  for (const std::string& n : b.nonlocals) b.locals.erase(n);
}

class Lowerer {
 public:
  Lowerer(Program& program) : prog_(program) {}

  void run() {
    for (const auto& unit : prog_.project->units) {
      if (!unit->parsed()) continue;
      if (prog_.project->find_module(unit->module) != unit.get()) continue;
      FunctionUnit init;
      init.id = static_cast<int>(prog_.functions.size());
      init.kind = FunctionKind::ModuleInit;
      init.name = "<module>";
      init.fq_name = {split_dotted(unit->module), NameOrigin::Local};
      init.fq_name.segments.push_back("<module>");
      init.unit = unit.get();
      init.line = 1;
      init.ir.fq_name = init.fq_name.str();
      prog_.module_inits[unit->module] = init.id;
      prog_.functions.push_back(std::move(init));
      declare_body(*unit, unit->tree->body, prog_.module_inits[unit->module], -1, unit->module);
    }
    for (ClassInfo& c : prog_.classes) prog_.class_by_name.emplace(c.fq_name, c.id);
    for (ClassInfo& c : prog_.classes) resolve_bases(c);
    std::size_t declared = prog_.functions.size();
    for (std::size_t i = 0; i < declared; ++i) classify_function(prog_.functions[i]);
    for (std::size_t i = 0; i < declared; ++i) lower_unit(static_cast<int>(i));
  }

 private:
  struct ClassBody {
    int cls;
    Operand value;
  };

  struct Scope {
    int fid = -1;
    bool module_level = false;
    Bindings bindings;
    int generator = -1;
    std::vector<std::map<std::string, std::string>> comprehensions;
    std::vector<ClassBody> classes;
  };

  // ---- declaration pass ----------------------------------------------------

  void declare_body(const SourceUnit& unit, const Body& body, int parent, int cls,
                    const std::string& prefix) {
    for (const StmtPtr& sp : body) {
      const Stmt& s = *sp;
      if (s.kind == StmtKind::FunctionDef) {
        const FunctionDef& def = *s.function;
        FunctionUnit f;
        f.id = static_cast<int>(prog_.functions.size());
        f.kind = FunctionKind::Def;
        f.name = def.name;
        f.fq_name = {split_dotted(prefix), NameOrigin::Local};
        f.fq_name.segments.push_back(def.name);
        f.unit = &unit;
        f.def = &def;
        f.parent = parent;
        f.enclosing_class = cls;
        f.line = def.keyword.line;
        f.column = def.keyword.column;
        for (const Parameter& p : def.params) {
          f.params.push_back(ParamInfo{p.name, p.kind, p.annotation.get(), p.default_value != nullptr, false});
        }
        f.ir.fq_name = f.fq_name.str();
        fn_of_stmt_[&s] = f.id;
        bool accessor = std::any_of(def.decorators.begin(), def.decorators.end(), [](const Decorator& d) {
          std::string dotted = dotted_name(*d.expr);
          auto ends = [&](std::string_view suffix) {
            return dotted.size() > suffix.size() &&
                   dotted.compare(dotted.size() - suffix.size(), suffix.size(), suffix) == 0;
          };
          return ends(".setter") || ends(".deleter");
        });
        if (cls >= 0 && !accessor) {
          prog_.classes[static_cast<std::size_t>(cls)].methods[def.name] = f.id;
          prog_.classes[static_cast<std::size_t>(cls)].attributes.insert(def.name);
        }
        std::string fq = f.fq_name.str();
        int id = f.id;
        prog_.functions.push_back(std::move(f));
        declare_body(unit, def.body, id, -1, fq);
        continue;
      }
      if (s.kind == StmtKind::ClassDef) {
        const ClassDef& def = *s.klass;
        ClassInfo c;
        c.id = static_cast<int>(prog_.classes.size());
        c.name = def.name;
        c.fq_name = prefix + "." + def.name;
        c.unit = &unit;
        c.def = &def;
        c.parent = parent;
        c.line = def.keyword.line;
        cls_of_stmt_[&s] = c.id;
        if (cls >= 0) prog_.classes[static_cast<std::size_t>(cls)].attributes.insert(def.name);
        std::string fq = c.fq_name;
        int id = c.id;
        prog_.classes.push_back(std::move(c));
        declare_body(unit, def.body, parent, id, fq);
        continue;
      }
      if (cls >= 0) {
        std::set<std::string> names;
        for (const ExprPtr& t : s.targets) target_names(t.get(), names);
        for (const std::string& n : names) {
          prog_.classes[static_cast<std::size_t>(cls)].attributes.insert(n);
          prog_.written_attributes.insert(n);
        }
      }
      declare_body(unit, s.body, parent, cls, prefix);
      declare_body(unit, s.orelse, parent, cls, prefix);
      declare_body(unit, s.finalbody, parent, cls, prefix);
      for (const ExceptHandler& h : s.handlers) declare_body(unit, h.body, parent, cls, prefix);
      for (const MatchCase& c : s.cases) declare_body(unit, c.body, parent, cls, prefix);
    }
  }

  void resolve_bases(ClassInfo& c) {
    for (const ExprPtr& base : c.def->bases) {
      if (base->kind == ExprKind::Starred) {
        c.open = true;
        continue;
      }
      QualifiedName q = prog_.resolver->resolve(*c.unit, *base);
      c.base_names.push_back(q);
      if (!q.resolved()) {
        // A class defined in the same function body is not visible from
        // module scope; fall back to a sibling with that name.
        std::string dotted = dotted_name(*base);
        int sibling = -1;
        for (const ClassInfo& other : prog_.classes) {
          if (other.id != c.id && other.parent == c.parent && other.name == dotted) sibling = other.id;
        }
        if (sibling >= 0) {
          c.bases.push_back(sibling);
        } else {
          c.open = true;
        }
        continue;
      }
      auto it = prog_.class_by_name.find(q.str());
      if (it != prog_.class_by_name.end() && it->second != c.id) {
        c.bases.push_back(it->second);
      } else if (q.origin == NameOrigin::Local && prog_.project->find_module(q.segments[0]) != nullptr) {
        // A project name that is not a class (e.g. an assigned alias).
        c.open = true;
      } else {
        c.external_bases.push_back(q.str());
      }
    }
  }

  void classify_function(FunctionUnit& f) {
    if (f.def == nullptr) return;
    for (const Decorator& d : f.def->decorators) {
      QualifiedName q = prog_.resolver->resolve(*f.unit, *d.expr);
      std::string name = q.str();
      if (name == "builtins.staticmethod") f.is_staticmethod = true;
      if (name == "builtins.classmethod") f.is_classmethod = true;
      if (name == "builtins.property" || name == "functools.cached_property") f.is_property = true;
    }
    if (f.enclosing_class >= 0 && !f.is_staticmethod && !f.params.empty() &&
        (f.params[0].kind == ParamKind::Normal || f.params[0].kind == ParamKind::PositionalOnly)) {
      f.params[0].is_receiver = true;
    }
  }

  // ---- lowering pass -------------------------------------------------------

  void lower_unit(int fid) {
    FunctionUnit& f = prog_.functions[static_cast<std::size_t>(fid)];
    Scope scope;
    scope.fid = fid;
    if (f.kind == FunctionKind::ModuleInit) {
      scope.module_level = true;
      const Body& body = f.unit->tree->body;
      lower_body(scope, body);
      return;
    }
    const Body& body = f.def->body;
    for (const ParamInfo& p : f.params) scope.bindings.locals.insert(p.name);
    collect_bindings(body, scope.bindings);
    f.is_generator = scope.bindings.has_yield;
    bindings_[fid] = scope.bindings;
    begin_function(scope);
    lower_body(scope, body);
  }

  void begin_function(Scope& scope) {
    const FunctionUnit& f = fn(scope);
    // Parameters are bound to their locals by the graph builder; defaults
    // are evaluated in the enclosing scope and ignored here.
    if (scope.bindings.has_yield) {
      Instruction gen;
      gen.kind = InstrKind::ContainerBuild;
      gen.defines = true;
      gen.container = ContainerKind::Generator;
      gen.line = f.line;
      gen.column = f.column;
      scope.generator = emit(scope, std::move(gen));
      Instruction ret;
      ret.kind = InstrKind::Return;
      ret.operands.push_back(Operand::of(scope.generator));
      ret.line = f.line;
      ret.column = f.column;
      emit(scope, std::move(ret));
    }
  }

  FunctionUnit& fn(const Scope& scope) { return prog_.functions[static_cast<std::size_t>(scope.fid)]; }

  int emit(Scope& scope, Instruction ins) {
    auto& list = fn(scope).ir.instructions;
    list.push_back(std::move(ins));
    return static_cast<int>(list.size()) - 1;
  }

  Instruction at(InstrKind kind, const SourcePos& pos, bool defines) {
    Instruction ins;
    ins.kind = kind;
    ins.defines = defines;
    ins.line = pos.line;
    ins.column = pos.column;
    return ins;
  }

  Operand value(Scope& scope, Instruction ins) {
    ins.defines = true;
    return Operand::of(emit(scope, std::move(ins)));
  }

  // -- names --

  struct Resolved {
    NameScope scope;
    int owner = -1;
    std::string module;
    std::string name;
    const ClassBody* class_body = nullptr;
  };

  bool binds_locally(int fid, const std::string& name) {
    auto it = bindings_.find(fid);
    return it != bindings_.end() && it->second.locals.count(name) != 0;
  }

  Resolved resolve_name(const Scope& scope, const std::string& name, bool store) {
    const FunctionUnit& f = prog_.functions[static_cast<std::size_t>(scope.fid)];
    const std::string& module = f.unit->module;
    for (auto it = scope.comprehensions.rbegin(); it != scope.comprehensions.rend(); ++it) {
      auto m = it->find(name);
      if (m != it->end()) return {NameScope::Local, scope.fid, {}, m->second};
    }
    if (!scope.classes.empty()) {
      const ClassBody& cb = scope.classes.back();
      const ClassInfo& c = prog_.classes[static_cast<std::size_t>(cb.cls)];
      if (store || c.attributes.count(name)) return {NameScope::Local, -1, {}, name, &cb};
    }
    if (scope.bindings.globals.count(name)) return {NameScope::Global, -1, module, name};
    if (scope.bindings.nonlocals.count(name)) {
      for (int p = f.parent; p >= 0; p = prog_.functions[static_cast<std::size_t>(p)].parent) {
        if (prog_.functions[static_cast<std::size_t>(p)].kind == FunctionKind::ModuleInit) break;
        if (binds_locally(p, name)) return {NameScope::Local, p, {}, name};
      }
      return {NameScope::Global, -1, module, name};
    }
    if (scope.module_level) {
      return store ? Resolved{NameScope::Global, -1, module, name} : resolve_global(*f.unit, name);
    }
    if (store || scope.bindings.locals.count(name)) return {NameScope::Local, scope.fid, {}, name};
    for (int p = f.parent; p >= 0; p = prog_.functions[static_cast<std::size_t>(p)].parent) {
      if (prog_.functions[static_cast<std::size_t>(p)].kind == FunctionKind::ModuleInit) break;
      if (binds_locally(p, name)) return {NameScope::Local, p, {}, name};
    }
    return resolve_global(*f.unit, name);
  }

  Resolved resolve_global(const SourceUnit& unit, const std::string& name) {
    const ModuleScope* ms = prog_.resolver->scope(unit.module);
    if (ms != nullptr &&
        (ms->defs.count(name) || ms->imports.count(name) || ms->assigned.count(name))) {
      return {NameScope::Global, -1, unit.module, name};
    }
    if (ms != nullptr) {
      for (const std::string& w : ms->wildcards) {
        if (prog_.project->find_module(w) == nullptr) continue;
        std::vector<std::string> names = prog_.resolver->public_names(w);
        if (std::find(names.begin(), names.end(), name) != names.end()) {
          return {NameScope::Global, -1, unit.module, name};
        }
      }
    }
    QualifiedName q = prog_.resolver->resolve_dotted(unit, name);
    if (q.resolved() && q.origin != NameOrigin::Local) return {NameScope::External, -1, {}, q.str()};
    return {NameScope::Global, -1, unit.module, name};
  }

  Operand load(Scope& scope, const std::string& name, const SourcePos& pos) {
    Resolved r = resolve_name(scope, name, false);
    if (r.class_body != nullptr) {
      Instruction ins = at(InstrKind::AttrRead, pos, true);
      ins.name = name;
      ins.operands.push_back(r.class_body->value);
      return value(scope, std::move(ins));
    }
    Instruction ins = at(InstrKind::LoadName, pos, true);
    ins.name = r.name;
    ins.scope = r.scope;
    ins.owner = r.owner;
    ins.module = r.module;
    return value(scope, std::move(ins));
  }

  void store(Scope& scope, const std::string& name, Operand v, const SourcePos& pos) {
    Resolved r = resolve_name(scope, name, true);
    if (r.class_body != nullptr) {
      Instruction ins = at(InstrKind::AttrWrite, pos, false);
      ins.name = name;
      ins.operands = {r.class_body->value, v};
      emit(scope, std::move(ins));
      return;
    }
    Instruction ins = at(InstrKind::StoreName, pos, false);
    ins.name = r.name;
    ins.scope = r.scope;
    ins.owner = r.owner;
    ins.module = r.module;
    ins.operands.push_back(v);
    emit(scope, std::move(ins));
  }

  // -- statements --

  void lower_body(Scope& scope, const Body& body) {
    for (const StmtPtr& s : body) lower_stmt(scope, *s);
  }

  void lower_stmt(Scope& scope, const Stmt& s) {
    const SourcePos& pos = s.range.begin;
    switch (s.kind) {
      case StmtKind::Expr:
        lower_expr(scope, s.value.get());
        break;
      case StmtKind::Assign: {
        Operand v = lower_expr(scope, s.value.get());
        for (const ExprPtr& t : s.targets) assign(scope, *t, v);
        break;
      }
      case StmtKind::AnnAssign:
        if (s.value) assign(scope, *s.targets[0], lower_expr(scope, s.value.get()));
        break;
      case StmtKind::AugAssign:
        lower_augassign(scope, s);
        break;
      case StmtKind::Return: {
        Instruction ins = at(InstrKind::Return, pos, false);
        ins.operands.push_back(s.value ? lower_expr(scope, s.value.get()) : Operand::constant(LiteralKind::None));
        if (!scope.module_level) emit(scope, std::move(ins));
        break;
      }
      case StmtKind::Raise:
        lower_expr(scope, s.value.get());
        lower_expr(scope, s.cause.get());
        break;
      case StmtKind::Assert:
        lower_expr(scope, s.value.get());
        lower_expr(scope, s.message.get());
        break;
      case StmtKind::Delete:
        for (const ExprPtr& t : s.targets) lower_delete(scope, *t);
        break;
      case StmtKind::Import:
        for (const Alias& a : s.aliases) lower_import(scope, a, pos);
        break;
      case StmtKind::ImportFrom:
        lower_import_from(scope, s, pos);
        break;
      case StmtKind::If:
      case StmtKind::While:
        lower_expr(scope, s.value.get());
        lower_body(scope, s.body);
        lower_body(scope, s.orelse);
        break;
      case StmtKind::For: {
        Operand iter = lower_expr(scope, s.value.get());
        Instruction ins = at(InstrKind::Iterate, pos, true);
        ins.operands.push_back(iter);
        Operand elem = value(scope, std::move(ins));
        assign(scope, *s.targets[0], elem);
        lower_body(scope, s.body);
        lower_body(scope, s.orelse);
        break;
      }
      case StmtKind::Try:
        lower_body(scope, s.body);
        for (const ExceptHandler& h : s.handlers) {
          lower_expr(scope, h.type.get());
          lower_body(scope, h.body);
        }
        lower_body(scope, s.orelse);
        lower_body(scope, s.finalbody);
        break;
      case StmtKind::With:
        for (const WithItem& item : s.items) {
          Operand ctx = lower_expr(scope, item.context.get());
          if (item.target) assign(scope, *item.target, ctx);
        }
        lower_body(scope, s.body);
        break;
      case StmtKind::FunctionDef:
        lower_def(scope, s);
        break;
      case StmtKind::ClassDef:
        lower_class(scope, s);
        break;
      case StmtKind::Match:
        lower_expr(scope, s.value.get());
        for (const MatchCase& c : s.cases) {
          lower_expr(scope, c.guard.get());
          lower_body(scope, c.body);
        }
        break;
      case StmtKind::Pass:
      case StmtKind::Break:
      case StmtKind::Continue:
      case StmtKind::Global:
      case StmtKind::Nonlocal:
        break;
    }
  }

  void lower_augassign(Scope& scope, const Stmt& s) {
    const Expr& t = *s.targets[0];
    const SourcePos& pos = s.range.begin;
    Operand rhs = lower_expr(scope, s.value.get());
    auto combine = [&](Operand current) {
      Instruction ins = at(InstrKind::Operator, pos, true);
      ins.name = s.op;
      ins.inplace = true;
      ins.operands = {current, rhs};
      return value(scope, std::move(ins));
    };
    switch (t.kind) {
      case ExprKind::Name:
        store(scope, t.id, combine(load(scope, t.id, t.range.begin)), pos);
        break;
      case ExprKind::Attribute: {
        Operand obj = lower_expr(scope, t.child(0));
        Instruction read = at(InstrKind::AttrRead, t.range.begin, true);
        read.name = t.id;
        read.operands.push_back(obj);
        Operand result = combine(value(scope, std::move(read)));
        Instruction write = at(InstrKind::AttrWrite, pos, false);
        write.name = t.id;
        write.operands = {obj, result};
        emit(scope, std::move(write));
        break;
      }
      case ExprKind::Subscript: {
        Operand obj = lower_expr(scope, t.child(0));
        Operand idx = lower_expr(scope, t.child(1));
        Instruction read = at(InstrKind::SubscriptRead, t.range.begin, true);
        read.operands = {obj, idx};
        Operand result = combine(value(scope, std::move(read)));
        Instruction write = at(InstrKind::SubscriptWrite, pos, false);
        write.operands = {obj, idx, result};
        emit(scope, std::move(write));
        break;
      }
      default:
        lower_expr(scope, &t);
        break;
    }
  }

  void lower_delete(Scope& scope, const Expr& t) {
    switch (t.kind) {
      case ExprKind::Attribute: {
        Instruction ins = at(InstrKind::AttrWrite, t.range.begin, false);
        ins.name = t.id;
        ins.is_delete = true;
        ins.operands.push_back(lower_expr(scope, t.child(0)));
        emit(scope, std::move(ins));
        break;
      }
      case ExprKind::Subscript: {
        Instruction ins = at(InstrKind::SubscriptWrite, t.range.begin, false);
        ins.is_delete = true;
        Operand obj = lower_expr(scope, t.child(0));
        ins.operands = {obj, lower_expr(scope, t.child(1))};
        emit(scope, std::move(ins));
        break;
      }
      case ExprKind::Tuple:
      case ExprKind::List:
        for (const ExprPtr& c : t.children) lower_delete(scope, *c);
        break;
      default:
        break;
    }
  }

  Operand import_value(Scope& scope, const std::string& target, const SourcePos& pos) {
    Instruction ins = at(InstrKind::Import, pos, true);
    ins.name = target;
    return value(scope, std::move(ins));
  }

  void lower_import(Scope& scope, const Alias& a, const SourcePos& pos) {
    if (!a.asname.empty()) {
      store(scope, a.asname, import_value(scope, a.name, pos), pos);
      return;
    }
    std::vector<std::string> parts = split_dotted(a.name);
    // `import a.b.c` runs every package on the path but binds only `a`.
    for (std::size_t n = parts.size(); n > 1; --n) {
      import_value(scope, join_dotted({parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(n)}), pos);
    }
    store(scope, parts[0], import_value(scope, parts[0], pos), pos);
  }

  void lower_import_from(Scope& scope, const Stmt& s, const SourcePos& pos) {
    const SourceUnit& unit = *fn(scope).unit;
    std::string source = resolve_relative(unit, s.level, s.module);
    if (source.empty()) return;
    for (const Alias& a : s.aliases) {
      if (a.name == "*") {
        if (prog_.project->find_module(source) == nullptr) {
          import_value(scope, source, pos);
          continue;
        }
        for (const std::string& n : prog_.resolver->public_names(source)) {
          store(scope, n, import_value(scope, source + "." + n, pos), pos);
        }
        continue;
      }
      store(scope, a.asname.empty() ? a.name : a.asname, import_value(scope, source + "." + a.name, pos), pos);
    }
  }

  Operand decorate(Scope& scope, Operand target, const std::vector<Decorator>& decorators) {
    std::vector<Operand> decos;
    for (const Decorator& d : decorators) decos.push_back(lower_expr(scope, d.expr.get()));
    for (std::size_t i = decorators.size(); i-- > 0;) {
      Instruction ins = at(InstrKind::Decorate, decorators[i].at, true);
      ins.operands = {decos[i], target};
      target = value(scope, std::move(ins));
    }
    return target;
  }

  void lower_def(Scope& scope, const Stmt& s) {
    const FunctionDef& def = *s.function;
    int id = fn_of_stmt_.at(&s);
    for (const Parameter& p : def.params) {
      if (p.default_value) lower_expr(scope, p.default_value.get());
    }
    Instruction mk = at(InstrKind::MakeFunction, def.keyword, true);
    mk.target = id;
    mk.name = def.name;
    Operand f = value(scope, std::move(mk));
    f = decorate(scope, f, def.decorators);
    store(scope, def.name, f, def.keyword);
  }

  void lower_class(Scope& scope, const Stmt& s) {
    const ClassDef& def = *s.klass;
    int id = cls_of_stmt_.at(&s);
    Instruction mk = at(InstrKind::MakeClass, def.keyword, true);
    mk.target = id;
    mk.name = def.name;
    for (const ExprPtr& b : def.bases) mk.operands.push_back(lower_expr(scope, b.get()));
    for (const Keyword& k : def.keywords) lower_expr(scope, k.value.get());
    Operand c = value(scope, std::move(mk));
    scope.classes.push_back(ClassBody{id, c});
    lower_body(scope, def.body);
    scope.classes.pop_back();
    c = decorate(scope, c, def.decorators);
    store(scope, def.name, c, def.keyword);
  }

  // -- targets --

  void assign(Scope& scope, const Expr& t, Operand v) {
    switch (t.kind) {
      case ExprKind::Name:
        store(scope, t.id, v, t.range.begin);
        break;
      case ExprKind::Attribute: {
        Operand obj = lower_expr(scope, t.child(0));
        Instruction ins = at(InstrKind::AttrWrite, t.range.begin, false);
        ins.name = t.id;
        ins.operands = {obj, v};
        emit(scope, std::move(ins));
        break;
      }
      case ExprKind::Subscript: {
        Operand obj = lower_expr(scope, t.child(0));
        Operand idx = lower_expr(scope, t.child(1));
        Instruction ins = at(InstrKind::SubscriptWrite, t.range.begin, false);
        ins.operands = {obj, idx, v};
        emit(scope, std::move(ins));
        break;
      }
      case ExprKind::Tuple:
      case ExprKind::List: {
        int slot = 0;
        for (const ExprPtr& elt : t.children) {
          if (elt->kind == ExprKind::Starred) {
            Instruction read = at(InstrKind::SubscriptRead, elt->range.begin, true);
            read.operands = {v, Operand::constant(LiteralKind::Number)};
            Operand items = value(scope, std::move(read));
            Instruction build = at(InstrKind::ContainerBuild, elt->range.begin, true);
            build.container = ContainerKind::List;
            build.operands.push_back(items);
            assign(scope, *elt->child(0), value(scope, std::move(build)));
          } else {
            Instruction read = at(InstrKind::SubscriptRead, elt->range.begin, true);
            read.operands = {v, Operand::constant(LiteralKind::Number)};
            read.element = slot;
            assign(scope, *elt, value(scope, std::move(read)));
          }
          ++slot;
        }
        break;
      }
      case ExprKind::Starred:
        assign(scope, *t.child(0), v);
        break;
      default:
        lower_expr(scope, &t);
        break;
    }
  }

  // -- expressions --

  Operand lower_expr(Scope& scope, const Expr* e) {
    if (e == nullptr) return Operand::none();
    const SourcePos& pos = e->range.begin;
    switch (e->kind) {
      case ExprKind::Name:
        return load(scope, e->id, pos);
      case ExprKind::Constant:
        return Operand::constant(e->literal);
      case ExprKind::FormattedString:
        return Operand::constant(LiteralKind::String);
      case ExprKind::Attribute: {
        Operand obj = lower_expr(scope, e->child(0));
        Instruction ins = at(InstrKind::AttrRead, pos, true);
        ins.name = e->id;
        ins.operands.push_back(obj);
        return value(scope, std::move(ins));
      }
      case ExprKind::Subscript: {
        Operand obj = lower_expr(scope, e->child(0));
        Operand idx = lower_expr(scope, e->child(1));
        Instruction ins = at(InstrKind::SubscriptRead, pos, true);
        ins.operands = {obj, idx};
        ins.element = constant_index(e->child(1));
        return value(scope, std::move(ins));
      }
      case ExprKind::Slice: {
        Instruction ins = at(InstrKind::Operator, pos, true);
        ins.name = "slice";
        for (const ExprPtr& c : e->children) {
          if (c) ins.operands.push_back(lower_expr(scope, c.get()));
        }
        return value(scope, std::move(ins));
      }
      case ExprKind::Call:
        return lower_call(scope, *e);
      case ExprKind::Tuple:
      case ExprKind::List:
      case ExprKind::Set:
      case ExprKind::Dict:
        return lower_display(scope, *e);
      case ExprKind::ListComp:
      case ExprKind::SetComp:
      case ExprKind::DictComp:
      case ExprKind::GeneratorExp:
        return lower_comprehension(scope, *e);
      case ExprKind::Lambda:
        return lower_lambda(scope, *e);
      case ExprKind::IfExp: {
        lower_expr(scope, e->child(1));
        Instruction ins = at(InstrKind::Operator, pos, true);
        ins.name = "merge";
        ins.operands = {lower_expr(scope, e->child(0)), lower_expr(scope, e->child(2))};
        return value(scope, std::move(ins));
      }
      case ExprKind::BoolOp: {
        Instruction ins = at(InstrKind::Operator, pos, true);
        ins.name = "merge";
        for (const ExprPtr& c : e->children) ins.operands.push_back(lower_expr(scope, c.get()));
        return value(scope, std::move(ins));
      }
      case ExprKind::BinOp: {
        Instruction ins = at(InstrKind::Operator, pos, true);
        ins.name = e->id;
        for (const ExprPtr& c : e->children) ins.operands.push_back(lower_expr(scope, c.get()));
        return value(scope, std::move(ins));
      }
      case ExprKind::UnaryOp: {
        Instruction ins = at(InstrKind::Operator, pos, true);
        ins.name = e->id;
        ins.operands.push_back(lower_expr(scope, e->child(0)));
        return value(scope, std::move(ins));
      }
      case ExprKind::Compare: {
        Instruction ins = at(InstrKind::Operator, pos, true);
        ins.name = "compare";
        for (const ExprPtr& c : e->children) ins.operands.push_back(lower_expr(scope, c.get()));
        return value(scope, std::move(ins));
      }
      case ExprKind::Starred: {
        Instruction ins = at(InstrKind::SubscriptRead, pos, true);
        ins.operands = {lower_expr(scope, e->child(0)), Operand::constant(LiteralKind::Number)};
        return value(scope, std::move(ins));
      }
      case ExprKind::Await: {
        Instruction ins = at(InstrKind::Operator, pos, true);
        ins.name = "await";
        ins.operands.push_back(lower_expr(scope, e->child(0)));
        return value(scope, std::move(ins));
      }
      case ExprKind::Yield: {
        Operand v = e->child(0) ? lower_expr(scope, e->child(0)) : Operand::constant(LiteralKind::None);
        yield_into(scope, v, pos);
        return Operand::none();
      }
      case ExprKind::YieldFrom: {
        Instruction it = at(InstrKind::Iterate, pos, true);
        it.operands.push_back(lower_expr(scope, e->child(0)));
        yield_into(scope, value(scope, std::move(it)), pos);
        return Operand::none();
      }
      case ExprKind::NamedExpr: {
        Operand v = lower_expr(scope, e->child(1));
        assign(scope, *e->child(0), v);
        return v;
      }
    }
    return Operand::none();
  }

  static int constant_index(const Expr* index) {
    if (index == nullptr || index->kind != ExprKind::Constant || index->literal != LiteralKind::Number) return -1;
    const std::string& text = index->id;
    if (text.empty() || text.size() > 6) return -1;
    for (char c : text) {
      if (c < '0' || c > '9') return -1;
    }
    return std::stoi(text);
  }

  void yield_into(Scope& scope, Operand v, const SourcePos& pos) {
    if (scope.generator < 0) return;
    Instruction ins = at(InstrKind::SubscriptWrite, pos, false);
    ins.operands = {Operand::of(scope.generator), Operand::constant(LiteralKind::Number), v};
    emit(scope, std::move(ins));
  }

  Operand lower_call(Scope& scope, const Expr& e) {
    Instruction ins = at(InstrKind::Call, e.range.begin, true);
    Operand callee = lower_expr(scope, e.child(0));
    ins.operands.push_back(callee);
    if (callee.is_value()) {
      const Instruction& c = fn(scope).ir.instructions[static_cast<std::size_t>(callee.value)];
      if (c.kind == InstrKind::LoadName && c.scope == NameScope::External &&
          (c.name == "builtins.exec" || c.name == "builtins.eval" || c.name == "builtins.compile" ||
           c.name == "builtins.__import__")) {
        ins.opaque = true;
      }
    }
    // Positions after a `*args` splat are unknown; those arguments are
    // evaluated but not bound.
    bool splat = false;
    for (std::size_t i = 1; i < e.children.size(); ++i) {
      const Expr& arg = *e.children[i];
      if (arg.kind == ExprKind::Starred) {
        ins.opaque = true;
        splat = true;
        lower_expr(scope, arg.child(0));
        continue;
      }
      Operand v = lower_expr(scope, &arg);
      if (!splat) ins.operands.push_back(v);
    }
    for (const Keyword& k : e.keywords) {
      Operand v = lower_expr(scope, k.value.get());
      if (k.name.empty()) {
        ins.opaque = true;
        continue;
      }
      ins.operands.push_back(v);
      ins.keywords.push_back(k.name);
    }
    return value(scope, std::move(ins));
  }

  Operand lower_display(Scope& scope, const Expr& e) {
    Instruction ins = at(InstrKind::ContainerBuild, e.range.begin, true);
    switch (e.kind) {
      case ExprKind::Tuple: ins.container = ContainerKind::Tuple; break;
      case ExprKind::Set: ins.container = ContainerKind::Set; break;
      case ExprKind::Dict: ins.container = ContainerKind::Dict; break;
      default: ins.container = ContainerKind::List; break;
    }
    if (e.kind == ExprKind::Dict) {
      for (std::size_t i = 0; i + 1 < e.children.size(); i += 2) {
        if (e.children[i] == nullptr) {
          // `**other`: its values flow in, keys are unknown.
          Instruction read = at(InstrKind::SubscriptRead, e.children[i + 1]->range.begin, true);
          read.operands = {lower_expr(scope, e.children[i + 1].get()), Operand::constant(LiteralKind::String)};
          ins.operands.push_back(Operand::constant(LiteralKind::String));
          ins.operands.push_back(value(scope, std::move(read)));
          continue;
        }
        ins.operands.push_back(lower_expr(scope, e.children[i].get()));
        ins.operands.push_back(lower_expr(scope, e.children[i + 1].get()));
      }
    } else {
      for (const ExprPtr& c : e.children) ins.operands.push_back(lower_expr(scope, c.get()));
    }
    return value(scope, std::move(ins));
  }

  Operand lower_comprehension(Scope& scope, const Expr& e) {
    scope.comprehensions.emplace_back();
    int tag = ++comprehension_counter_;
    for (const Comprehension& c : e.generators) {
      Operand iter = lower_expr(scope, c.iter.get());
      std::set<std::string> names;
      target_names(c.target.get(), names);
      for (const std::string& n : names) {
        scope.comprehensions.back()[n] = "<comp" + std::to_string(tag) + ">." + n;
      }
      Instruction it = at(InstrKind::Iterate, c.iter->range.begin, true);
      it.operands.push_back(iter);
      assign(scope, *c.target, value(scope, std::move(it)));
      for (const ExprPtr& cond : c.conditions) lower_expr(scope, cond.get());
    }
    Instruction ins = at(InstrKind::ContainerBuild, e.range.begin, true);
    switch (e.kind) {
      case ExprKind::SetComp: ins.container = ContainerKind::Set; break;
      case ExprKind::DictComp: ins.container = ContainerKind::Dict; break;
      case ExprKind::GeneratorExp: ins.container = ContainerKind::Generator; break;
      default: ins.container = ContainerKind::List; break;
    }
    for (const ExprPtr& c : e.children) ins.operands.push_back(lower_expr(scope, c.get()));
    scope.comprehensions.pop_back();
    return value(scope, std::move(ins));
  }

  Operand lower_lambda(Scope& scope, const Expr& e) {
    for (const Parameter& p : e.params) {
      if (p.default_value) lower_expr(scope, p.default_value.get());
    }
    const FunctionUnit& outer = fn(scope);
    FunctionUnit f;
    f.id = static_cast<int>(prog_.functions.size());
    f.kind = FunctionKind::Lambda;
    f.name = "<lambda>";
    f.fq_name = outer.fq_name;
    if (outer.kind == FunctionKind::ModuleInit) f.fq_name.segments.pop_back();
    f.fq_name.segments.push_back("<lambda:" + std::to_string(e.range.begin.line) + ":" +
                                 std::to_string(e.range.begin.column) + ">");
    f.unit = outer.unit;
    f.lambda = &e;
    f.parent = scope.fid;
    f.line = e.range.begin.line;
    f.column = e.range.begin.column;
    for (const Parameter& p : e.params) {
      f.params.push_back(ParamInfo{p.name, p.kind, nullptr, p.default_value != nullptr, false});
    }
    f.ir.fq_name = f.fq_name.str();
    int id = f.id;
    prog_.functions.push_back(std::move(f));

    Scope inner;
    inner.fid = id;
    for (const Parameter& p : e.params) inner.bindings.locals.insert(p.name);
    walk_expr(e.child(0), [&](const Expr& x) {
      if (x.kind == ExprKind::NamedExpr) target_names(x.child(0), inner.bindings.locals);
    });
    bindings_[id] = inner.bindings;
    Operand body = lower_expr(inner, e.child(0));
    Instruction ret = at(InstrKind::Return, e.range.begin, false);
    ret.operands.push_back(body);
    emit(inner, std::move(ret));

    Instruction mk = at(InstrKind::MakeFunction, e.range.begin, true);
    mk.target = id;
    mk.name = "<lambda>";
    return value(scope, std::move(mk));
  }

  Program& prog_;
  std::map<const Stmt*, int> fn_of_stmt_;
  std::map<const Stmt*, int> cls_of_stmt_;
  std::map<int, Bindings> bindings_;
  int comprehension_counter_ = 0;
};

}  // namespace

Program lower_project(const ProjectModel& project, const NameResolver& resolver) {
  Program program;
  program.project = &project;
  program.resolver = &resolver;
  Lowerer(program).run();
  // Attribute writes anywhere in the IR widen the set of names considered
  // possibly present on open hierarchies.
  for (const FunctionUnit& f : program.functions) {
    for (const Instruction& ins : f.ir.instructions) {
      if (ins.kind == InstrKind::AttrWrite) program.written_attributes.insert(ins.name);
    }
  }
  return program;
}

}  // namespace hybridize::frontend
