#include "hybridize/frontend/ast.h"

namespace hybridize::frontend {

const char* to_string(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::Number: return "number";
    case LiteralKind::String: return "string";
    case LiteralKind::Bytes: return "bytes";
    case LiteralKind::Boolean: return "boolean";
    case LiteralKind::None: return "none";
    case LiteralKind::Ellipsis: return "ellipsis";
  }
  return "?";
}

const char* to_string(ExprKind kind) {
  switch (kind) {
    case ExprKind::Name: return "Name";
    case ExprKind::Constant: return "Constant";
    case ExprKind::FormattedString: return "FormattedString";
    case ExprKind::Attribute: return "Attribute";
    case ExprKind::Subscript: return "Subscript";
    case ExprKind::Slice: return "Slice";
    case ExprKind::Call: return "Call";
    case ExprKind::Tuple: return "Tuple";
    case ExprKind::List: return "List";
    case ExprKind::Set: return "Set";
    case ExprKind::Dict: return "Dict";
    case ExprKind::ListComp: return "ListComp";
    case ExprKind::SetComp: return "SetComp";
    case ExprKind::DictComp: return "DictComp";
    case ExprKind::GeneratorExp: return "GeneratorExp";
    case ExprKind::Lambda: return "Lambda";
    case ExprKind::IfExp: return "IfExp";
    case ExprKind::BoolOp: return "BoolOp";
    case ExprKind::BinOp: return "BinOp";
    case ExprKind::UnaryOp: return "UnaryOp";
    case ExprKind::Compare: return "Compare";
    case ExprKind::Starred: return "Starred";
    case ExprKind::Await: return "Await";
    case ExprKind::Yield: return "Yield";
    case ExprKind::YieldFrom: return "YieldFrom";
    case ExprKind::NamedExpr: return "NamedExpr";
  }
  return "?";
}

const char* to_string(StmtKind kind) {
  switch (kind) {
    case StmtKind::Expr: return "Expr";
    case StmtKind::Assign: return "Assign";
    case StmtKind::AugAssign: return "AugAssign";
    case StmtKind::AnnAssign: return "AnnAssign";
    case StmtKind::Return: return "Return";
    case StmtKind::Pass: return "Pass";
    case StmtKind::Break: return "Break";
    case StmtKind::Continue: return "Continue";
    case StmtKind::Raise: return "Raise";
    case StmtKind::Global: return "Global";
    case StmtKind::Nonlocal: return "Nonlocal";
    case StmtKind::Delete: return "Delete";
    case StmtKind::Assert: return "Assert";
    case StmtKind::Import: return "Import";
    case StmtKind::ImportFrom: return "ImportFrom";
    case StmtKind::If: return "If";
    case StmtKind::For: return "For";
    case StmtKind::While: return "While";
    case StmtKind::Try: return "Try";
    case StmtKind::With: return "With";
    case StmtKind::FunctionDef: return "FunctionDef";
    case StmtKind::ClassDef: return "ClassDef";
    case StmtKind::Match: return "Match";
  }
  return "?";
}

namespace {

class Dumper {
 public:
  std::string out;

  void expr(const Expr* e) {
    if (e == nullptr) {
      out += "_";
      return;
    }
    out += '(';
    out += to_string(e->kind);
    if (!e->id.empty()) {
      out += ' ';
      quote(e->id);
    }
    if (e->kind == ExprKind::Constant) {
      out += ' ';
      out += to_string(e->literal);
    }
    for (const std::string& op : e->ops) {
      out += ' ';
      quote(op);
    }
    for (const ExprPtr& c : e->children) {
      out += ' ';
      expr(c.get());
    }
    for (const Keyword& k : e->keywords) keyword(k);
    for (const Comprehension& c : e->generators) {
      out += " (for";
      if (c.is_async) out += " async";
      out += ' ';
      expr(c.target.get());
      out += ' ';
      expr(c.iter.get());
      for (const ExprPtr& cond : c.conditions) {
        out += " (if ";
        expr(cond.get());
        out += ')';
      }
      out += ')';
    }
    params(e->params);
    out += ')';
  }

  void stmt(const Stmt& s) {
    out += '(';
    out += to_string(s.kind);
    if (s.is_async) out += " async";
    if (!s.op.empty()) {
      out += ' ';
      quote(s.op);
    }
    for (const ExprPtr& t : s.targets) {
      out += ' ';
      expr(t.get());
    }
    opt(" value=", s.value.get());
    opt(" annotation=", s.annotation.get());
    opt(" cause=", s.cause.get());
    opt(" message=", s.message.get());
    for (const std::string& n : s.names) {
      out += ' ';
      quote(n);
    }
    if (s.kind == StmtKind::ImportFrom) {
      out += " module=";
      quote(s.module);
      out += " level=" + std::to_string(s.level);
    }
    for (const Alias& a : s.aliases) {
      out += " (alias ";
      quote(a.name);
      if (!a.asname.empty()) {
        out += ' ';
        quote(a.asname);
      }
      out += ')';
    }
    for (const WithItem& item : s.items) {
      out += " (item ";
      expr(item.context.get());
      out += ' ';
      expr(item.target.get());
      out += ')';
    }
    body(" body", s.body);
    for (const ExceptHandler& h : s.handlers) {
      out += " (except ";
      expr(h.type.get());
      if (!h.name.empty()) {
        out += ' ';
        quote(h.name);
      }
      body(" body", h.body);
      out += ')';
    }
    body(" orelse", s.orelse);
    body(" finally", s.finalbody);
    for (const MatchCase& c : s.cases) {
      out += " (case ";
      expr(c.pattern.get());
      opt(" guard=", c.guard.get());
      body(" body", c.body);
      out += ')';
    }
    if (s.function) {
      const FunctionDef& f = *s.function;
      out += ' ';
      quote(f.name);
      decorators(f.decorators);
      params(f.params);
      opt(" returns=", f.returns.get());
      body(" body", f.body);
    }
    if (s.klass) {
      const ClassDef& c = *s.klass;
      out += ' ';
      quote(c.name);
      decorators(c.decorators);
      out += " (bases";
      for (const ExprPtr& b : c.bases) {
        out += ' ';
        expr(b.get());
      }
      for (const Keyword& k : c.keywords) keyword(k);
      out += ')';
      body(" body", c.body);
    }
    out += ')';
  }

  void body(const char* label, const Body& b) {
    if (b.empty()) return;
    out += " (";
    out += label + 1;
    for (const StmtPtr& s : b) {
      out += ' ';
      stmt(*s);
    }
    out += ')';
  }

 private:
  void quote(const std::string& s) {
    out += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
  }

  void opt(const char* label, const Expr* e) {
    if (e == nullptr) return;
    out += label;
    expr(e);
  }

  void keyword(const Keyword& k) {
    out += " (kw ";
    quote(k.name.empty() ? std::string("**") : k.name);
    out += ' ';
    expr(k.value.get());
    out += ')';
  }

  void params(const std::vector<Parameter>& ps) {
    if (ps.empty()) return;
    out += " (params";
    for (const Parameter& p : ps) {
      out += " (";
      quote(p.name);
      out += ' ' + std::to_string(static_cast<int>(p.kind));
      opt(" : ", p.annotation.get());
      opt(" = ", p.default_value.get());
      out += ')';
    }
    out += ')';
  }

  void decorators(const std::vector<Decorator>& ds) {
    if (ds.empty()) return;
    out += " (decorators";
    for (const Decorator& d : ds) {
      out += ' ';
      expr(d.expr.get());
    }
    out += ')';
  }
};

}  // namespace

std::string dump(const Module& module) {
  Dumper d;
  d.out += "(Module";
  for (const StmtPtr& s : module.body) {
    d.out += ' ';
    d.stmt(*s);
  }
  d.out += ')';
  return d.out;
}

std::string dump(const Expr& expr) {
  Dumper d;
  d.expr(&expr);
  return d.out;
}

std::string dump(const Stmt& stmt) {
  Dumper d;
  d.stmt(stmt);
  return d.out;
}

std::string dotted_name(const Expr& expr) {
  if (expr.kind == ExprKind::Name) return expr.id;
  if (expr.kind == ExprKind::Attribute && expr.child(0) != nullptr) {
    std::string base = dotted_name(*expr.child(0));
    if (base.empty()) return {};
    return base + "." + expr.id;
  }
  return {};
}

}  // namespace hybridize::frontend
