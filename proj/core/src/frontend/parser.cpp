#include "hybridize/frontend/parser.h"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace hybridize::frontend {
namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "False", "None",   "True",    "and",      "as",       "assert", "async",
    "await", "break",  "class",   "continue", "def",      "del",    "elif",
    "else",  "except", "finally", "for",      "from",     "global", "if",
    "import", "in",    "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",  "raise",  "return",  "try",      "while",    "with",   "yield",
};

const std::unordered_set<std::string_view> kAugAssignOps = {
    "+=", "-=", "*=", "/=", "//=", "%=", "@=", "&=", "|=", "^=", ">>=", "<<=", "**=",
};

bool is_keyword(std::string_view s) { return kKeywords.count(s) != 0; }

class Parser {
 public:
  Parser(std::string_view source, std::vector<Token> tokens)
      : src_(source), toks_(std::move(tokens)) {}

  Module parse_file() {
    Module module;
    while (peek().kind != TokenKind::EndMarker) {
      if (peek().kind == TokenKind::Newline) {
        ++i_;
        continue;
      }
      parse_statement(module.body);
    }
    return module;
  }

 private:
  // ---- token helpers -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool at_op(std::string_view op, std::size_t k = 0) const { return peek(k).is_op(op); }
  bool at_kw(std::string_view kw, std::size_t k = 0) const { return peek(k).is_name(kw); }
  bool accept_op(std::string_view op) {
    if (!at_op(op)) return false;
    next();
    return true;
  }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    next();
    return true;
  }
  const Token& expect_op(std::string_view op) {
    if (!at_op(op)) fail("expected '" + std::string(op) + "'");
    return next();
  }
  const Token& expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail("expected '" + std::string(kw) + "'");
    return next();
  }
  std::string expect_name() {
    const Token& t = peek();
    if (t.kind != TokenKind::Name || is_keyword(t.text)) fail("expected identifier");
    next();
    return std::string(t.text);
  }
  void expect_newline() {
    if (peek().kind != TokenKind::Newline) fail("expected end of line");
    next();
  }
  SourcePos prev_end() const { return i_ == 0 ? SourcePos{} : toks_[i_ - 1].end; }

  [[noreturn]] void fail(const std::string& message, bool python2 = false) const {
    const Token& t = peek();
    std::string detail = message;
    if (t.kind == TokenKind::EndMarker) {
      detail += " (at end of file)";
    } else if (!t.text.empty()) {
      detail += " near '" + std::string(t.text) + "'";
    }
    throw SyntaxError(detail, t.begin.line, t.begin.column, python2);
  }

  SourcePos line_begin_of(SourcePos p) const {
    return SourcePos{p.offset - p.column, p.line, 0};
  }

  ExprPtr make(ExprKind kind, SourcePos begin) const {
    return std::make_unique<Expr>(kind, SourceRange{begin, prev_end()});
  }
  StmtPtr make_stmt(StmtKind kind, SourcePos begin) const {
    return std::make_unique<Stmt>(kind, SourceRange{begin, prev_end()});
  }

  bool starts_expression(const Token& t) const {
    switch (t.kind) {
      case TokenKind::Number:
      case TokenKind::String:
        return true;
      case TokenKind::Name:
        if (!is_keyword(t.text)) return true;
        return t.text == "True" || t.text == "False" || t.text == "None" ||
               t.text == "lambda" || t.text == "not" || t.text == "await" ||
               t.text == "yield";
      case TokenKind::Op:
        return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" ||
               t.text == "+" || t.text == "~" || t.text == "*" || t.text == "..." ||
               t.text == "**";
      default:
        return false;
    }
  }

  // ---- statements ----------------------------------------------------------

  void parse_statement(Body& out) {
    const Token& t = peek();
    if (t.is_op("@")) {
      out.push_back(parse_decorated());
      return;
    }
    if (t.kind == TokenKind::Name) {
      if (t.text == "def") return out.push_back(parse_funcdef({}, t.begin));
      if (t.text == "class") return out.push_back(parse_classdef({}));
      if (t.text == "if") return out.push_back(parse_if());
      if (t.text == "while") return out.push_back(parse_while());
      if (t.text == "for") return out.push_back(parse_for(t.begin, false));
      if (t.text == "try") return out.push_back(parse_try());
      if (t.text == "with") return out.push_back(parse_with(t.begin, false));
      if (t.text == "async") {
        SourcePos begin = t.begin;
        if (at_kw("def", 1)) {
          next();
          return out.push_back(parse_funcdef({}, begin, true));
        }
        if (at_kw("for", 1)) {
          next();
          return out.push_back(parse_for(begin, true));
        }
        if (at_kw("with", 1)) {
          next();
          return out.push_back(parse_with(begin, true));
        }
        fail("invalid syntax after 'async'");
      }
      if (t.text == "match") {
        if (StmtPtr m = try_parse_match()) {
          out.push_back(std::move(m));
          return;
        }
      }
    }
    parse_simple_statements(out);
  }

  void parse_simple_statements(Body& out) {
    while (true) {
      out.push_back(parse_small_statement());
      if (!accept_op(";")) break;
      if (peek().kind == TokenKind::Newline) break;
    }
    expect_newline();
  }

  Body parse_block() {
    Body body;
    if (peek().kind == TokenKind::Newline) {
      next();
      if (peek().kind != TokenKind::Indent) fail("expected an indented block");
      next();
      while (peek().kind != TokenKind::Dedent && peek().kind != TokenKind::EndMarker) {
        if (peek().kind == TokenKind::Newline) {
          next();
          continue;
        }
        parse_statement(body);
      }
      if (peek().kind == TokenKind::Dedent) next();
    } else {
      parse_simple_statements(body);
    }
    return body;
  }

  StmtPtr parse_decorated() {
    std::vector<Decorator> decorators;
    while (at_op("@")) {
      Decorator d;
      d.at = peek().begin;
      d.line_begin = line_begin_of(d.at);
      next();
      d.expr = parse_named_expression();
      if (peek().kind != TokenKind::Newline) fail("expected end of line after decorator");
      d.line_end = peek().end;
      next();
      decorators.push_back(std::move(d));
    }
    const Token& t = peek();
    if (t.is_name("def")) return parse_funcdef(std::move(decorators), t.begin);
    if (t.is_name("class")) return parse_classdef(std::move(decorators));
    if (t.is_name("async") && at_kw("def", 1)) {
      SourcePos begin = t.begin;
      next();
      return parse_funcdef(std::move(decorators), begin, true);
    }
    fail("expected function or class definition after decorator");
  }

  StmtPtr parse_funcdef(std::vector<Decorator> decorators, SourcePos begin,
                        bool is_async = false) {
    expect_kw("def");
    auto fn = std::make_unique<FunctionDef>();
    fn->keyword = begin;
    fn->line_begin = line_begin_of(begin);
    fn->is_async = is_async;
    fn->decorators = std::move(decorators);
    fn->name = expect_name();
    expect_op("(");
    fn->params = parse_params(")", true);
    expect_op(")");
    if (accept_op("->")) fn->returns = parse_expression();
    expect_op(":");
    fn->body = parse_block();
    auto stmt = make_stmt(StmtKind::FunctionDef, begin);
    stmt->function = std::move(fn);
    stmt->is_async = is_async;
    return stmt;
  }

  std::vector<Parameter> parse_params(std::string_view closing, bool annotations) {
    std::vector<Parameter> params;
    ParamKind kind = ParamKind::Normal;
    while (!at_op(closing)) {
      if (accept_op("/")) {
        for (Parameter& p : params) p.kind = ParamKind::PositionalOnly;
      } else if (at_op("*")) {
        next();
        if (at_op(",") || at_op(closing)) {
          kind = ParamKind::KeywordOnly;
        } else {
          params.push_back(parse_param(ParamKind::VarArgs, annotations, false));
          kind = ParamKind::KeywordOnly;
        }
      } else if (accept_op("**")) {
        params.push_back(parse_param(ParamKind::VarKeywords, annotations, false));
      } else {
        params.push_back(parse_param(kind, annotations, true));
      }
      if (!accept_op(",")) break;
    }
    return params;
  }

  Parameter parse_param(ParamKind kind, bool annotations, bool allow_default) {
    Parameter p;
    p.kind = kind;
    SourcePos begin = peek().begin;
    p.name = expect_name();
    p.range = SourceRange{begin, prev_end()};
    if (annotations && accept_op(":")) {
      p.annotation = at_op("*") ? parse_star_expression() : parse_expression();
    }
    if (allow_default && accept_op("=")) p.default_value = parse_expression();
    return p;
  }

  StmtPtr parse_classdef(std::vector<Decorator> decorators) {
    SourcePos begin = peek().begin;
    expect_kw("class");
    auto cls = std::make_unique<ClassDef>();
    cls->keyword = begin;
    cls->decorators = std::move(decorators);
    cls->name = expect_name();
    if (accept_op("(")) {
      std::vector<ExprPtr> args;
      parse_call_arguments(args, cls->keywords);
      cls->bases = std::move(args);
    }
    expect_op(":");
    cls->body = parse_block();
    auto stmt = make_stmt(StmtKind::ClassDef, begin);
    stmt->klass = std::move(cls);
    return stmt;
  }

  StmtPtr parse_if() {
    SourcePos begin = peek().begin;
    next();  // if / elif
    ExprPtr test = parse_named_expression();
    expect_op(":");
    Body body = parse_block();
    Body orelse;
    if (at_kw("elif")) {
      orelse.push_back(parse_if());
    } else if (accept_kw("else")) {
      expect_op(":");
      orelse = parse_block();
    }
    auto stmt = make_stmt(StmtKind::If, begin);
    stmt->value = std::move(test);
    stmt->body = std::move(body);
    stmt->orelse = std::move(orelse);
    return stmt;
  }

  StmtPtr parse_while() {
    SourcePos begin = peek().begin;
    expect_kw("while");
    ExprPtr test = parse_named_expression();
    expect_op(":");
    Body body = parse_block();
    Body orelse;
    if (accept_kw("else")) {
      expect_op(":");
      orelse = parse_block();
    }
    auto stmt = make_stmt(StmtKind::While, begin);
    stmt->value = std::move(test);
    stmt->body = std::move(body);
    stmt->orelse = std::move(orelse);
    return stmt;
  }

  StmtPtr parse_for(SourcePos begin, bool is_async) {
    expect_kw("for");
    ExprPtr target = parse_target_list();
    expect_kw("in");
    ExprPtr iter = parse_star_expressions();
    expect_op(":");
    Body body = parse_block();
    Body orelse;
    if (accept_kw("else")) {
      expect_op(":");
      orelse = parse_block();
    }
    auto stmt = make_stmt(StmtKind::For, begin);
    stmt->targets.push_back(std::move(target));
    stmt->value = std::move(iter);
    stmt->body = std::move(body);
    stmt->orelse = std::move(orelse);
    stmt->is_async = is_async;
    return stmt;
  }

  StmtPtr parse_try() {
    SourcePos begin = peek().begin;
    expect_kw("try");
    expect_op(":");
    auto stmt = std::make_unique<Stmt>(StmtKind::Try, SourceRange{begin, begin});
    stmt->body = parse_block();
    while (at_kw("except")) {
      ExceptHandler h;
      SourcePos hbegin = peek().begin;
      next();
      accept_op("*");
      if (!at_op(":")) {
        h.type = parse_expression();
        if (at_op(",")) fail("Python 2 'except E, name' syntax is not supported", true);
        if (accept_kw("as")) h.name = expect_name();
      }
      expect_op(":");
      h.body = parse_block();
      h.range = SourceRange{hbegin, prev_end()};
      stmt->handlers.push_back(std::move(h));
    }
    if (accept_kw("else")) {
      expect_op(":");
      stmt->orelse = parse_block();
    }
    if (accept_kw("finally")) {
      expect_op(":");
      stmt->finalbody = parse_block();
    }
    if (stmt->handlers.empty() && stmt->finalbody.empty()) fail("expected 'except' or 'finally' block");
    stmt->range.end = prev_end();
    return stmt;
  }

  StmtPtr parse_with(SourcePos begin, bool is_async) {
    expect_kw("with");
    std::vector<WithItem> items;
    bool parsed = false;
    if (at_op("(")) {
      // Parenthesized with-items; fall back to an ordinary expression when
      // the parenthesis turns out to belong to the context expression.
      std::size_t save = i_;
      try {
        next();
        while (!at_op(")")) {
          items.push_back(parse_with_item());
          if (!accept_op(",")) break;
        }
        expect_op(")");
        if (!at_op(":")) throw SyntaxError("not a parenthesized with", 0, 0);
        parsed = true;
      } catch (const SyntaxError&) {
        i_ = save;
        items.clear();
      }
    }
    if (!parsed) {
      do {
        items.push_back(parse_with_item());
      } while (accept_op(","));
    }
    expect_op(":");
    Body body = parse_block();
    auto stmt = make_stmt(StmtKind::With, begin);
    stmt->items = std::move(items);
    stmt->body = std::move(body);
    stmt->is_async = is_async;
    return stmt;
  }

  WithItem parse_with_item() {
    WithItem item;
    item.context = parse_expression();
    if (accept_kw("as")) item.target = parse_target();
    return item;
  }

  StmtPtr try_parse_match() {
    std::size_t save = i_;
    try {
      SourcePos begin = peek().begin;
      next();  // match
      ExprPtr subject = parse_star_named_expressions();
      expect_op(":");
      if (peek().kind != TokenKind::Newline) throw SyntaxError("not a match", 0, 0);
      next();
      if (peek().kind != TokenKind::Indent) throw SyntaxError("not a match", 0, 0);
      next();
      if (!at_kw("case")) throw SyntaxError("not a match", 0, 0);
      auto stmt = std::make_unique<Stmt>(StmtKind::Match, SourceRange{begin, begin});
      stmt->value = std::move(subject);
      while (at_kw("case")) {
        next();
        MatchCase c;
        c.pattern = parse_star_named_expressions();
        while (accept_kw("as")) expect_name();
        if (accept_kw("if")) c.guard = parse_named_expression();
        expect_op(":");
        c.body = parse_block();
        stmt->cases.push_back(std::move(c));
        while (peek().kind == TokenKind::Newline) next();
      }
      if (peek().kind != TokenKind::Dedent) fail("expected 'case'");
      next();
      stmt->range.end = prev_end();
      return stmt;
    } catch (const SyntaxError&) {
      i_ = save;
      return nullptr;
    }
  }

  StmtPtr parse_small_statement() {
    const Token& t = peek();
    SourcePos begin = t.begin;
    if (t.kind == TokenKind::Name) {
      if (t.text == "pass") return next(), make_stmt(StmtKind::Pass, begin);
      if (t.text == "break") return next(), make_stmt(StmtKind::Break, begin);
      if (t.text == "continue") return next(), make_stmt(StmtKind::Continue, begin);
      if (t.text == "return") {
        next();
        ExprPtr value;
        if (starts_expression(peek())) value = parse_star_expressions();
        auto s = make_stmt(StmtKind::Return, begin);
        s->value = std::move(value);
        return s;
      }
      if (t.text == "raise") {
        next();
        auto s = std::make_unique<Stmt>(StmtKind::Raise, SourceRange{begin, begin});
        if (starts_expression(peek())) {
          s->value = parse_expression();
          if (at_op(",")) fail("Python 2 'raise E, value' syntax is not supported", true);
          if (accept_kw("from")) s->cause = parse_expression();
        }
        s->range.end = prev_end();
        return s;
      }
      if (t.text == "global" || t.text == "nonlocal") {
        StmtKind kind = t.text == "global" ? StmtKind::Global : StmtKind::Nonlocal;
        next();
        std::vector<std::string> names;
        do {
          names.push_back(expect_name());
        } while (accept_op(","));
        auto s = make_stmt(kind, begin);
        s->names = std::move(names);
        return s;
      }
      if (t.text == "del") {
        next();
        auto s = std::make_unique<Stmt>(StmtKind::Delete, SourceRange{begin, begin});
        ExprPtr targets = parse_target_list();
        if (targets->kind == ExprKind::Tuple && targets->range.begin == begin) {
          s->targets = std::move(targets->children);
        } else {
          s->targets.push_back(std::move(targets));
        }
        s->range.end = prev_end();
        return s;
      }
      if (t.text == "assert") {
        next();
        auto s = std::make_unique<Stmt>(StmtKind::Assert, SourceRange{begin, begin});
        s->value = parse_expression();
        if (accept_op(",")) s->message = parse_expression();
        s->range.end = prev_end();
        return s;
      }
      if (t.text == "import") return parse_import();
      if (t.text == "from") return parse_import_from();
      if (t.text == "print" || t.text == "exec") {
        const Token& n = peek(1);
        bool py2 = n.kind == TokenKind::String || n.kind == TokenKind::Number ||
                   (n.kind == TokenKind::Name && !is_keyword(n.text)) ||
                   (t.text == "print" && n.is_op(">>"));
        if (py2) {
          fail("Python 2 '" + std::string(t.text) + "' statement is not supported", true);
        }
      }
    }
    return parse_expression_statement();
  }

  std::string parse_dotted_name() {
    std::string name = expect_name();
    while (at_op(".")) {
      next();
      name += '.';
      name += expect_name();
    }
    return name;
  }

  StmtPtr parse_import() {
    SourcePos begin = peek().begin;
    expect_kw("import");
    std::vector<Alias> aliases;
    do {
      Alias a;
      SourcePos abegin = peek().begin;
      a.name = parse_dotted_name();
      if (accept_kw("as")) a.asname = expect_name();
      a.range = SourceRange{abegin, prev_end()};
      aliases.push_back(std::move(a));
    } while (accept_op(","));
    auto s = make_stmt(StmtKind::Import, begin);
    s->aliases = std::move(aliases);
    return s;
  }

  StmtPtr parse_import_from() {
    SourcePos begin = peek().begin;
    expect_kw("from");
    int level = 0;
    while (at_op(".") || at_op("...")) {
      level += static_cast<int>(peek().text.size());
      next();
    }
    std::string module;
    if (!at_kw("import")) module = parse_dotted_name();
    if (level == 0 && module.empty()) fail("expected module name");
    expect_kw("import");
    std::vector<Alias> aliases;
    if (at_op("*")) {
      SourcePos abegin = peek().begin;
      next();
      aliases.push_back(Alias{"*", "", SourceRange{abegin, prev_end()}});
    } else {
      bool parens = accept_op("(");
      while (true) {
        Alias a;
        SourcePos abegin = peek().begin;
        a.name = expect_name();
        if (accept_kw("as")) a.asname = expect_name();
        a.range = SourceRange{abegin, prev_end()};
        aliases.push_back(std::move(a));
        if (!accept_op(",")) break;
        if (parens && at_op(")")) break;
      }
      if (parens) expect_op(")");
    }
    auto s = make_stmt(StmtKind::ImportFrom, begin);
    s->module = std::move(module);
    s->level = level;
    s->aliases = std::move(aliases);
    return s;
  }

  StmtPtr parse_expression_statement() {
    SourcePos begin = peek().begin;
    ExprPtr first = at_kw("yield") ? parse_yield() : parse_star_expressions();
    if (at_op(":")) {
      next();
      auto s = std::make_unique<Stmt>(StmtKind::AnnAssign, SourceRange{begin, begin});
      s->targets.push_back(std::move(first));
      s->annotation = parse_expression();
      if (accept_op("=")) s->value = at_kw("yield") ? parse_yield() : parse_star_expressions();
      s->range.end = prev_end();
      return s;
    }
    if (peek().kind == TokenKind::Op && kAugAssignOps.count(peek().text)) {
      std::string op(next().text);
      auto s = std::make_unique<Stmt>(StmtKind::AugAssign, SourceRange{begin, begin});
      s->targets.push_back(std::move(first));
      s->op = std::move(op);
      s->value = at_kw("yield") ? parse_yield() : parse_star_expressions();
      s->range.end = prev_end();
      return s;
    }
    if (at_op("=")) {
      auto s = std::make_unique<Stmt>(StmtKind::Assign, SourceRange{begin, begin});
      ExprPtr current = std::move(first);
      while (accept_op("=")) {
        s->targets.push_back(std::move(current));
        current = at_kw("yield") ? parse_yield() : parse_star_expressions();
      }
      s->value = std::move(current);
      s->range.end = prev_end();
      return s;
    }
    auto s = make_stmt(StmtKind::Expr, begin);
    s->value = std::move(first);
    return s;
  }

  // ---- expressions ---------------------------------------------------------

  ExprPtr parse_yield() {
    SourcePos begin = peek().begin;
    expect_kw("yield");
    if (accept_kw("from")) {
      ExprPtr value = parse_expression();
      auto e = make(ExprKind::YieldFrom, begin);
      e->children.push_back(std::move(value));
      return e;
    }
    ExprPtr value;
    if (starts_expression(peek())) value = parse_star_expressions();
    auto e = make(ExprKind::Yield, begin);
    if (value) e->children.push_back(std::move(value));
    return e;
  }

  ExprPtr tuple_of(std::vector<ExprPtr> elts, SourcePos begin) {
    auto e = make(ExprKind::Tuple, begin);
    e->children = std::move(elts);
    return e;
  }

  bool at_sequence_end() const {
    const Token& t = peek();
    if (t.kind == TokenKind::Newline || t.kind == TokenKind::EndMarker) return true;
    if (t.kind == TokenKind::Op) {
      return t.text == ")" || t.text == "]" || t.text == "}" || t.text == "=" ||
             t.text == ":" || t.text == ";" || kAugAssignOps.count(t.text) != 0;
    }
    return t.is_name("in") || t.is_name("for") || t.is_name("if") || t.is_name("async");
  }

  ExprPtr parse_star_expressions() {
    SourcePos begin = peek().begin;
    ExprPtr first = parse_star_expression();
    if (!at_op(",")) return first;
    std::vector<ExprPtr> elts;
    elts.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_sequence_end()) break;
      elts.push_back(parse_star_expression());
    }
    return tuple_of(std::move(elts), begin);
  }

  ExprPtr parse_star_named_expressions() {
    SourcePos begin = peek().begin;
    ExprPtr first = parse_star_named_expression();
    if (!at_op(",")) return first;
    std::vector<ExprPtr> elts;
    elts.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_sequence_end()) break;
      elts.push_back(parse_star_named_expression());
    }
    return tuple_of(std::move(elts), begin);
  }

  ExprPtr parse_starred(std::string_view star) {
    SourcePos begin = peek().begin;
    next();
    ExprPtr value = parse_bitwise_or();
    auto e = make(ExprKind::Starred, begin);
    e->id = std::string(star);
    e->children.push_back(std::move(value));
    return e;
  }

  ExprPtr parse_star_expression() {
    if (at_op("*")) return parse_starred("*");
    return parse_expression();
  }

  ExprPtr parse_star_named_expression() {
    if (at_op("*")) return parse_starred("*");
    return parse_named_expression();
  }

  ExprPtr parse_named_expression() {
    const Token& t = peek();
    if (t.kind == TokenKind::Name && !is_keyword(t.text) && at_op(":=", 1)) {
      SourcePos begin = t.begin;
      next();
      auto target = make(ExprKind::Name, begin);
      target->id = std::string(t.text);
      next();  // :=
      ExprPtr value = parse_expression();
      auto e = make(ExprKind::NamedExpr, begin);
      e->children.push_back(std::move(target));
      e->children.push_back(std::move(value));
      return e;
    }
    return parse_expression();
  }

  ExprPtr parse_expression() {
    if (at_kw("lambda")) return parse_lambda();
    SourcePos begin = peek().begin;
    ExprPtr body = parse_disjunction();
    if (!at_kw("if")) return body;
    next();
    ExprPtr test = parse_disjunction();
    expect_kw("else");
    ExprPtr orelse = parse_expression();
    auto e = make(ExprKind::IfExp, begin);
    e->children.push_back(std::move(body));
    e->children.push_back(std::move(test));
    e->children.push_back(std::move(orelse));
    return e;
  }

  ExprPtr parse_lambda() {
    SourcePos begin = peek().begin;
    expect_kw("lambda");
    std::vector<Parameter> params = parse_params(":", false);
    expect_op(":");
    ExprPtr body = parse_expression();
    auto e = make(ExprKind::Lambda, begin);
    e->params = std::move(params);
    e->children.push_back(std::move(body));
    return e;
  }

  ExprPtr parse_bool_chain(std::string_view op, ExprPtr (Parser::*sub)()) {
    SourcePos begin = peek().begin;
    ExprPtr first = (this->*sub)();
    if (!at_kw(op)) return first;
    std::vector<ExprPtr> operands;
    operands.push_back(std::move(first));
    while (accept_kw(op)) operands.push_back((this->*sub)());
    auto e = make(ExprKind::BoolOp, begin);
    e->id = std::string(op);
    e->children = std::move(operands);
    return e;
  }

  ExprPtr parse_disjunction() { return parse_bool_chain("or", &Parser::parse_conjunction); }
  ExprPtr parse_conjunction() { return parse_bool_chain("and", &Parser::parse_inversion); }

  ExprPtr parse_inversion() {
    if (!at_kw("not")) return parse_comparison();
    SourcePos begin = peek().begin;
    next();
    ExprPtr operand = parse_inversion();
    auto e = make(ExprKind::UnaryOp, begin);
    e->id = "not";
    e->children.push_back(std::move(operand));
    return e;
  }

  bool comparison_op(std::string& op) {
    const Token& t = peek();
    if (t.kind == TokenKind::Op &&
        (t.text == "==" || t.text == "!=" || t.text == "<" || t.text == ">" ||
         t.text == "<=" || t.text == ">=")) {
      op = std::string(t.text);
      next();
      return true;
    }
    if (t.is_name("in")) {
      op = "in";
      next();
      return true;
    }
    if (t.is_name("not") && at_kw("in", 1)) {
      op = "not in";
      next();
      next();
      return true;
    }
    if (t.is_name("is")) {
      next();
      op = accept_kw("not") ? "is not" : "is";
      return true;
    }
    return false;
  }

  ExprPtr parse_comparison() {
    SourcePos begin = peek().begin;
    ExprPtr left = parse_bitwise_or();
    std::string op;
    if (!comparison_op(op)) return left;
    auto e = std::make_unique<Expr>(ExprKind::Compare, SourceRange{begin, begin});
    e->children.push_back(std::move(left));
    do {
      e->ops.push_back(op);
      e->children.push_back(parse_bitwise_or());
    } while (comparison_op(op));
    e->range.end = prev_end();
    return e;
  }

  ExprPtr parse_binary(std::initializer_list<std::string_view> ops, ExprPtr (Parser::*sub)()) {
    SourcePos begin = peek().begin;
    ExprPtr left = (this->*sub)();
    while (true) {
      const Token& t = peek();
      if (t.kind != TokenKind::Op) break;
      auto it = std::find(ops.begin(), ops.end(), t.text);
      if (it == ops.end()) break;
      std::string op(t.text);
      next();
      ExprPtr right = (this->*sub)();
      auto e = make(ExprKind::BinOp, begin);
      e->id = std::move(op);
      e->children.push_back(std::move(left));
      e->children.push_back(std::move(right));
      left = std::move(e);
    }
    return left;
  }

  ExprPtr parse_bitwise_or() { return parse_binary({"|"}, &Parser::parse_bitwise_xor); }
  ExprPtr parse_bitwise_xor() { return parse_binary({"^"}, &Parser::parse_bitwise_and); }
  ExprPtr parse_bitwise_and() { return parse_binary({"&"}, &Parser::parse_shift); }
  ExprPtr parse_shift() { return parse_binary({"<<", ">>"}, &Parser::parse_sum); }
  ExprPtr parse_sum() { return parse_binary({"+", "-"}, &Parser::parse_term); }
  ExprPtr parse_term() { return parse_binary({"*", "/", "//", "%", "@"}, &Parser::parse_factor); }

  ExprPtr parse_factor() {
    const Token& t = peek();
    if (t.is_op("+") || t.is_op("-") || t.is_op("~")) {
      SourcePos begin = t.begin;
      std::string op(t.text);
      next();
      ExprPtr operand = parse_factor();
      auto e = make(ExprKind::UnaryOp, begin);
      e->id = std::move(op);
      e->children.push_back(std::move(operand));
      return e;
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    SourcePos begin = peek().begin;
    ExprPtr base = parse_await_primary();
    if (!accept_op("**")) return base;
    ExprPtr exponent = parse_factor();
    auto e = make(ExprKind::BinOp, begin);
    e->id = "**";
    e->children.push_back(std::move(base));
    e->children.push_back(std::move(exponent));
    return e;
  }

  ExprPtr parse_await_primary() {
    if (!at_kw("await")) return parse_primary();
    SourcePos begin = peek().begin;
    next();
    ExprPtr value = parse_primary();
    auto e = make(ExprKind::Await, begin);
    e->children.push_back(std::move(value));
    return e;
  }

  ExprPtr parse_primary() {
    SourcePos begin = peek().begin;
    ExprPtr e = parse_atom();
    while (true) {
      if (at_op(".")) {
        next();
        std::string attr = expect_name();
        auto a = make(ExprKind::Attribute, begin);
        a->id = std::move(attr);
        a->children.push_back(std::move(e));
        e = std::move(a);
      } else if (at_op("(")) {
        next();
        auto call = std::make_unique<Expr>(ExprKind::Call, SourceRange{begin, begin});
        call->children.push_back(std::move(e));
        parse_call_arguments(call->children, call->keywords);
        call->range.end = prev_end();
        e = std::move(call);
      } else if (at_op("[")) {
        next();
        ExprPtr index = parse_slices();
        expect_op("]");
        auto s = make(ExprKind::Subscript, begin);
        s->children.push_back(std::move(e));
        s->children.push_back(std::move(index));
        e = std::move(s);
      } else {
        break;
      }
    }
    return e;
  }

  // Consumes through the closing ')'.
  void parse_call_arguments(std::vector<ExprPtr>& positional, std::vector<Keyword>& keywords) {
    while (!at_op(")")) {
      SourcePos begin = peek().begin;
      if (at_op("*")) {
        next();
        ExprPtr value = parse_expression();
        auto e = make(ExprKind::Starred, begin);
        e->id = "*";
        e->children.push_back(std::move(value));
        positional.push_back(std::move(e));
      } else if (accept_op("**")) {
        Keyword k;
        k.value = parse_expression();
        k.range = SourceRange{begin, prev_end()};
        keywords.push_back(std::move(k));
      } else if (peek().kind == TokenKind::Name && !is_keyword(peek().text) && at_op("=", 1)) {
        Keyword k;
        k.name = std::string(next().text);
        next();  // =
        k.value = parse_expression();
        k.range = SourceRange{begin, prev_end()};
        keywords.push_back(std::move(k));
      } else {
        ExprPtr value = parse_named_expression();
        if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
          auto gen = std::make_unique<Expr>(ExprKind::GeneratorExp, SourceRange{begin, begin});
          gen->children.push_back(std::move(value));
          gen->generators = parse_comprehension_clauses();
          gen->range.end = prev_end();
          value = std::move(gen);
        }
        positional.push_back(std::move(value));
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
  }

  ExprPtr parse_slices() {
    SourcePos begin = peek().begin;
    ExprPtr first = parse_slice();
    if (!at_op(",")) return first;
    std::vector<ExprPtr> elts;
    elts.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op("]")) break;
      elts.push_back(parse_slice());
    }
    return tuple_of(std::move(elts), begin);
  }

  ExprPtr parse_slice() {
    SourcePos begin = peek().begin;
    ExprPtr lower;
    if (!at_op(":")) {
      lower = at_op("*") ? parse_starred("*") : parse_named_expression();
      if (!at_op(":")) return lower;
    }
    next();  // :
    ExprPtr upper;
    if (!at_op(":") && !at_op("]") && !at_op(",")) upper = parse_expression();
    ExprPtr step;
    if (accept_op(":")) {
      if (!at_op("]") && !at_op(",")) step = parse_expression();
    }
    auto e = make(ExprKind::Slice, begin);
    e->children.push_back(std::move(lower));
    e->children.push_back(std::move(upper));
    e->children.push_back(std::move(step));
    return e;
  }

  std::vector<Comprehension> parse_comprehension_clauses() {
    std::vector<Comprehension> clauses;
    while (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      Comprehension c;
      if (accept_kw("async")) c.is_async = true;
      expect_kw("for");
      c.target = parse_target_list();
      expect_kw("in");
      c.iter = parse_disjunction();
      while (accept_kw("if")) c.conditions.push_back(parse_disjunction());
      clauses.push_back(std::move(c));
    }
    return clauses;
  }

  ExprPtr parse_target() {
    if (at_op("*")) return parse_starred("*");
    return parse_bitwise_or();
  }

  ExprPtr parse_target_list() {
    SourcePos begin = peek().begin;
    ExprPtr first = parse_target();
    if (!at_op(",")) return first;
    std::vector<ExprPtr> elts;
    elts.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_sequence_end() || peek().kind == TokenKind::Newline) break;
      elts.push_back(parse_target());
    }
    return tuple_of(std::move(elts), begin);
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    SourcePos begin = t.begin;
    switch (t.kind) {
      case TokenKind::Name: {
        if (t.text == "True" || t.text == "False" || t.text == "None") {
          next();
          auto e = make(ExprKind::Constant, begin);
          e->id = std::string(t.text);
          e->literal = t.text == "None" ? LiteralKind::None : LiteralKind::Boolean;
          return e;
        }
        if (t.text == "yield") return parse_yield();
        if (is_keyword(t.text)) fail("invalid syntax");
        next();
        auto e = make(ExprKind::Name, begin);
        e->id = std::string(t.text);
        return e;
      }
      case TokenKind::Number: {
        next();
        auto e = make(ExprKind::Constant, begin);
        e->id = std::string(t.text);
        e->literal = LiteralKind::Number;
        return e;
      }
      case TokenKind::String:
        return parse_strings();
      case TokenKind::Op:
        if (t.text == "...") {
          next();
          auto e = make(ExprKind::Constant, begin);
          e->id = "...";
          e->literal = LiteralKind::Ellipsis;
          return e;
        }
        if (t.text == "(") return parse_paren();
        if (t.text == "[") return parse_list();
        if (t.text == "{") return parse_brace();
        break;
      default:
        break;
    }
    fail("invalid syntax");
  }

  ExprPtr parse_strings() {
    SourcePos begin = peek().begin;
    bool formatted = false;
    bool bytes = false;
    while (peek().kind == TokenKind::String) {
      std::string_view text = next().text;
      for (char ch : text) {
        if (ch == '\'' || ch == '"') break;
        if (ch == 'f' || ch == 'F') formatted = true;
        if (ch == 'b' || ch == 'B') bytes = true;
      }
    }
    auto e = make(formatted ? ExprKind::FormattedString : ExprKind::Constant, begin);
    e->id = std::string(src_.substr(begin.offset, e->range.end.offset - begin.offset));
    e->literal = bytes ? LiteralKind::Bytes : LiteralKind::String;
    return e;
  }

  ExprPtr parse_paren() {
    SourcePos begin = peek().begin;
    expect_op("(");
    if (accept_op(")")) return make(ExprKind::Tuple, begin);
    if (at_kw("yield")) {
      ExprPtr y = parse_yield();
      expect_op(")");
      return y;
    }
    ExprPtr first = parse_star_named_expression();
    if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      auto gen = std::make_unique<Expr>(ExprKind::GeneratorExp, SourceRange{begin, begin});
      gen->children.push_back(std::move(first));
      gen->generators = parse_comprehension_clauses();
      expect_op(")");
      gen->range.end = prev_end();
      return gen;
    }
    if (!at_op(",")) {
      expect_op(")");
      return first;
    }
    std::vector<ExprPtr> elts;
    elts.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op(")")) break;
      elts.push_back(parse_star_named_expression());
    }
    expect_op(")");
    return tuple_of(std::move(elts), begin);
  }

  ExprPtr parse_list() {
    SourcePos begin = peek().begin;
    expect_op("[");
    if (accept_op("]")) return make(ExprKind::List, begin);
    ExprPtr first = parse_star_named_expression();
    if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      auto comp = std::make_unique<Expr>(ExprKind::ListComp, SourceRange{begin, begin});
      comp->children.push_back(std::move(first));
      comp->generators = parse_comprehension_clauses();
      expect_op("]");
      comp->range.end = prev_end();
      return comp;
    }
    auto list = std::make_unique<Expr>(ExprKind::List, SourceRange{begin, begin});
    list->children.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op("]")) break;
      list->children.push_back(parse_star_named_expression());
    }
    expect_op("]");
    list->range.end = prev_end();
    return list;
  }

  ExprPtr parse_brace() {
    SourcePos begin = peek().begin;
    expect_op("{");
    if (accept_op("}")) return make(ExprKind::Dict, begin);
    if (at_op("**")) {
      auto dict = std::make_unique<Expr>(ExprKind::Dict, SourceRange{begin, begin});
      parse_dict_entries(*dict, true);
      return dict;
    }
    ExprPtr first = parse_star_named_expression();
    if (accept_op(":")) {
      ExprPtr value = parse_expression();
      if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
        auto comp = std::make_unique<Expr>(ExprKind::DictComp, SourceRange{begin, begin});
        comp->children.push_back(std::move(first));
        comp->children.push_back(std::move(value));
        comp->generators = parse_comprehension_clauses();
        expect_op("}");
        comp->range.end = prev_end();
        return comp;
      }
      auto dict = std::make_unique<Expr>(ExprKind::Dict, SourceRange{begin, begin});
      dict->children.push_back(std::move(first));
      dict->children.push_back(std::move(value));
      if (accept_op(",")) {
        parse_dict_entries(*dict, false);
      } else {
        expect_op("}");
        dict->range.end = prev_end();
      }
      return dict;
    }
    if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      auto comp = std::make_unique<Expr>(ExprKind::SetComp, SourceRange{begin, begin});
      comp->children.push_back(std::move(first));
      comp->generators = parse_comprehension_clauses();
      expect_op("}");
      comp->range.end = prev_end();
      return comp;
    }
    auto set = std::make_unique<Expr>(ExprKind::Set, SourceRange{begin, begin});
    set->children.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op("}")) break;
      set->children.push_back(parse_star_named_expression());
    }
    expect_op("}");
    set->range.end = prev_end();
    return set;
  }

  // Parses `key: value` / `**value` entries through the closing brace.
  void parse_dict_entries(Expr& dict, bool first_entry_pending) {
    (void)first_entry_pending;
    while (!at_op("}")) {
      if (accept_op("**")) {
        dict.children.push_back(nullptr);
        dict.children.push_back(parse_bitwise_or());
      } else {
        dict.children.push_back(parse_expression());
        expect_op(":");
        dict.children.push_back(parse_expression());
      }
      if (!accept_op(",")) break;
    }
    expect_op("}");
    dict.range.end = prev_end();
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Module parse_module(std::string_view source) {
  return Parser(source, tokenize(source)).parse_file();
}

}  // namespace hybridize::frontend
