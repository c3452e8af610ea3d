#include "hybridize/frontend/tokenizer.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>

namespace hybridize::frontend {

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Name: return "NAME";
    case TokenKind::Number: return "NUMBER";
    case TokenKind::String: return "STRING";
    case TokenKind::Op: return "OP";
    case TokenKind::Newline: return "NEWLINE";
    case TokenKind::Indent: return "INDENT";
    case TokenKind::Dedent: return "DEDENT";
    case TokenKind::EndMarker: return "ENDMARKER";
  }
  return "?";
}

SyntaxError::SyntaxError(std::string message, std::uint32_t line,
                         std::uint32_t column, bool python2)
    : std::runtime_error(std::move(message)),
      line_(line),
      column_(column),
      python2_(python2) {}

namespace {

// Longest first so that greedy matching works.
constexpr std::array<std::string_view, 48> kOperators = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>",
    "<=",  ">=",  "==",  "!=",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=",
    "^=",  "@=",  "(",   ")",   "[",   "]",  "{",  "}",  ":",  ",",  ";",
    ".",   "+",   "-",   "*",   "/",   "%",  "|",  "&",  "^",  "~",  "<",
    ">",   "=",   "@",   "!",
};

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_string_prefix(std::string_view ident) {
  if (ident.size() > 2) return false;
  bool seen_r = false, seen_bfu = false;
  for (char ch : ident) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (c == 'r') {
      if (seen_r) return false;
      seen_r = true;
    } else if (c == 'b' || c == 'f' || c == 'u') {
      if (seen_bfu) return false;
      seen_bfu = true;
    } else {
      return false;
    }
  }
  return true;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    bool at_line_start = true;
    while (true) {
      if (at_line_start && paren_depth_ == 0) {
        if (!handle_indentation()) break;
        at_line_start = false;
      }
      skip_whitespace();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
        continue;
      }
      if (c == '\\') {
        std::size_t nl = newline_length(pos_ + 1);
        if (nl == 0) {
          if (pos_ + 1 >= src_.size()) fail("unexpected end of file after line continuation");
          fail("unexpected character after line continuation");
        }
        pos_ += 1;
        advance_newline(nl);
        continue;
      }
      if (std::size_t nl = newline_length(pos_); nl > 0) {
        if (paren_depth_ > 0) {
          advance_newline(nl);
          continue;
        }
        SourcePos begin = here();
        std::size_t start = pos_;
        advance_newline(nl);
        push(TokenKind::Newline, start, begin);
        at_line_start = true;
        continue;
      }
      lex_token();
    }
    finish();
    return std::move(tokens_);
  }

 private:
  SourcePos here() const {
    return SourcePos{static_cast<std::uint32_t>(pos_), line_,
                     static_cast<std::uint32_t>(pos_ - line_start_)};
  }

  [[noreturn]] void fail(const std::string& message, bool python2 = false) const {
    SourcePos p = here();
    throw SyntaxError(message, p.line, p.column, python2);
  }

  std::size_t newline_length(std::size_t at) const {
    if (at >= src_.size()) return 0;
    if (src_[at] == '\n') return 1;
    if (src_[at] == '\r') return (at + 1 < src_.size() && src_[at + 1] == '\n') ? 2 : 1;
    return 0;
  }

  void advance_newline(std::size_t len) {
    pos_ += len;
    ++line_;
    line_start_ = pos_;
  }

  void skip_whitespace() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f')) {
      ++pos_;
    }
  }

  void push(TokenKind kind, std::size_t start, SourcePos begin) {
    tokens_.push_back(Token{kind, src_.substr(start, pos_ - start), begin, here()});
  }

  void push_empty(TokenKind kind) {
    SourcePos p = here();
    tokens_.push_back(Token{kind, src_.substr(pos_, 0), p, p});
  }

  // Returns false at end of input.
  bool handle_indentation() {
    while (true) {
      std::size_t width = 0;
      while (pos_ < src_.size()) {
        char c = src_[pos_];
        if (c == ' ') {
          ++width;
        } else if (c == '\t') {
          width = (width / 8 + 1) * 8;
        } else if (c == '\f') {
          width = 0;
        } else {
          break;
        }
        ++pos_;
      }
      if (pos_ >= src_.size()) return false;
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
        if (pos_ >= src_.size()) return false;
      }
      if (std::size_t nl = newline_length(pos_); nl > 0) {
        advance_newline(nl);
        continue;
      }
      if (width > indents_.back()) {
        indents_.push_back(width);
        push_empty(TokenKind::Indent);
      } else {
        while (width < indents_.back()) {
          indents_.pop_back();
          push_empty(TokenKind::Dedent);
        }
        if (width != indents_.back()) fail("unindent does not match any outer indentation level");
      }
      return true;
    }
  }

  void lex_token() {
    SourcePos begin = here();
    std::size_t start = pos_;
    auto c = static_cast<unsigned char>(src_[pos_]);

    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      std::string_view ident = src_.substr(start, pos_ - start);
      if (pos_ < src_.size() && (src_[pos_] == '\'' || src_[pos_] == '"')) {
        if (is_string_prefix(ident)) {
          lex_string(start, begin, ident);
          return;
        }
        std::string lowered;
        for (char ch : ident) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        if (lowered == "ur") fail("Python 2 string prefix 'ur' is not supported", true);
      }
      push(TokenKind::Name, start, begin);
      return;
    }
    if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      lex_number(start, begin);
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string(start, begin, {});
      return;
    }
    if (c == '`') fail("Python 2 backtick repr is not supported", true);
    if (src_.substr(pos_, 2) == "<>") fail("Python 2 '<>' operator is not supported", true);
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        pos_ += op.size();
        if (op == "(" || op == "[" || op == "{") {
          ++paren_depth_;
        } else if (op == ")" || op == "]" || op == "}") {
          if (paren_depth_ > 0) --paren_depth_;
        }
        push(TokenKind::Op, start, begin);
        return;
      }
    }
    fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
  }

  void lex_number(std::size_t start, SourcePos begin) {
    auto digits = [&](auto pred) {
      while (pos_ < src_.size() && (pred(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    };
    auto is_dec = [](unsigned char ch) { return std::isdigit(ch) != 0; };
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
        std::strchr("xXoObB", src_[pos_ + 1]) != nullptr) {
      pos_ += 2;
      digits([](unsigned char ch) { return std::isxdigit(ch) != 0; });
    } else {
      digits(is_dec);
      std::string_view int_part = src_.substr(start, pos_ - start);
      bool is_float = false;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        is_float = true;
        ++pos_;
        digits(is_dec);
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t save = pos_;
        ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          is_float = true;
          digits(is_dec);
        } else {
          pos_ = save;
        }
      }
      if (!is_float && int_part.size() > 1 && int_part[0] == '0' &&
          int_part.find_first_not_of("0_") != std::string_view::npos) {
        fail("Python 2 octal literal is not supported", true);
      }
    }
    if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J')) {
      ++pos_;
    } else if (pos_ < src_.size() && (src_[pos_] == 'l' || src_[pos_] == 'L')) {
      fail("Python 2 long integer suffix is not supported", true);
    }
    push(TokenKind::Number, start, begin);
  }

  void lex_string(std::size_t start, SourcePos begin, std::string_view prefix) {
    (void)prefix;
    char quote = src_[pos_];
    bool triple = src_.substr(pos_, 3) == std::string(3, quote);
    pos_ += triple ? 3 : 1;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated string literal");
      char ch = src_[pos_];
      if (ch == '\\') {
        std::size_t nl = newline_length(pos_ + 1);
        if (nl > 0) {
          pos_ += 1;
          advance_newline(nl);
        } else {
          pos_ += 2;
        }
        continue;
      }
      if (std::size_t nl = newline_length(pos_); nl > 0) {
        if (!triple) fail("unterminated string literal");
        advance_newline(nl);
        continue;
      }
      if (ch == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (src_.substr(pos_, 3) == std::string(3, quote)) {
          pos_ += 3;
          break;
        }
      }
      ++pos_;
    }
    push(TokenKind::String, start, begin);
  }

  void finish() {
    if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline &&
        tokens_.back().kind != TokenKind::Dedent && tokens_.back().kind != TokenKind::Indent) {
      push_empty(TokenKind::Newline);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      push_empty(TokenKind::Dedent);
    }
    push_empty(TokenKind::EndMarker);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::size_t line_start_ = 0;
  int paren_depth_ = 0;
  std::vector<std::size_t> indents_{0};
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

std::string reserialize(std::string_view source, const std::vector<Token>& tokens) {
  std::string out;
  out.reserve(source.size());
  std::size_t cursor = 0;
  for (const Token& tok : tokens) {
    std::size_t begin = tok.begin.offset;
    if (begin > cursor) out.append(source.substr(cursor, begin - cursor));
    out.append(tok.text);
    cursor = std::max<std::size_t>(cursor, tok.end.offset);
  }
  if (cursor < source.size()) out.append(source.substr(cursor));
  return out;
}

}  // namespace hybridize::frontend
