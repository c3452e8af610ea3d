#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hybridize::frontend {

/// A position in a source buffer. Lines are 1-based; columns are 0-based
/// byte offsets from the start of the line.
struct SourcePos {
  std::uint32_t offset = 0;
  std::uint32_t line = 1;
  std::uint32_t column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

struct SourceRange {
  SourcePos begin;
  SourcePos end;
};

enum class TokenKind : std::uint8_t {
  Name,
  Number,
  String,
  Op,
  Newline,
  Indent,
  Dedent,
  EndMarker,
};

const char* to_string(TokenKind kind);

/// Tokens view into the buffer passed to tokenize(); the buffer must outlive
/// them.
struct Token {
  TokenKind kind;
  std::string_view text;
  SourcePos begin;
  SourcePos end;

  bool is_op(std::string_view op) const {
    return kind == TokenKind::Op && text == op;
  }
  bool is_name(std::string_view name) const {
    return kind == TokenKind::Name && text == name;
  }
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::string message, std::uint32_t line, std::uint32_t column,
              bool python2 = false);

  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  /// True when the input was rejected because it uses Python 2 syntax.
  bool is_python2() const { return python2_; }

 private:
  std::uint32_t line_;
  std::uint32_t column_;
  bool python2_;
};

/// Splits Python 3 source into tokens, including INDENT/DEDENT and logical
/// NEWLINE tokens. Comments, blank lines and line continuations produce no
/// tokens. Throws SyntaxError.
std::vector<Token> tokenize(std::string_view source);

/// Concatenates the source slices covered by `tokens` together with the
/// original inter-token trivia. For the token stream of an unmodified buffer
/// this reproduces the buffer byte for byte.
std::string reserialize(std::string_view source, const std::vector<Token>& tokens);

}  // namespace hybridize::frontend
