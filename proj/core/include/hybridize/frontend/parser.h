#pragma once

#include <string_view>

#include "hybridize/frontend/ast.h"

namespace hybridize::frontend {

/// Parses a Python 3 module. Throws SyntaxError; Python 2 constructs (print
/// and exec statements, backticks, `<>`, old octal and long literals,
/// `except E, name`) are rejected with SyntaxError::is_python2() set.
Module parse_module(std::string_view source);

}  // namespace hybridize::frontend
