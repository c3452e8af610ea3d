#pragma once

#include <string>
#include <vector>

#include "hybridize/frontend/program.h"

namespace hybridize::graphs {

enum class EntryKind : std::uint8_t { ModuleScript, TestFunction };

const char* to_string(EntryKind kind);

struct EntryPoint {
  EntryKind kind = EntryKind::ModuleScript;
  std::string target;  // module name, or fully qualified test function
  std::string module;
  int function = -1;   // FunctionUnit id of the test function
  int test_class = -1; // class holding a test method, or -1

  bool operator==(const EntryPoint&) const = default;
};

/// A module is a script when it has a top-level statement other than an
/// import, definition, docstring, `pass`, or an assignment without calls.
bool is_module_script(const frontend::Module& module);

/// True for `test_*.py` and `*_test.py`.
bool is_test_file(std::string_view path);

/// Entries ordered by file, then line.
std::vector<EntryPoint> discover_entry_points(const frontend::Program& program, bool pytest_entry_points);

}  // namespace hybridize::graphs
