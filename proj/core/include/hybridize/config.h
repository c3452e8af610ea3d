#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hybridize {

struct ToolConfig {
  bool consider_booleans = false;
  bool speculative = true;
  bool follow_type_hints = true;
  bool pytest_entry_points = true;
  bool apply = false;
  std::vector<std::string> summary_paths;
  std::optional<std::string> report_path;
  std::optional<std::string> dump_callgraph;
};

}  // namespace hybridize
