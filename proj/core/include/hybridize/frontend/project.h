#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridize/frontend/ast.h"

namespace hybridize::frontend {

/// Raised for problems with the analysis root itself (missing, unreadable).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParseFailure {
  std::string message;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  bool python2 = false;
};

struct SourceUnit {
  std::string path;    // relative to the project root, '/'-separated
  std::string module;  // dotted module name derived from `path`
  bool is_package_init = false;
  std::string text;
  std::unique_ptr<Module> tree;  // null when the file failed to parse
  std::optional<ParseFailure> failure;

  /// Package that relative imports in this unit are resolved against.
  std::string package() const;
  bool parsed() const { return tree != nullptr; }
};

struct ProjectModel {
  std::filesystem::path root;
  std::vector<std::unique_ptr<SourceUnit>> units;  // sorted by path
  std::set<std::string> packages;                  // dotted package names

  const SourceUnit* find_module(std::string_view module) const;
  bool is_package(std::string_view module) const { return packages.count(std::string(module)) != 0; }

 private:
  friend ProjectModel make_project(std::filesystem::path, std::vector<std::pair<std::string, std::string>>);
  std::map<std::string, const SourceUnit*, std::less<>> by_module_;
};

/// Module name for a root-relative path: `pkg/a.py` -> `pkg.a`,
/// `pkg/__init__.py` -> `pkg`. A root-level `__init__.py` maps to `__init__`.
std::string module_name_for(std::string_view relative_path);

/// Reads and parses every `.py` file below `root`. Hidden directories and
/// `__pycache__` are skipped. Throws ConfigError when `root` is unusable;
/// individual syntax errors are recorded on the unit instead.
ProjectModel parse_project(const std::filesystem::path& root);

/// Builds a project from in-memory (relative path, text) pairs.
ProjectModel make_project(std::filesystem::path root,
                          std::vector<std::pair<std::string, std::string>> files);

/// Resolves `from <level dots><module> import ...` relative to `unit`.
/// Returns an empty string when the relative import climbs above the root.
std::string resolve_relative(const SourceUnit& unit, int level, std::string_view module);

}  // namespace hybridize::frontend
