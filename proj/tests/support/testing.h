#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hybridize/driver/pipeline.h"

namespace hybridize::testing {

std::filesystem::path source_dir();
std::filesystem::path fixtures_dir();
std::filesystem::path oracles_dir();
std::string python_executable();
std::string diff_executable();

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  /// Copies the contents of `from` into this directory.
  void copy_from(const std::filesystem::path& from) const;

 private:
  std::filesystem::path path_;
};

struct CommandResult {
  int status = -1;
  std::string out;
};

/// Runs `command` through the shell, capturing stdout.
CommandResult run_command(const std::string& command);
std::string shell_quote(const std::string& s);

std::unique_ptr<driver::Analysis> analyze_dir(const std::filesystem::path& root, const ToolConfig& config = {});
std::unique_ptr<driver::Analysis> analyze_sources(std::vector<std::pair<std::string, std::string>> files,
                                                  const ToolConfig& config = {});

const refactor::FunctionAnalysis* find_record(const driver::Analysis& a, const std::string& fq_name);

}  // namespace hybridize::testing
