#include "testing.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

namespace hybridize::testing {

namespace fs = std::filesystem;

fs::path source_dir() { return HYBRIDIZE_SOURCE_DIR; }
fs::path fixtures_dir() { return source_dir() / "tests" / "fixtures"; }
fs::path oracles_dir() { return source_dir() / "tests" / "oracles"; }
std::string python_executable() { return HYBRIDIZE_PYTHON; }
std::string diff_executable() { return HYBRIDIZE_DIFF; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

TempDir::TempDir() {
  std::random_device rd;
  std::mt19937_64 rng(rd());
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path p = fs::temp_directory_path() / ("hybridize-test-" + std::to_string(rng()));
    if (fs::create_directory(p)) {
      path_ = p;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void TempDir::copy_from(const fs::path& from) const {
  fs::copy(from, path_, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

CommandResult run_command(const std::string& command) {
  CommandResult r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::unique_ptr<driver::Analysis> analyze_dir(const fs::path& root, const ToolConfig& config) {
  return driver::analyze(root, config);
}

std::unique_ptr<driver::Analysis> analyze_sources(std::vector<std::pair<std::string, std::string>> files,
                                                  const ToolConfig& config) {
  return driver::analyze(frontend::make_project("/nonexistent", std::move(files)), config);
}

const refactor::FunctionAnalysis* find_record(const driver::Analysis& a, const std::string& fq_name) {
  for (const refactor::FunctionAnalysis& f : a.plan.functions) {
    if (f.fq_name == fq_name) return &f;
  }
  return nullptr;
}

}  // namespace hybridize::testing
