#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hybridize/config.h"
#include "hybridize/frontend/program.h"
#include "hybridize/frontend/project.h"
#include "hybridize/graphs/builder.h"
#include "hybridize/refactor/preconditions.h"
#include "hybridize/summaries/summary_db.h"
#include "hybridize/transform/edits.h"

namespace hybridize::driver {

/// Exit statuses of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInternal = 2;

/// Raised when an internal consistency check fails.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// All pipeline stages for one project. Later stages point into earlier ones,
/// so an Analysis is neither copied nor moved.
struct Analysis {
  Analysis() = default;
  Analysis(const Analysis&) = delete;
  Analysis& operator=(const Analysis&) = delete;

  ToolConfig config;
  frontend::ProjectModel project;
  summaries::SummaryDb db;
  std::unique_ptr<frontend::NameResolver> resolver;
  frontend::Program program;
  std::vector<graphs::EntryPoint> entries;
  graphs::Graphs graphs;
  refactor::RefactoringPlan plan;
  transform::EditScript script;
};

/// Runs every stage from parsing to edit planning on `project`.
std::unique_ptr<Analysis> analyze(frontend::ProjectModel project, const ToolConfig& config);
/// Parses `root` and analyzes it. Throws frontend::ConfigError for an
/// unusable root and summaries::SummaryError for bad summary files.
std::unique_ptr<Analysis> analyze(const std::filesystem::path& root, const ToolConfig& config);

/// Report as JSON text with stable key order.
std::string render_report(const Analysis& analysis);
/// Call graph in DOT format.
std::string render_callgraph(const Analysis& analysis);
/// Unified diff of every planned edit.
std::string render_diff(const Analysis& analysis);
/// Rewrites the edited files under the project root.
void apply(const Analysis& analysis);

/// `hybridize analyze <root>` with parsed flags: prints the diff to `out`
/// unless applying, writes the optional report and call graph, and returns
/// an exit status.
int run(const std::filesystem::path& root, const ToolConfig& config, std::ostream& out, std::ostream& err);

}  // namespace hybridize::driver
