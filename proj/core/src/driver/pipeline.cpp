#include "hybridize/driver/pipeline.h"

#include <fstream>
#include <ostream>

#include "hybridize/graphs/entry_points.h"

namespace hybridize::driver {

namespace {

void check_plan(const Analysis& a) {
  for (const refactor::FunctionAnalysis& f : a.plan.functions) {
    const refactor::PreconditionVerdict& v = f.verdict;
    if (v.rule.has_value() == (v.action == refactor::Action::None)) {
      throw InvariantError("rule and action disagree for " + f.fq_name);
    }
    if (v.rule && !v.failures.empty()) {
      throw InvariantError("passing rule with failures for " + f.fq_name);
    }
    if (v.action == refactor::Action::Dehybridize && f.mode.decorator < 0) {
      throw InvariantError("dehybridize without a decorator for " + f.fq_name);
    }
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw frontend::ConfigError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw frontend::ConfigError("cannot write " + path.string());
}

}  // namespace

std::unique_ptr<Analysis> analyze(frontend::ProjectModel project, const ToolConfig& config) {
  auto a = std::make_unique<Analysis>();
  a->config = config;
  a->project = std::move(project);
  std::vector<std::filesystem::path> paths(config.summary_paths.begin(), config.summary_paths.end());
  a->db = summaries::load_summaries(paths);
  const summaries::SummaryDb* db = &a->db;
  a->resolver = std::make_unique<frontend::NameResolver>(a->project,
                                                         [db](std::string_view name) { return db->knows(name); });
  a->program = frontend::lower_project(a->project, *a->resolver);
  a->entries = graphs::discover_entry_points(a->program, config.pytest_entry_points);
  a->graphs = graphs::build_graphs(a->program, a->entries, a->db);
  a->plan = refactor::plan_project(a->program, a->graphs, a->db, config);
  check_plan(*a);
  a->script = transform::apply_plan(a->plan, a->program);
  return a;
}

std::unique_ptr<Analysis> analyze(const std::filesystem::path& root, const ToolConfig& config) {
  return analyze(frontend::parse_project(root), config);
}

std::string render_callgraph(const Analysis& a) {
  return a.graphs.call_graph.to_dot(
      [&](int n) { return a.program.functions[static_cast<std::size_t>(n)].fq_name.str(); });
}

std::string render_diff(const Analysis& a) { return transform::render_diff(a.script, a.project); }

void apply(const Analysis& a) {
  for (const auto& [path, text] : transform::rewrite(a.script, a.project)) write_file(a.project.root / path, text);
}

int run(const std::filesystem::path& root, const ToolConfig& config, std::ostream& out, std::ostream& err) {
  std::unique_ptr<Analysis> a;
  try {
    a = analyze(root, config);
  } catch (const frontend::ConfigError& e) {
    err << "hybridize: " << e.what() << "\n";
    return kExitConfig;
  } catch (const summaries::SummaryError& e) {
    err << "hybridize: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "hybridize: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  try {
    std::string report = render_report(*a);
    if (config.report_path) write_file(*config.report_path, report);
    if (config.dump_callgraph) write_file(*config.dump_callgraph, render_callgraph(*a));
    if (config.apply) {
      apply(*a);
    } else {
      out << render_diff(*a);
    }
  } catch (const frontend::ConfigError& e) {
    err << "hybridize: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "hybridize: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  for (const auto& u : a->project.units) {
    if (u->failure) err << "hybridize: warning: " << u->path << ":" << u->failure->line << ": " << u->failure->message << "\n";
  }
  for (const transform::EditFailure& f : a->script.failures) {
    err << "hybridize: warning: " << f.file << ": " << f.function << ": " << f.message << "\n";
  }
  return kExitOk;
}

}  // namespace hybridize::driver
