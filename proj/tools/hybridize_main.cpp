#include <CLI11.hpp>
#include <iostream>

#include "hybridize/driver/pipeline.h"

int main(int argc, char** argv) {
  CLI::App app{"Adds or removes @tf.function across a Python project", "hybridize"};
  app.set_version_flag("--version", "hybridize 0.1.0");
  app.require_subcommand(1);

  hybridize::ToolConfig config;
  std::string root;
  std::string report;
  std::string callgraph;
  bool no_speculative = false;
  bool no_hints = false;
  bool no_pytest = false;

  CLI::App* analyze = app.add_subcommand("analyze", "Analyze a project and print or apply the edits");
  analyze->add_option("root", root, "Project root directory")->required();
  analyze->add_flag("--consider-booleans", config.consider_booleans, "Count Boolean arguments as literals");
  analyze->add_flag("--no-speculative", no_speculative, "Disable keyword and functor based guesses");
  analyze->add_flag("--no-type-hints", no_hints, "Ignore parameter annotations");
  analyze->add_flag("--no-pytest-entrypoints", no_pytest, "Do not treat test functions as entry points");
  analyze->add_flag("--apply", config.apply, "Rewrite files in place instead of printing a diff");
  analyze->add_option("--report", report, "Write the JSON report to this path");
  analyze->add_option("--summaries", config.summary_paths, "Extra API summary files")->check(CLI::ExistingFile);
  analyze->add_option("--dump-callgraph", callgraph, "Write the call graph in DOT format to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : hybridize::driver::kExitConfig;
  }
  config.speculative = !no_speculative;
  config.follow_type_hints = !no_hints;
  config.pytest_entry_points = !no_pytest;
  if (!report.empty()) config.report_path = report;
  if (!callgraph.empty()) config.dump_callgraph = callgraph;
  return hybridize::driver::run(root, config, std::cout, std::cerr);
}
