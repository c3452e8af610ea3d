#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracles.h"
#include "testing.h"

namespace hybridize::driver {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult run_on(const fs::path& root, ToolConfig config) {
  std::ostringstream out;
  std::ostringstream err;
  int status = run(root, config, out, err);
  return {status, out.str(), err.str()};
}

TEST(Cli, EmptyProject) {
  TempDir dir;
  fs::create_directory(dir.path() / "root");
  ToolConfig c;
  c.report_path = (dir.path() / "r.json").string();
  RunResult r = run_on(dir.path() / "root", c);
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_EQ(r.out, "");
  json report = json::parse(testing::read_file(dir.path() / "r.json"));
  for (const char* k : {"candidates", "refactorable", "edits", "P1", "P2", "P3", "F1", "F2", "F3", "F4"}) {
    EXPECT_EQ(report["summary"][k], 0) << k;
  }
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run_on(dir.path() / "missing", {}).status, kExitConfig);

  ToolConfig unwritable;
  unwritable.report_path = (dir.path() / "no" / "such" / "dir" / "r.json").string();
  EXPECT_EQ(run_on(testing::fixtures_dir() / "print_effect", unwritable).status, kExitConfig);

  testing::write_file(dir.path() / "bad.txt", "generator\n");
  ToolConfig bad_summaries;
  bad_summaries.summary_paths = {(dir.path() / "bad.txt").string()};
  EXPECT_EQ(run_on(testing::fixtures_dir() / "print_effect", bad_summaries).status, kExitConfig);
}

TEST(Cli, ReportSchema) {
  TempDir dir;
  ToolConfig c;
  c.report_path = (dir.path() / "r.json").string();
  RunResult r = run_on(testing::fixtures_dir() / "print_effect", c);
  ASSERT_EQ(r.status, kExitOk);
  nlohmann::ordered_json report = nlohmann::ordered_json::parse(testing::read_file(dir.path() / "r.json"));
  std::vector<std::string> top;
  for (auto it = report.begin(); it != report.end(); ++it) top.push_back(it.key());
  std::sort(top.begin(), top.end());
  EXPECT_EQ(top, (std::vector<std::string>{"assumptions", "config", "functions", "summary", "version"}));
  EXPECT_EQ(report["version"]["schema"], 1);
  EXPECT_EQ(report["config"]["consider_booleans"], false);
  EXPECT_EQ(report["config"]["speculative"], true);
  ASSERT_EQ(report["functions"].size(), 1u);
  const nlohmann::ordered_json& f = report["functions"][0];
  std::vector<std::string> keys;
  for (auto it = f.begin(); it != f.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"fq_name", "file", "line", "exe", "tens", "tens_evidence", "lit",
                                            "lit_evidence", "se", "se_witnesses", "rec", "rule", "action",
                                            "failures", "warnings"}));
  EXPECT_EQ(f["failures"], nlohmann::ordered_json::array({"F3"}));
  bool print_at_2 = false;
  for (const auto& w : f["se_witnesses"]) print_at_2 |= w["detail"] == "builtins.print" && w["line"] == 2;
  EXPECT_TRUE(print_at_2);
}

TEST(Cli, SpeculativeAssumptionReported) {
  TempDir dir;
  testing::write_file(dir.path() / "root" / "m.py",
                      "import tensorflow as tf\n\n@tf.function\ndef training_step(batch):\n    return batch\n\n"
                      "training_step(load())\n");
  ToolConfig c;
  c.report_path = (dir.path() / "r.json").string();
  ASSERT_EQ(run_on(dir.path() / "root", c).status, kExitOk);
  json report = json::parse(testing::read_file(dir.path() / "r.json"));
  ASSERT_EQ(report["assumptions"].size(), 1u);
  EXPECT_EQ(report["assumptions"][0]["basis"], "keyword_match");
}

TEST(Cli, DeterministicAndConsistent) {
  TempDir dir;
  for (const auto& [path, text] : testing::synthetic_corpus(800, 5)) testing::write_file(dir.path() / "root" / path, text);
  ToolConfig c;
  c.report_path = (dir.path() / "r1.json").string();
  RunResult first = run_on(dir.path() / "root", c);
  c.report_path = (dir.path() / "r2.json").string();
  RunResult second = run_on(dir.path() / "root", c);
  ASSERT_EQ(first.status, kExitOk);
  EXPECT_EQ(first.out, second.out);
  std::string r1 = testing::read_file(dir.path() / "r1.json");
  std::string r2 = testing::read_file(dir.path() / "r2.json");
  json a = json::parse(r1);
  json b = json::parse(r2);
  a["config"].erase("report_path");
  b["config"].erase("report_path");
  EXPECT_EQ(a, b);

  // Counters recomputed from the records.
  std::size_t refactorable = 0;
  std::map<std::string, std::size_t> failures;
  std::string last_file;
  long last_line = -1;
  for (const json& f : a["functions"]) {
    if (f["action"] != "none") ++refactorable;
    for (const json& x : f["failures"]) ++failures[x.get<std::string>()];
    std::string file = f["file"];
    long line = f["line"];
    EXPECT_TRUE(file > last_file || (file == last_file && line >= last_line));
    last_file = file;
    last_line = line;
  }
  EXPECT_EQ(a["summary"]["refactorable"], refactorable);
  EXPECT_EQ(a["summary"]["candidates"], a["functions"].size());
  for (const char* k : {"F1", "F2", "F3", "F4"}) EXPECT_EQ(a["summary"][k], failures[k]) << k;

  // Every action has an edit for its function, and every edit has an action.
  auto analysis = testing::analyze_dir(dir.path() / "root");
  std::set<std::string> acted;
  for (const auto& f : analysis->plan.functions) {
    if (f.verdict.action != refactor::Action::None) acted.insert(f.fq_name);
  }
  std::set<std::string> edited;
  for (const auto& e : analysis->script.edits) {
    if (e.kind != transform::EditKind::InsertImport) EXPECT_TRUE(edited.insert(e.function).second) << e.function;
  }
  EXPECT_EQ(acted, edited);
}

TEST(Cli, ApplyThenRerunIsEmpty) {
  TempDir dir;
  dir.copy_from(testing::fixtures_dir() / "keras_model");
  ToolConfig c;
  c.apply = true;
  RunResult r = run_on(dir.path(), c);
  ASSERT_EQ(r.status, kExitOk);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(testing::read_file(dir.path() / "model.py"),
            testing::read_file(testing::fixtures_dir() / "golden" / "keras_model.py"));
  RunResult again = run_on(dir.path(), {});
  EXPECT_EQ(again.status, kExitOk);
  EXPECT_EQ(again.out, "");
}

TEST(Cli, ParseFailuresAreWarnings) {
  TempDir dir;
  testing::write_file(dir.path() / "root" / "old.py", "print 'py2'\n");
  testing::write_file(dir.path() / "root" / "ok.py", "def f():\n    pass\n\nf()\n");
  ToolConfig c;
  c.report_path = (dir.path() / "r.json").string();
  RunResult r = run_on(dir.path() / "root", c);
  EXPECT_EQ(r.status, kExitOk);
  json report = json::parse(testing::read_file(dir.path() / "r.json"));
  ASSERT_EQ(report["summary"]["parse_warnings"].size(), 1u);
  EXPECT_EQ(report["summary"]["parse_warnings"][0]["file"], "old.py");
  EXPECT_EQ(report["summary"]["parse_warnings"][0]["python2"], true);
  EXPECT_NE(r.err.find("old.py"), std::string::npos);
}

TEST(Cli, CallGraphDump) {
  TempDir dir;
  ToolConfig c;
  c.dump_callgraph = (dir.path() / "cg.dot").string();
  ASSERT_EQ(run_on(testing::fixtures_dir() / "keras_model", c).status, kExitOk);
  std::string dot = testing::read_file(dir.path() / "cg.dot");
  EXPECT_NE(dot.find("model.SequentialModel.__call__"), std::string::npos);
}

}  // namespace
}  // namespace hybridize::driver
