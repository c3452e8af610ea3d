// One line per acceptance criterion; exits non-zero when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.h"
#include "testing.h"

namespace fs = std::filesystem;
using namespace hybridize;
using namespace hybridize::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    if (!detail.empty()) detail += "; ";
    detail += why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool has_failure(const refactor::FunctionAnalysis& f, refactor::Failure x) { return f.verdict.failures.count(x) != 0; }

Outcome golden_programs() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  fs::path fx = fixtures_dir();

  auto l2 = analyze_dir(fx / "keras_model");
  const auto* call = find_record(*l2, "model.SequentialModel.__call__");
  if (call == nullptr || call->verdict.rule != refactor::Rule::P1) o.fail("keras_model __call__ is not P1");
  std::string before = read_file(fx / "keras_model" / "model.py");
  std::string expected_after = read_file(fx / "golden" / "keras_model.py");
  std::string golden = read_file(fx / "golden" / "keras_model.diff");
  if (reference_diff("model.py", before, expected_after) != golden) o.fail("keras_model golden diff disagrees with diff -u");
  if (driver::render_diff(*l2) != golden) o.fail("keras_model diff differs from golden");

  auto l3 = analyze_dir(fx / "print_effect");
  const auto* f = find_record(*l3, "f.f");
  if (f == nullptr || !has_failure(*f, refactor::Failure::F3)) o.fail("print_effect f lacks F3");
  if (!l3->script.empty()) o.fail("print_effect has edits");
  bool print_witness = false;
  if (f != nullptr) {
    for (const auto& w : f->effects.witnesses) print_witness |= w.detail == "builtins.print" && w.line == 2;
  }
  if (!print_witness) o.fail("print_effect lacks a builtins.print witness at line 2");

  auto l4 = analyze_dir(fx / "counter_state");
  const auto* c4 = find_record(*l4, "counter.Model.__call__");
  if (c4 == nullptr || !has_failure(*c4, refactor::Failure::F3)) o.fail("counter_state __call__ lacks F3");
  if (!l4->script.empty()) o.fail("counter_state has edits");

  auto l5 = analyze_dir(fx / "train_step");
  const auto* train = find_record(*l5, "train.train");
  if (train == nullptr || train->verdict.rule != refactor::Rule::P3) o.fail("train_step train is not P3");
  std::string golden5 = read_file(fx / "golden" / "train_step.diff");
  if (reference_diff("train.py", read_file(fx / "train_step" / "train.py"), read_file(fx / "golden" / "train_step.py")) !=
      golden5) {
    o.fail("train_step golden diff disagrees with diff -u");
  }
  if (driver::render_diff(*l5) != golden5) o.fail("train_step diff differs from golden");

  auto l6 = analyze_dir(fx / "bool_flag");
  const auto* net = find_record(*l6, "net.NeuralNet.call");
  if (net == nullptr) {
    o.fail("bool_flag call missing");
  } else {
    for (const auto& ev : net->evidence.literals) {
      if (ev.name == "train") o.fail("bool_flag train carries literal evidence");
    }
  }
  double t = seconds_since(start);
  if (t >= 5.0) o.fail("took " + std::to_string(t) + " s");
  if (o.pass) o.detail = "5 programs, " + std::to_string(t) + " s";
  return o;
}

Outcome truth_table() {
  Outcome o;
  int agree = 0;
  for (const TableRow& row : precondition_table()) {
    refactor::PreconditionInput in;
    in.exe = row.hybrid ? refactor::Mode::Hybrid : refactor::Mode::Eager;
    in.tens = row.tens;
    in.lit = row.lit;
    in.se = row.se;
    in.rec = row.rec;
    refactor::PreconditionVerdict v = refactor::check_preconditions(in);
    std::string rule = v.rule ? refactor::to_string(*v.rule) : "";
    std::set<std::string> failures;
    for (auto x : v.failures) failures.insert(refactor::to_string(x));
    std::set<std::string> warnings;
    for (auto x : v.warnings) warnings.insert(refactor::to_string(x));
    if (rule == (row.rule ? row.rule : "") && failures == row.failures && warnings == row.warnings) ++agree;
  }
  if (agree != 32 || precondition_table().size() != 32) o.fail(std::to_string(agree) + "/32 rows agree");
  if (o.pass) o.detail = "32/32 rows agree";
  return o;
}

/// Corpora used by the idempotence and tree-diff criteria: (name, files).
std::vector<std::pair<std::string, fs::path>> fixture_corpora() {
  std::vector<std::pair<std::string, fs::path>> out;
  for (const char* l : {"keras_model", "print_effect", "counter_state", "train_step", "bool_flag"}) {
    out.emplace_back(l, fixtures_dir() / l);
  }
  for (const auto& e : fs::directory_iterator(fixtures_dir() / "flows")) out.emplace_back(e.path().filename(), e.path());
  out.emplace_back("effects", oracles_dir() / "effects");
  std::sort(out.begin(), out.end());
  return out;
}

void materialize_synthetic(const TempDir& dir) {
  for (const auto& [path, text] : synthetic_corpus(2000, 7)) write_file(dir.path() / path, text);
}

Outcome idempotence_and_trees(Outcome& trees) {
  Outcome o;
  std::size_t corpora = 0;
  std::size_t first_edits = 0;
  std::size_t files_checked = 0;
  auto check = [&](const std::string& name, const TempDir& dir) {
    ++corpora;
    auto first = analyze_dir(dir.path());
    first_edits += first->script.edits.size();
    std::map<std::string, std::string> before;
    std::map<std::string, std::vector<transform::Edit>> by_file;
    for (const auto& e : first->script.edits) by_file[e.file].push_back(e);
    for (const auto& [file, edits] : by_file) before[file] = read_file(dir.path() / file);
    driver::apply(*first);
    for (const auto& [file, edits] : by_file) {
      ++files_checked;
      std::string problem = tree_diff(before[file], read_file(dir.path() / file), edits, frontend::module_name_for(file));
      if (!problem.empty()) trees.fail(name + "/" + file + ": " + problem);
    }
    auto second = analyze_dir(dir.path());
    if (!second->script.empty()) o.fail(name + ": second run has " + std::to_string(second->script.edits.size()) + " edits");
  };
  for (const auto& [name, path] : fixture_corpora()) {
    TempDir dir;
    dir.copy_from(path);
    check(name, dir);
  }
  TempDir synth;
  materialize_synthetic(synth);
  check("synthetic", synth);
  if (first_edits == 0) o.fail("no corpus produced edits");
  if (o.pass) o.detail = std::to_string(corpora) + " corpora, " + std::to_string(first_edits) + " first-run edits";
  if (files_checked == 0) trees.fail("no edited files");
  if (trees.pass) trees.detail = std::to_string(files_checked) + " edited files";
  return o;
}

Outcome recursion_oracle() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20240611);
  std::size_t disagreements = 0;
  for (int g = 0; g < 1000; ++g) {
    std::size_t n = 1 + rng() % 200;
    double density = std::uniform_real_distribution<double>(0.0, 3.0)(rng) / static_cast<double>(n);
    std::bernoulli_distribution edge(std::min(1.0, density));
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (edge(rng)) edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
    graphs::CallGraph cg = graphs::CallGraph::from_edges(n, edges);
    std::vector<bool> expected = cyclic_nodes(n, edges);
    for (std::size_t v = 0; v < n; ++v) {
      if (graphs::is_recursive(cg, static_cast<int>(v)) != expected[v]) ++disagreements;
    }
  }
  double t = seconds_since(start);
  if (disagreements != 0) o.fail(std::to_string(disagreements) + " disagreements");
  if (t >= 10.0) o.fail("took " + std::to_string(t) + " s");
  if (o.pass) o.detail = "1000 graphs, " + std::to_string(t) + " s";
  return o;
}

Outcome effects_oracle() {
  Outcome o;
  fs::path suite = oracles_dir() / "effects";
  std::map<std::string, bool> dynamic = dynamic_effects(suite);
  auto a = analyze_dir(suite);
  int matches = 0;
  int unsound = 0;
  int total = 0;
  for (const auto& [name, changed] : dynamic) {
    const auto* r = find_record(*a, "suite." + name);
    if (r == nullptr) {
      o.fail("no record for " + name);
      continue;
    }
    ++total;
    bool se = r->verdict.se;
    if (se == changed) ++matches;
    if (!se && changed) ++unsound;
  }
  if (total != 30) o.fail(std::to_string(total) + " functions observed");
  if (unsound != 0) o.fail(std::to_string(unsound) + " unsound");
  if (matches < 24) o.fail(std::to_string(matches) + "/30 match");
  if (o.pass) o.detail = "0 unsound, " + std::to_string(matches) + "/30 match";
  return o;
}

Outcome witness_validity() {
  Outcome o;
  std::size_t fixtures = 0;
  std::size_t witnesses = 0;
  for (const auto& e : fs::directory_iterator(fixtures_dir() / "flows")) {
    ++fixtures;
    auto a = analyze_dir(e.path());
    bool target_has = false;
    for (const auto& f : a->plan.functions) {
      for (const auto& ev : f.evidence.tensors) {
        if (!ev.kinds.count(inference::EvidenceKind::Dataflow)) continue;
        if (ev.witnesses.empty()) o.fail(f.fq_name + ":" + ev.name + " has no witness");
        int node = a->graphs.dataflow.param_node(f.function, ev.param);
        for (const auto& w : ev.witnesses) {
          ++witnesses;
          std::string problem = check_witness(a->graphs.dataflow, a->db, node, w);
          if (!problem.empty()) o.fail(e.path().filename().string() + " " + f.fq_name + ": " + problem);
        }
        if (f.fq_name == "main.target") target_has = true;
      }
    }
    if (!target_has) o.fail(e.path().filename().string() + ": target has no dataflow evidence");
  }
  if (fixtures != 15) o.fail(std::to_string(fixtures) + " flow fixtures");
  if (o.pass) o.detail = std::to_string(fixtures) + " fixtures, " + std::to_string(witnesses) + " witnesses";
  return o;
}

Outcome throughput() {
  Outcome o;
  auto files = synthetic_corpus(2000, 11);
  std::size_t lines = 0;
  for (const auto& [p, text] : files) lines += static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  auto start = std::chrono::steady_clock::now();
  auto a = analyze_sources(files);
  std::string diff = transform::render_diff(a->script, a->project);
  double t = seconds_since(start);
  if (lines < 2000) o.fail("corpus has only " + std::to_string(lines) + " lines");
  if (t >= 24.0) o.fail("took " + std::to_string(t) + " s");
  if (o.pass) o.detail = std::to_string(lines) + " lines, " + std::to_string(t) + " s";
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.fail(std::string("exception: ") + e.what());
    return o;
  }
}

}  // namespace

int main() {
  Outcome trees;
  std::vector<std::pair<int, Outcome>> results;
  results.emplace_back(1, guarded(golden_programs));
  results.emplace_back(2, guarded(truth_table));
  results.emplace_back(3, guarded([&] { return idempotence_and_trees(trees); }));
  results.emplace_back(4, guarded(recursion_oracle));
  results.emplace_back(5, guarded(effects_oracle));
  results.emplace_back(6, guarded(witness_validity));
  results.emplace_back(7, trees);
  results.emplace_back(8, guarded(throughput));
  static const char* names[] = {"",
                                "golden programs",
                                "precondition truth table",
                                "idempotence",
                                "recursion oracle",
                                "side-effect dynamic oracle",
                                "tensor witness validity",
                                "AST preservation",
                                "throughput"};
  int failed = 0;
  for (const auto& [n, o] : results) {
    std::printf("CRITERION %d %s: %s (%s)\n", n, names[n], o.pass ? "PASS" : "FAIL", o.detail.c_str());
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
