#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hybridize/graphs/dataflow_graph.h"
#include "hybridize/inference/evidence.h"
#include "hybridize/summaries/summary_db.h"
#include "hybridize/transform/edits.h"

namespace hybridize::testing {

/// Expected outcome of one precondition row, written out by hand.
struct TableRow {
  bool hybrid;
  bool tens;
  bool lit;
  bool se;
  bool rec;
  const char* rule;  // nullptr when no rule passes
  std::set<std::string> failures;
  std::set<std::string> warnings;
};

/// All 32 combinations of (exe, tens, lit, se, rec).
const std::vector<TableRow>& precondition_table();

/// Nodes lying on a cycle, from the boolean transitive closure of the graph.
std::vector<bool> cyclic_nodes(std::size_t n, const std::vector<std::pair<int, int>>& edges);

/// Empty when `w` is a valid flow path from a generator allocation to
/// `param_node`; otherwise a description of the first broken step.
std::string check_witness(const graphs::DataflowGraph& g, const summaries::SummaryDb& db, int param_node,
                          const inference::TensorWitness& w);

/// Empty when `after` differs from `before` only by the edits in `edits`
/// (decorators of the named functions and one `import tensorflow as tf`).
std::string tree_diff(const std::string& before, const std::string& after,
                      const std::vector<transform::Edit>& edits, const std::string& module);

/// Output of the system `diff -u` for the two texts.
std::string reference_diff(const std::string& path, const std::string& before, const std::string& after);

/// Function name -> whether running it changed state visible to its caller,
/// as observed by the snapshot oracle script.
std::map<std::string, bool> dynamic_effects(const std::filesystem::path& suite_dir);

/// Deterministic synthetic project of roughly `lines` lines.
std::vector<std::pair<std::string, std::string>> synthetic_corpus(std::size_t lines, std::uint32_t seed);

}  // namespace hybridize::testing
