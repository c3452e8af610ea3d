#pragma once

#include <vector>

#include "hybridize/frontend/program.h"
#include "hybridize/graphs/call_graph.h"
#include "hybridize/graphs/dataflow_graph.h"
#include "hybridize/graphs/entry_points.h"
#include "hybridize/summaries/summary_db.h"

namespace hybridize::graphs {

struct Graphs {
  CallGraph call_graph;
  DataflowGraph dataflow;
  /// Call graph node of each entry point, parallel to the entry list.
  std::vector<int> entry_roots;
};

/// Context-insensitive, flow-insensitive points-to analysis over the
/// functions reachable from `entries`, building both graphs in one fixpoint.
Graphs build_graphs(const frontend::Program& program, const std::vector<EntryPoint>& entries,
                    const summaries::SummaryDb& db);

}  // namespace hybridize::graphs
