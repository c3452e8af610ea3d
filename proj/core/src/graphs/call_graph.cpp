#include "hybridize/graphs/call_graph.h"

#include <algorithm>

namespace hybridize::graphs {

CallGraph::CallGraph(std::size_t function_count)
    : function_count_(function_count), successors_(function_count) {}

CallGraph CallGraph::from_edges(std::size_t node_count, const std::vector<std::pair<int, int>>& edges) {
  CallGraph cg(node_count);
  for (const auto& [from, to] : edges) cg.add_edge(from, to, -1);
  return cg;
}

int CallGraph::add_root(std::string label) {
  int node = static_cast<int>(successors_.size());
  successors_.emplace_back();
  roots_.push_back(node);
  root_labels_.push_back(std::move(label));
  return node;
}

const std::string& CallGraph::root_label(int node) const {
  return root_labels_[static_cast<std::size_t>(node) - function_count_];
}

bool CallGraph::add_edge(int caller, int callee, int site) {
  CallEdge edge{caller, callee, site};
  if (std::find(edges_.begin(), edges_.end(), edge) != edges_.end()) return false;
  edges_.push_back(edge);
  std::vector<int>& succ = successors_[static_cast<std::size_t>(caller)];
  if (std::find(succ.begin(), succ.end(), callee) == succ.end()) succ.push_back(callee);
  return true;
}

std::vector<bool> CallGraph::reachable() const {
  std::vector<bool> seen(size(), false);
  std::vector<int> stack(roots_.begin(), roots_.end());
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(n)]) continue;
    seen[static_cast<std::size_t>(n)] = true;
    for (int s : successors(n)) {
      if (!seen[static_cast<std::size_t>(s)]) stack.push_back(s);
    }
  }
  return seen;
}

bool is_recursive(const CallGraph& cg, int node) {
  // Depth-first search from the callees of `node`, looking for `node`; the
  // seen list keeps cycles elsewhere in the graph from looping forever.
  std::vector<bool> seen(cg.size(), false);
  std::vector<int> stack(cg.successors(node).begin(), cg.successors(node).end());
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (n == node) return true;
    if (seen[static_cast<std::size_t>(n)]) continue;
    seen[static_cast<std::size_t>(n)] = true;
    for (int s : cg.successors(n)) {
      if (!seen[static_cast<std::size_t>(s)]) stack.push_back(s);
    }
  }
  return false;
}

bool is_reachable(const CallGraph& cg, int node) {
  if (node < 0 || static_cast<std::size_t>(node) >= cg.size()) return false;
  return cg.reachable()[static_cast<std::size_t>(node)];
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace hybridize::graphs
