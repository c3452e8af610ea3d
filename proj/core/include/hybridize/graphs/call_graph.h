#pragma once

#include <string>
#include <vector>

namespace hybridize::graphs {

struct CallEdge {
  int caller = -1;
  int callee = -1;
  int site = -1;  // instruction index in the caller; -1 for synthetic edges

  bool operator==(const CallEdge&) const = default;
};

struct UnresolvedSite {
  int function = -1;
  int instruction = -1;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::string reason;  // no_callee | opaque_callee | dynamic_call
};

/// Nodes `0 .. function_count-1` stand for functions; synthetic roots follow.
class CallGraph {
 public:
  CallGraph() = default;
  explicit CallGraph(std::size_t function_count);
  /// Graph over `node_count` plain nodes with the given (from, to) edges and
  /// no roots.
  static CallGraph from_edges(std::size_t node_count, const std::vector<std::pair<int, int>>& edges);

  int add_root(std::string label);
  /// Returns false when the (caller, callee, site) edge already exists.
  bool add_edge(int caller, int callee, int site);
  void add_unresolved(UnresolvedSite site) { unresolved_.push_back(std::move(site)); }

  std::size_t size() const { return successors_.size(); }
  std::size_t function_count() const { return function_count_; }
  bool is_root(int node) const { return node >= static_cast<int>(function_count_); }
  const std::string& root_label(int node) const;
  const std::vector<int>& roots() const { return roots_; }
  const std::vector<int>& successors(int node) const { return successors_[static_cast<std::size_t>(node)]; }
  const std::vector<CallEdge>& edges() const { return edges_; }
  const std::vector<UnresolvedSite>& unresolved_sites() const { return unresolved_; }

  /// Nodes reachable from any root (roots included).
  std::vector<bool> reachable() const;

  /// DOT rendering; `label(node)` names function nodes.
  template <class Label>
  std::string to_dot(Label label) const;

 private:
  std::size_t function_count_ = 0;
  std::vector<std::vector<int>> successors_;
  std::vector<CallEdge> edges_;
  std::vector<int> roots_;
  std::vector<std::string> root_labels_;
  std::vector<UnresolvedSite> unresolved_;
};

/// True iff a call path of length >= 1 leads from `node` back to itself.
bool is_recursive(const CallGraph& cg, int node);

/// True iff `node` is reachable from an entry root.
bool is_reachable(const CallGraph& cg, int node);

std::string dot_escape(const std::string& s);

template <class Label>
std::string CallGraph::to_dot(Label label) const {
  std::string out = "digraph callgraph {\n";
  for (std::size_t n = 0; n < size(); ++n) {
    int node = static_cast<int>(n);
    std::string name = is_root(node) ? root_label(node) : std::string(label(node));
    if (!is_root(node) && successors_[n].empty()) {
      bool called = false;
      for (const CallEdge& e : edges_) called = called || e.callee == node;
      if (!called) continue;
    }
    out += "  n" + std::to_string(n) + " [label=\"" + dot_escape(name) + "\"";
    if (is_root(node)) out += ", shape=box";
    out += "];\n";
  }
  for (const CallEdge& e : edges_) {
    out += "  n" + std::to_string(e.caller) + " -> n" + std::to_string(e.callee) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace hybridize::graphs
