#include <algorithm>
#include <deque>
#include <map>

#include "hybridize/inference/evidence.h"

namespace hybridize::inference {

using graphs::AbstractObject;
using graphs::DataflowGraph;
using graphs::EdgeKind;
using graphs::FlowEdge;
using graphs::ObjectKind;

const char* to_string(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::Dataflow: return "dataflow";
    case EvidenceKind::Hint: return "hint";
    case EvidenceKind::Speculative: return "speculative";
  }
  return "?";
}

const char* to_string(TensorTag tag) {
  switch (tag) {
    case TensorTag::Tensor: return "tensor";
    case TensorTag::TensorLike: return "tensor_like";
    case TensorTag::DatasetElement: return "dataset_element";
  }
  return "?";
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Alloc: return "alloc";
    case StepKind::Copy: return "copy";
    case StepKind::ElementOf: return "element_of";
    case StepKind::Derived: return "derived";
  }
  return "?";
}

namespace {

constexpr int kMaxContainerDepth = 3;
constexpr std::size_t kMaxWitnesses = 8;

bool is_generator(const AbstractObject& o) { return o.kind == ObjectKind::Tensor || o.kind == ObjectKind::Dataset; }

bool interesting(const AbstractObject& o) {
  return is_generator(o) || o.kind == ObjectKind::DatasetElement || o.kind == ObjectKind::Container;
}

bool tensor_valued(const AbstractObject& o) {
  return o.kind == ObjectKind::Tensor || o.kind == ObjectKind::DatasetElement;
}

TensorTag tag_of(const AbstractObject& generator) {
  if (generator.kind == ObjectKind::Dataset) return TensorTag::DatasetElement;
  return generator.tensor_like ? TensorTag::TensorLike : TensorTag::Tensor;
}

struct State {
  int node;
  int object;
  auto operator<=>(const State&) const = default;
};

struct Visit {
  State next;          // neighbour towards the parameter
  StepKind kind;       // kind of the step entering `next` from this state
  int depth;
};

/// Backward breadth-first search from a parameter node over (node, object)
/// states; each goal state is a generator object at its allocation node.
std::vector<TensorWitness> search_witnesses(const DataflowGraph& g, int param) {
  std::map<State, Visit> seen;
  std::deque<State> queue;
  for (int o : g.pts(param)) {
    if (!interesting(g.object(o))) continue;
    State s{param, o};
    seen.emplace(s, Visit{{-1, -1}, StepKind::Copy, 0});
    queue.push_back(s);
  }
  std::vector<TensorWitness> out;
  std::set<int> found;
  auto offer = [&](State from, State to, StepKind kind, int depth) {
    if (seen.count(from)) return;
    seen.emplace(from, Visit{to, kind, depth});
    queue.push_back(from);
  };
  while (!queue.empty() && out.size() < kMaxWitnesses) {
    State cur = queue.front();
    queue.pop_front();
    const AbstractObject& obj = g.object(cur.object);
    int depth = seen.at(cur).depth;
    if (is_generator(obj) && obj.alloc_node == cur.node && !found.count(cur.object)) {
      found.insert(cur.object);
      TensorWitness w;
      w.generator = cur.object;
      w.api = obj.api;
      w.location = Location{g.node_location(cur.node).first, obj.line};
      w.path.push_back({cur.node, cur.object, StepKind::Alloc});
      for (State s = cur; seen.at(s).next.node >= 0;) {
        const Visit& v = seen.at(s);
        w.path.push_back({v.next.node, v.next.object, v.kind});
        s = v.next;
      }
      out.push_back(std::move(w));
      continue;
    }
    for (int e : g.in_edges(cur.node)) {
      const FlowEdge& edge = g.edges()[static_cast<std::size_t>(e)];
      if (edge.kind == EdgeKind::Derived && !tensor_valued(obj)) continue;
      if (!g.pts(edge.from).contains(cur.object)) continue;
      offer({edge.from, cur.object}, cur, edge.kind == EdgeKind::Derived ? StepKind::Derived : StepKind::Copy, depth);
    }
    if (obj.kind == ObjectKind::Container && depth < kMaxContainerDepth) {
      for (int f : g.fields_of(cur.object)) {
        for (int y : g.pts(f)) {
          if (interesting(g.object(y))) offer({f, y}, cur, StepKind::ElementOf, depth + 1);
        }
      }
    }
    if (obj.kind == ObjectKind::DatasetElement && obj.alloc_node == cur.node && obj.receiver >= 0) {
      const AbstractObject& ds = g.object(obj.receiver);
      if (ds.alloc_node >= 0) offer({ds.alloc_node, obj.receiver}, cur, StepKind::Derived, depth);
    }
  }
  return out;
}

}  // namespace

std::vector<TensorEvidence> infer_tensor_params(const frontend::FunctionUnit& fn, const graphs::Graphs& graphs) {
  std::vector<TensorEvidence> out;
  const DataflowGraph& g = graphs.dataflow;
  for (std::size_t p = 0; p < fn.params.size(); ++p) {
    if (fn.params[p].is_receiver) continue;
    int node = g.param_node(fn.id, static_cast<int>(p));
    if (node < 0) continue;
    std::vector<TensorWitness> witnesses = search_witnesses(g, node);
    if (witnesses.empty()) continue;
    TensorEvidence ev;
    ev.param = static_cast<int>(p);
    ev.name = fn.params[p].name;
    ev.kinds.insert(EvidenceKind::Dataflow);
    for (const TensorWitness& w : witnesses) ev.tags.insert(tag_of(g.object(w.generator)));
    ev.witnesses = std::move(witnesses);
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace hybridize::inference
