#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <boost/container/flat_set.hpp>

#include "hybridize/frontend/program.h"
#include "hybridize/summaries/summary_db.h"

namespace hybridize::graphs {

/// Program variables of the dataflow graph.
enum class NodeKind : std::uint8_t {
  Value,    // result of instruction `index` in `function`
  Local,    // local `name` of `function`
  Global,   // module-level `name` of `module`
  Param,    // parameter `index` of `function`
  Return,   // return value of `function`
  Field,    // field `name` of abstract object `object`; "[]" holds elements
  Literal,  // source of constant operands of one literal kind
  Aux,      // helper variable `index` of call site (`function`, `name`)
};

const char* to_string(NodeKind kind);

struct Node {
  NodeKind kind = NodeKind::Value;
  int function = -1;
  int index = -1;
  int object = -1;
  std::string name;
  std::string module;
};

enum class ObjectKind : std::uint8_t {
  Function,        // project function `function`
  BoundMethod,     // `function` bound to `receiver` (object) or `receiver_node`
  Class,           // project class `cls`
  Instance,        // instance of `cls` allocated at `site`
  Container,       // list/tuple/set/dict/generator allocated at `site`
  Literal,         // immutable scalar of kind `literal`
  ExternalName,    // library value `api`, optionally read off `receiver`
  External,        // result of calling library `api` at `site`
  Tensor,          // fresh tensor from a generator call
  Dataset,         // fresh dataset from a generator call
  DatasetElement,  // element of dataset `receiver`
  Module,          // project module `module`
  Super,           // `super()` proxy for class `cls` and `receiver_node`
  Opaque,          // unknown value from a dynamic construct
};

const char* to_string(ObjectKind kind);

struct AbstractObject {
  ObjectKind kind = ObjectKind::Opaque;
  int function = -1;   // target function for Function/BoundMethod
  int allocator = -1;  // function whose execution allocates the object
  int site = -1;       // allocating instruction in `allocator`
  int cls = -1;
  int receiver = -1;
  int receiver_node = -1;
  int alloc_node = -1;  // node at which the object first appears
  frontend::ContainerKind container = frontend::ContainerKind::List;
  frontend::LiteralKind literal = frontend::LiteralKind::None;
  std::string api;
  std::string module;
  bool tensor_like = false;
  std::uint32_t line = 0;
};

enum class EdgeKind : std::uint8_t {
  Copy,     // every object flows
  Derived,  // only tensors and dataset elements flow (indexing, iteration)
};

/// `to ≺ from`: a potential dataflow from `from` into `to`.
struct FlowEdge {
  int from = -1;
  int to = -1;
  EdgeKind kind = EdgeKind::Copy;
};

/// Argument-to-parameter binding at a resolved call site.
struct Binding {
  int caller = -1;
  int instruction = -1;
  int callee = -1;
  int param = -1;
  int arg_node = -1;
};

/// Call of a summarized or unknown library API.
struct ExternalCall {
  int function = -1;
  int instruction = -1;
  std::string api;
  int receiver_object = -1;
  int receiver_node = -1;
};

using ObjectSet = boost::container::flat_set<int>;

class DataflowGraph {
 public:
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t object_count() const { return objects_.size(); }
  const Node& node(int n) const { return nodes_[static_cast<std::size_t>(n)]; }
  const AbstractObject& object(int o) const { return objects_[static_cast<std::size_t>(o)]; }
  const ObjectSet& pts(int n) const { return pts_[static_cast<std::size_t>(n)]; }

  const std::vector<FlowEdge>& edges() const { return edges_; }
  /// Indices into edges() of edges entering / leaving `n`.
  const std::vector<int>& in_edges(int n) const { return in_[static_cast<std::size_t>(n)]; }
  const std::vector<int>& out_edges(int n) const { return out_[static_cast<std::size_t>(n)]; }
  bool has_edge(int from, int to, EdgeKind kind) const;

  const std::vector<Binding>& bindings() const { return bindings_; }
  const std::vector<ExternalCall>& external_calls() const { return external_calls_; }

  /// Node lookups; -1 when the node was never created.
  int find(NodeKind kind, int function, int index, const std::string& name = {},
           const std::string& module = {}, int object = -1) const;
  int value_node(int function, int instruction) const { return find(NodeKind::Value, function, instruction); }
  int param_node(int function, int param) const { return find(NodeKind::Param, function, param); }
  int local_node(int function, const std::string& name) const { return find(NodeKind::Local, function, -1, name); }
  int global_node(const std::string& module, const std::string& name) const {
    return find(NodeKind::Global, -1, -1, name, module);
  }
  int field_node(int object, const std::string& name) const { return find(NodeKind::Field, -1, -1, name, {}, object); }
  int return_node(int function) const { return find(NodeKind::Return, function, -1); }
  int literal_node(frontend::LiteralKind kind) const {
    return find(NodeKind::Literal, -1, static_cast<int>(kind));
  }
  /// Node holding `operand` of an instruction of `function`.
  int operand_node(int function, const frontend::Operand& operand) const;

  /// Fields of `object` that have nodes.
  std::vector<int> fields_of(int object) const;

  /// Readable names, e.g. `pkg.mod.f:x` or `value pkg/mod.py:12:5`.
  std::string describe_node(int n) const;
  std::string describe_object(int o) const;
  /// Source location (file, line) where a node or object originates.
  std::pair<std::string, std::uint32_t> node_location(int n) const;

  const frontend::Program* program() const { return program_; }

 private:
  friend class GraphBuilder;
  const frontend::Program* program_ = nullptr;
  using Key = std::tuple<NodeKind, int, int, std::string, std::string, int>;

  std::vector<Node> nodes_;
  std::map<Key, int> node_index_;
  std::vector<AbstractObject> objects_;
  std::vector<ObjectSet> pts_;
  std::vector<FlowEdge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
  std::map<int, std::vector<int>> fields_;
  std::vector<Binding> bindings_;
  std::vector<ExternalCall> external_calls_;
};

}  // namespace hybridize::graphs
