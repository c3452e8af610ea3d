#include "hybridize/graphs/builder.h"

#include <deque>
#include <set>

namespace hybridize::graphs {

using frontend::ClassInfo;
using frontend::ContainerKind;
using frontend::FunctionUnit;
using frontend::InstrKind;
using frontend::Instruction;
using frontend::LiteralKind;
using frontend::NameScope;
using frontend::Operand;
using frontend::ParamKind;

namespace {

const std::set<std::string, std::less<>> kDatasetPreserving = {
    "batch", "shuffle", "map", "repeat", "prefetch", "take", "skip", "cache", "filter", "padded_batch", "unbatch",
};

std::string last_segment(const std::string& api) {
  std::size_t dot = api.rfind('.');
  return dot == std::string::npos ? api : api.substr(dot + 1);
}

}  // namespace

class GraphBuilder {
 public:
  GraphBuilder(const frontend::Program& program, const summaries::SummaryDb& db, Graphs& out)
      : prog_(program), db_(db), g_(out.dataflow), cg_(out.call_graph), roots_(out.entry_roots) {
    g_.program_ = &program;
    cg_ = CallGraph(program.functions.size());
    processed_.assign(program.functions.size(), false);
  }

  void run(const std::vector<EntryPoint>& entries) {
    imports_root_ = -1;
    for (const EntryPoint& e : entries) {
      int root = cg_.add_root(std::string(to_string(e.kind)) + ":" + e.target);
      roots_.push_back(root);
      auto init = prog_.module_inits.find(e.module);
      if (init != prog_.module_inits.end()) root_call(root, init->second);
      if (e.kind == EntryKind::TestFunction && e.function >= 0) {
        int receiver = -1;
        if (e.test_class >= 0) {
          receiver = intern({ObjectKind::Instance, -1, -1, -(e.function + 2), e.test_class});
          for (const char* fixture : {"setUp", "setup_method"}) {
            int m = find_method(e.test_class, fixture);
            if (m >= 0) bind_root_receiver(root, m, receiver);
          }
        }
        if (receiver >= 0) {
          bind_root_receiver(root, e.function, receiver);
        } else {
          root_call(root, e.function);
        }
      }
    }
    solve();
    collect_unresolved();
  }

 private:
  enum class CKind : std::uint8_t {
    Call,
    AttrRead,
    AttrWrite,
    SubscriptRead,
    SubscriptWrite,
    ElementsOf,
    FieldOf,
    Decorate,
    Callback,
    BindElement,
    SuperClass,
  };

  struct Constraint {
    CKind kind;
    int fn = -1;
    int instr = -1;
    int target = -1;  // destination node where relevant
    std::string name;
  };

  struct ObjKey {
    ObjectKind kind;
    int function = -1;
    int allocator = -1;
    int site = -1;
    int cls = -1;
    int receiver = -1;
    int receiver_node = -1;
    int variant = 0;
    std::string api;
    std::string module;

    auto tie() const {
      return std::tie(kind, function, allocator, site, cls, receiver, receiver_node, variant, api, module);
    }
    bool operator<(const ObjKey& o) const { return tie() < o.tie(); }
  };

  // ---- graph primitives ----------------------------------------------------

  int node(NodeKind kind, int function, int index, const std::string& name = {}, const std::string& module = {},
           int object = -1) {
    DataflowGraph::Key key{kind, function, index, name, module, object};
    auto it = g_.node_index_.find(key);
    if (it != g_.node_index_.end()) return it->second;
    int id = static_cast<int>(g_.nodes_.size());
    g_.nodes_.push_back(Node{kind, function, index, object, name, module});
    g_.node_index_.emplace(std::move(key), id);
    g_.pts_.emplace_back();
    g_.in_.emplace_back();
    g_.out_.emplace_back();
    delta_.emplace_back();
    queued_.push_back(false);
    constraints_.emplace_back();
    if (kind == NodeKind::Field) g_.fields_[object].push_back(id);
    return id;
  }

  int value(int fn, int instr) { return node(NodeKind::Value, fn, instr); }
  int field(int object, const std::string& name) { return node(NodeKind::Field, -1, -1, name, {}, object); }

  int literal_node(LiteralKind kind) {
    int n = node(NodeKind::Literal, -1, static_cast<int>(kind));
    if (g_.pts_[static_cast<std::size_t>(n)].empty()) {
      ObjKey key{ObjectKind::Literal};
      key.variant = static_cast<int>(kind);
      int o = intern(key);
      g_.objects_[static_cast<std::size_t>(o)].literal = kind;
      add_object(n, o);
    }
    return n;
  }

  int operand_node(int fn, const Operand& op) {
    if (op.is_value()) return value(fn, op.value);
    if (op.is_constant()) return literal_node(op.literal);
    return -1;
  }

  int intern(const ObjKey& key, int alloc_node = -1) {
    auto it = object_index_.find(key);
    if (it != object_index_.end()) return it->second;
    int id = static_cast<int>(g_.objects_.size());
    AbstractObject o;
    o.kind = key.kind;
    o.function = key.function;
    o.allocator = key.allocator;
    o.site = key.site;
    o.cls = key.cls;
    o.receiver = key.receiver;
    o.receiver_node = key.receiver_node;
    o.api = key.api;
    o.module = key.module;
    o.alloc_node = alloc_node;
    if (key.allocator >= 0 && key.site >= 0) {
      const auto& ins = prog_.functions[static_cast<std::size_t>(key.allocator)].ir.instructions;
      if (static_cast<std::size_t>(key.site) < ins.size()) o.line = ins[static_cast<std::size_t>(key.site)].line;
    }
    g_.objects_.push_back(std::move(o));
    object_index_.emplace(key, id);
    return id;
  }

  void add_object(int n, int o) {
    if (n < 0 || o < 0) return;
    if (!g_.pts_[static_cast<std::size_t>(n)].insert(o).second) return;
    AbstractObject& obj = g_.objects_[static_cast<std::size_t>(o)];
    if (obj.alloc_node < 0) obj.alloc_node = n;
    delta_[static_cast<std::size_t>(n)].push_back(o);
    if (!queued_[static_cast<std::size_t>(n)]) {
      queued_[static_cast<std::size_t>(n)] = true;
      worklist_.push_back(n);
    }
  }

  static bool passes(EdgeKind kind, const AbstractObject& o) {
    return kind == EdgeKind::Copy || o.kind == ObjectKind::Tensor || o.kind == ObjectKind::DatasetElement;
  }

  void add_edge(int from, int to, EdgeKind kind = EdgeKind::Copy) {
    if (from < 0 || to < 0 || from == to) return;
    if (!edge_set_.insert({from, to, static_cast<int>(kind)}).second) return;
    int id = static_cast<int>(g_.edges_.size());
    g_.edges_.push_back(FlowEdge{from, to, kind});
    g_.out_[static_cast<std::size_t>(from)].push_back(id);
    g_.in_[static_cast<std::size_t>(to)].push_back(id);
    std::vector<int> existing(g_.pts_[static_cast<std::size_t>(from)].begin(),
                              g_.pts_[static_cast<std::size_t>(from)].end());
    for (int o : existing) {
      if (passes(kind, g_.objects_[static_cast<std::size_t>(o)])) add_object(to, o);
    }
  }

  void add_constraint(int n, Constraint c) {
    if (n < 0) return;
    constraints_[static_cast<std::size_t>(n)].push_back(c);
    std::vector<int> existing(g_.pts_[static_cast<std::size_t>(n)].begin(),
                              g_.pts_[static_cast<std::size_t>(n)].end());
    for (int o : existing) apply(n, c, o);
  }

  void solve() {
    while (!worklist_.empty()) {
      int n = worklist_.front();
      worklist_.pop_front();
      queued_[static_cast<std::size_t>(n)] = false;
      std::vector<int> delta = std::move(delta_[static_cast<std::size_t>(n)]);
      delta_[static_cast<std::size_t>(n)].clear();
      std::vector<int> outs = g_.out_[static_cast<std::size_t>(n)];
      for (int e : outs) {
        FlowEdge edge = g_.edges_[static_cast<std::size_t>(e)];
        for (int o : delta) {
          if (passes(edge.kind, g_.objects_[static_cast<std::size_t>(o)])) add_object(edge.to, o);
        }
      }
      for (std::size_t c = 0; c < constraints_[static_cast<std::size_t>(n)].size(); ++c) {
        Constraint constraint = constraints_[static_cast<std::size_t>(n)][c];
        for (int o : delta) apply(n, constraint, o);
      }
    }
  }

  // ---- objects -------------------------------------------------------------

  int function_object(int fn) {
    const FunctionUnit& f = prog_.functions[static_cast<std::size_t>(fn)];
    return intern({ObjectKind::Function, fn, f.parent});
  }

  int bound_method(int fn, int receiver, int receiver_node) {
    return intern({ObjectKind::BoundMethod, fn, -1, -1, -1, receiver, receiver_node});
  }

  int class_object(int cls) {
    return intern({ObjectKind::Class, -1, prog_.classes[static_cast<std::size_t>(cls)].parent, -1, cls});
  }

  int external_name(const std::string& api, int receiver, int receiver_node = -1) {
    ObjKey key{ObjectKind::ExternalName};
    key.receiver = receiver;
    key.receiver_node = receiver_node;
    key.api = api;
    return intern(key);
  }

  int opaque() { return intern({ObjectKind::Opaque}); }

  int container(ContainerKind kind, int fn, int site, int variant, int alloc_node) {
    ObjKey key{ObjectKind::Container, -1, fn, site};
    key.variant = variant;
    int o = intern(key, alloc_node);
    g_.objects_[static_cast<std::size_t>(o)].container = kind;
    return o;
  }

  int literal_object(LiteralKind kind) {
    int n = literal_node(kind);
    return *g_.pts_[static_cast<std::size_t>(n)].begin();
  }

  /// Field node holding the elements of dataset `ds`.
  int dataset_elements(int ds) {
    int n = field(ds, "[]");
    ObjKey key{ObjectKind::DatasetElement};
    key.receiver = ds;
    key.allocator = g_.objects_[static_cast<std::size_t>(ds)].allocator;
    int e = intern(key, n);
    add_object(n, e);
    return n;
  }

  /// Library type name used to look up methods of library-made values.
  std::string type_api(const AbstractObject& o) const {
    switch (o.kind) {
      case ObjectKind::Tensor:
        return o.tensor_like ? o.api : "tensorflow.Tensor";
      case ObjectKind::Dataset:
        return "tensorflow.data.Dataset";
      case ObjectKind::DatasetElement:
        return "tensorflow.Tensor";
      case ObjectKind::External:
        return o.api;
      case ObjectKind::Container:
        switch (o.container) {
          case ContainerKind::List: return "list";
          case ContainerKind::Tuple: return "tuple";
          case ContainerKind::Set: return "set";
          case ContainerKind::Dict: return "dict";
          case ContainerKind::Generator: return "generator";
        }
        return "list";
      case ObjectKind::Literal:
        switch (o.literal) {
          case LiteralKind::Number: return "int";
          case LiteralKind::String: return "str";
          case LiteralKind::Bytes: return "bytes";
          case LiteralKind::Boolean: return "bool";
          case LiteralKind::None: return "NoneType";
          case LiteralKind::Ellipsis: return "ellipsis";
        }
        return "object";
      default:
        return "object";
    }
  }

  // ---- reachability ----------------------------------------------------------

  void root_call(int root, int fn) {
    cg_.add_edge(root, fn, -1);
    reach(fn);
  }

  void bind_root_receiver(int root, int fn, int receiver) {
    root_call(root, fn);
    if (!prog_.functions[static_cast<std::size_t>(fn)].params.empty()) add_object(node(NodeKind::Param, fn, 0), receiver);
  }

  void module_dependency(int fn, int instr, int init) {
    const FunctionUnit& f = prog_.functions[static_cast<std::size_t>(fn)];
    if (f.kind == frontend::FunctionKind::ModuleInit) {
      cg_.add_edge(fn, init, instr);
    } else {
      // Imports inside a function run the module once, outside the caller's
      // own behavior; route them through a synthetic root.
      if (imports_root_ < 0) imports_root_ = cg_.add_root("<imports>");
      cg_.add_edge(imports_root_, init, -1);
    }
    reach(init);
  }

  void reach(int fn) {
    if (processed_[static_cast<std::size_t>(fn)]) return;
    processed_[static_cast<std::size_t>(fn)] = true;
    const FunctionUnit& f = prog_.functions[static_cast<std::size_t>(fn)];
    for (std::size_t p = 0; p < f.params.size(); ++p) {
      int param = node(NodeKind::Param, fn, static_cast<int>(p));
      int local = node(NodeKind::Local, fn, -1, f.params[p].name);
      add_edge(param, local);
      if (f.params[p].kind == ParamKind::VarArgs || f.params[p].kind == ParamKind::VarKeywords) {
        ContainerKind kind = f.params[p].kind == ParamKind::VarArgs ? ContainerKind::Tuple : ContainerKind::Dict;
        add_object(param, container(kind, fn, -1, static_cast<int>(p), param));
      }
    }
    for (std::size_t i = 0; i < f.ir.instructions.size(); ++i) lower_instruction(fn, static_cast<int>(i));
  }

  // ---- instructions --------------------------------------------------------

  void lower_instruction(int fn, int i) {
    const Instruction& ins = prog_.functions[static_cast<std::size_t>(fn)].ir.instructions[static_cast<std::size_t>(i)];
    int result = ins.defines ? value(fn, i) : -1;
    auto operand = [&](std::size_t k) { return k < ins.operands.size() ? operand_node(fn, ins.operands[k]) : -1; };
    switch (ins.kind) {
      case InstrKind::LoadName:
        if (ins.scope == NameScope::External) {
          add_object(result, external_name(ins.name, -1));
        } else {
          add_edge(variable(ins), result);
        }
        break;
      case InstrKind::StoreName:
        add_edge(operand(0), variable(ins));
        break;
      case InstrKind::Call:
        if (ins.opaque) add_object(result, opaque());
        add_constraint(operand(0), {CKind::Call, fn, i});
        break;
      case InstrKind::AttrRead:
        add_constraint(operand(0), {CKind::AttrRead, fn, i, result, ins.name});
        break;
      case InstrKind::AttrWrite:
        if (!ins.is_delete) add_constraint(operand(0), {CKind::AttrWrite, fn, i, operand(1), ins.name});
        break;
      case InstrKind::SubscriptRead:
        add_constraint(operand(0), {CKind::SubscriptRead, fn, i, result});
        break;
      case InstrKind::SubscriptWrite:
        if (!ins.is_delete) add_constraint(operand(0), {CKind::SubscriptWrite, fn, i});
        break;
      case InstrKind::ContainerBuild:
        build_container(fn, i, ins, result);
        break;
      case InstrKind::Iterate:
        add_constraint(operand(0), {CKind::ElementsOf, fn, i, result});
        break;
      case InstrKind::Return:
        add_edge(operand(0), node(NodeKind::Return, fn, -1));
        break;
      case InstrKind::MakeFunction:
        add_object(result, function_object(ins.target));
        break;
      case InstrKind::MakeClass:
        add_object(result, class_object(ins.target));
        break;
      case InstrKind::Decorate:
        // Unknown decorators are identity; project decorators are also
        // called with the decorated value.
        add_edge(operand(1), result);
        add_constraint(operand(0), {CKind::Decorate, fn, i, result});
        break;
      case InstrKind::Import:
        lower_import(fn, i, ins.name, result);
        break;
      case InstrKind::Operator:
        lower_operator(fn, ins, result);
        break;
      case InstrKind::Opaque:
        if (result >= 0) add_object(result, opaque());
        break;
    }
  }

  int variable(const Instruction& ins) {
    if (ins.scope == NameScope::Local) return node(NodeKind::Local, ins.owner, -1, ins.name);
    return node(NodeKind::Global, -1, -1, ins.name, ins.module);
  }

  void build_container(int fn, int i, const Instruction& ins, int result) {
    int c = container(ins.container, fn, i, 0, result);
    add_object(result, c);
    if (ins.container == ContainerKind::Dict) {
      for (std::size_t k = 0; k + 1 < ins.operands.size(); k += 2) {
        add_edge(operand_node(fn, ins.operands[k]), field(c, "{keys}"));
        add_edge(operand_node(fn, ins.operands[k + 1]), field(c, "[]"));
      }
      return;
    }
    for (std::size_t k = 0; k < ins.operands.size(); ++k) {
      int v = operand_node(fn, ins.operands[k]);
      add_edge(v, field(c, "[]"));
      if (ins.container == ContainerKind::Tuple) add_edge(v, field(c, "[" + std::to_string(k) + "]"));
    }
  }

  void lower_operator(int fn, const Instruction& ins, int result) {
    if (ins.name == "compare" || ins.name == "not") {
      add_edge(literal_node(LiteralKind::Boolean), result);
      return;
    }
    bool any_value = false;
    for (const Operand& op : ins.operands) {
      if (op.is_value()) {
        any_value = true;
        add_edge(value(fn, op.value), result);
      }
    }
    if (any_value) return;
    for (const Operand& op : ins.operands) {
      if (op.is_constant()) {
        add_edge(literal_node(op.literal), result);
        break;
      }
    }
  }

  void lower_import(int fn, int i, const std::string& target, int result) {
    if (prog_.project->find_module(target) != nullptr) {
      add_object(result, intern({ObjectKind::Module, -1, -1, -1, -1, -1, -1, 0, {}, target}));
      module_dependency(fn, i, prog_.module_inits.at(target));
      return;
    }
    std::size_t dot = target.rfind('.');
    if (dot != std::string::npos) {
      std::string module = target.substr(0, dot);
      if (prog_.project->find_module(module) != nullptr) {
        add_edge(node(NodeKind::Global, -1, -1, target.substr(dot + 1), module), result);
        module_dependency(fn, i, prog_.module_inits.at(module));
        return;
      }
    }
    add_object(result, external_name(summaries::canonical_api(target), -1));
  }

  // ---- constraint application ----------------------------------------------

  const Instruction& instruction(int fn, int i) const {
    return prog_.functions[static_cast<std::size_t>(fn)].ir.instructions[static_cast<std::size_t>(i)];
  }

  void apply(int base, const Constraint& c, int o) {
    switch (c.kind) {
      case CKind::Call: on_call(c.fn, c.instr, o); break;
      case CKind::AttrRead: on_attr_read(base, c.fn, c.instr, c.name, o, c.target); break;
      case CKind::AttrWrite: on_attr_write(c.name, o, c.target); break;
      case CKind::SubscriptRead: on_subscript_read(base, c.fn, c.instr, o, c.target); break;
      case CKind::SubscriptWrite: on_subscript_write(c.fn, c.instr, o); break;
      case CKind::ElementsOf: on_elements(base, o, c.target); break;
      case CKind::FieldOf: on_field_of(o, c.name, c.target); break;
      case CKind::Decorate: on_decorate(c.fn, c.instr, o); break;
      case CKind::Callback: on_callback(c.fn, c.instr, o); break;
      case CKind::BindElement: on_bind_element(c.fn, c.instr, o, c.target); break;
      case CKind::SuperClass: on_super_class(c.fn, c.instr, o, c.target); break;
    }
  }

  int find_method(int cls, const std::string& name) const {
    for (int c : prog_.linearize(cls)) {
      const ClassInfo& info = prog_.classes[static_cast<std::size_t>(c)];
      auto it = info.methods.find(name);
      if (it != info.methods.end()) return it->second;
    }
    return -1;
  }

  void on_call(int fn, int i, int o) {
    AbstractObject obj = g_.objects_[static_cast<std::size_t>(o)];
    int result = value(fn, i);
    switch (obj.kind) {
      case ObjectKind::Function:
        call_function(fn, i, obj.function, -1, -1, false);
        break;
      case ObjectKind::BoundMethod:
        call_function(fn, i, obj.function, obj.receiver, obj.receiver_node, true);
        break;
      case ObjectKind::Class: {
        int inst = intern({ObjectKind::Instance, -1, fn, i, obj.cls}, result);
        add_object(result, inst);
        int init = find_method(obj.cls, "__init__");
        if (init >= 0) {
          call_function(fn, i, init, inst, -1, true, false);
        } else {
          std::vector<std::string> bases = prog_.all_external_bases(obj.cls);
          if (!bases.empty()) record_external(fn, i, bases.front() + ".__init__", inst, -1);
        }
        break;
      }
      case ObjectKind::Instance: {
        int m = find_method(obj.cls, "__call__");
        if (m < 0) m = find_method(obj.cls, "call");
        if (m >= 0) {
          call_function(fn, i, m, o, -1, true);
          break;
        }
        std::vector<std::string> bases = prog_.all_external_bases(obj.cls);
        if (!bases.empty()) {
          external_call(fn, i, bases.front() + ".__call__", o);
        } else {
          unresolved_marks_.insert({fn, i});
        }
        break;
      }
      case ObjectKind::ExternalName:
        external_call(fn, i, obj.api, obj.receiver, obj.receiver_node);
        break;
      case ObjectKind::External:
      case ObjectKind::Tensor:
      case ObjectKind::Dataset:
      case ObjectKind::DatasetElement:
        external_call(fn, i, type_api(obj) + ".__call__", o);
        break;
      case ObjectKind::Opaque:
        add_object(result, opaque());
        break;
      default:
        break;
    }
  }

  /// Binds the arguments of call-like instruction `i` (operands laid out as
  /// {callee, positional..., keyword...}) to the parameters of `callee`.
  void call_function(int fn, int i, int callee, int receiver, int receiver_node, bool bound, bool returns = true) {
    cg_.add_edge(fn, callee, i);
    reach(callee);
    const Instruction& ins = instruction(fn, i);
    const FunctionUnit& f = prog_.functions[static_cast<std::size_t>(callee)];
    if (returns && ins.defines) add_edge(node(NodeKind::Return, callee, -1), value(fn, i));
    std::size_t next = 0;
    if (bound && !f.params.empty()) {
      int p0 = node(NodeKind::Param, callee, 0);
      if (receiver >= 0) add_object(p0, receiver);
      if (receiver_node >= 0) add_edge(receiver_node, p0);
      next = 1;
    }
    std::size_t keyword_count = ins.kind == InstrKind::Call ? ins.keywords.size() : 0;
    std::size_t positional_end = ins.operands.size() - keyword_count;
    if (ins.kind == InstrKind::SubscriptWrite) positional_end = ins.operands.size();
    int varargs = -1;
    int varkw = -1;
    for (std::size_t p = 0; p < f.params.size(); ++p) {
      if (f.params[p].kind == ParamKind::VarArgs) varargs = static_cast<int>(p);
      if (f.params[p].kind == ParamKind::VarKeywords) varkw = static_cast<int>(p);
    }
    for (std::size_t k = 1; k < positional_end; ++k) {
      int arg = operand_node(fn, ins.operands[k]);
      if (next < f.params.size() &&
          (f.params[next].kind == ParamKind::PositionalOnly || f.params[next].kind == ParamKind::Normal)) {
        bind(fn, i, callee, static_cast<int>(next), arg);
        ++next;
      } else if (varargs >= 0) {
        spill(callee, varargs, arg);
      }
    }
    for (std::size_t k = 0; k < keyword_count; ++k) {
      int arg = operand_node(fn, ins.operands[positional_end + k]);
      const std::string& name = ins.keywords[k];
      int target = -1;
      for (std::size_t p = 0; p < f.params.size(); ++p) {
        if (f.params[p].name == name &&
            (f.params[p].kind == ParamKind::Normal || f.params[p].kind == ParamKind::KeywordOnly)) {
          target = static_cast<int>(p);
        }
      }
      if (target >= 0) {
        bind(fn, i, callee, target, arg);
      } else if (varkw >= 0) {
        spill(callee, varkw, arg);
      }
    }
  }

  void bind(int fn, int i, int callee, int param, int arg) {
    if (arg < 0) return;
    add_edge(arg, node(NodeKind::Param, callee, param));
    if (binding_set_.insert({fn, i, callee, param, arg}).second) {
      g_.bindings_.push_back(Binding{fn, i, callee, param, arg});
    }
  }

  void spill(int callee, int param, int arg) {
    int p = node(NodeKind::Param, callee, param);
    for (int o : g_.pts_[static_cast<std::size_t>(p)]) {
      if (g_.objects_[static_cast<std::size_t>(o)].kind == ObjectKind::Container) add_edge(arg, field(o, "[]"));
    }
  }

  void record_external(int fn, int i, const std::string& api, int receiver_object, int receiver_node) {
    if (external_set_.insert({fn, i, api, receiver_object, receiver_node}).second) {
      g_.external_calls_.push_back(ExternalCall{fn, i, api, receiver_object, receiver_node});
    }
  }

  std::vector<int> positional_args(int fn, int i) {
    const Instruction& ins = instruction(fn, i);
    std::vector<int> args;
    for (std::size_t k = 1; k + ins.keywords.size() < ins.operands.size(); ++k) {
      args.push_back(operand_node(fn, ins.operands[k]));
    }
    return args;
  }

  void watch_callbacks(int fn, int i) {
    if (!callback_sites_.insert({fn, i}).second) return;
    const Instruction& ins = instruction(fn, i);
    for (std::size_t k = 1; k < ins.operands.size(); ++k) {
      add_constraint(operand_node(fn, ins.operands[k]), {CKind::Callback, fn, i});
    }
  }

  void external_call(int fn, int i, const std::string& api, int receiver, int base = -1) {
    int result = value(fn, i);
    int receiver_node = -1;
    if (api == "builtins.setattr" || api == "builtins.delattr") {
      std::vector<int> args = positional_args(fn, i);
      if (!args.empty()) receiver_node = args[0];
    }
    record_external(fn, i, api, receiver, receiver_node);
    watch_callbacks(fn, i);
    if (api.rfind("builtins.", 0) == 0 && receiver < 0) {
      builtin_call(fn, i, api.substr(9), result);
      return;
    }
    if (receiver >= 0) {
      AbstractObject recv = g_.objects_[static_cast<std::size_t>(receiver)];
      std::string method = last_segment(api);
      if (recv.kind == ObjectKind::Container) {
        container_method(fn, i, method, receiver, recv, result);
        return;
      }
      if (recv.kind == ObjectKind::Dataset && kDatasetPreserving.count(method)) {
        // Keep a dataflow edge so witnesses can follow the derived dataset.
        if (base >= 0) {
          add_edge(base, result);
        } else {
          add_object(result, receiver);
        }
        if (method == "map" || method == "filter") {
          int elements = dataset_elements(receiver);
          const Instruction& ins = instruction(fn, i);
          for (std::size_t k = 1; k < ins.operands.size(); ++k) {
            add_constraint(operand_node(fn, ins.operands[k]), {CKind::BindElement, fn, i, elements});
          }
        }
        return;
      }
      if (recv.kind == ObjectKind::Literal) {
        add_edge(literal_node(recv.literal == LiteralKind::String ? LiteralKind::String : LiteralKind::Number),
                 result);
        return;
      }
    }
    if (const summaries::GeneratorSpec* spec = db_.generator(api)) {
      ObjKey key{spec->kind == summaries::GeneratorKind::Tensor ? ObjectKind::Tensor : ObjectKind::Dataset, -1, fn, i};
      key.api = spec->api;
      int o = intern(key, result);
      g_.objects_[static_cast<std::size_t>(o)].tensor_like = spec->tensor_like;
      add_object(result, o);
      return;
    }
    ObjKey key{ObjectKind::External, -1, fn, i};
    key.api = api;
    add_object(result, intern(key, result));
  }

  int aux(int fn, int i, int k) { return node(NodeKind::Aux, fn, k, std::to_string(i)); }

  void elements_into(int source, int target) {
    if (source >= 0) add_constraint(source, {CKind::ElementsOf, -1, -1, target});
  }

  void builtin_call(int fn, int i, const std::string& name, int result) {
    std::vector<int> args = positional_args(fn, i);
    auto arg = [&](std::size_t k) { return k < args.size() ? args[k] : -1; };
    auto make = [&](ContainerKind kind, int variant) {
      int c = container(kind, fn, i, variant, result);
      return c;
    };
    if (name == "range") {
      int c = make(ContainerKind::List, 0);
      add_object(result, c);
      add_edge(literal_node(LiteralKind::Number), field(c, "[]"));
    } else if (name == "enumerate" || name == "zip") {
      int c = make(ContainerKind::List, 0);
      int t = make(ContainerKind::Tuple, 1);
      add_object(result, c);
      add_object(field(c, "[]"), t);
      if (name == "enumerate") {
        add_edge(literal_node(LiteralKind::Number), field(t, "[0]"));
        add_edge(literal_node(LiteralKind::Number), field(t, "[]"));
        int e = aux(fn, i, 0);
        elements_into(arg(0), e);
        add_edge(e, field(t, "[1]"));
        add_edge(e, field(t, "[]"));
      } else {
        for (std::size_t k = 0; k < args.size(); ++k) {
          int e = aux(fn, i, static_cast<int>(k));
          elements_into(args[k], e);
          add_edge(e, field(t, "[" + std::to_string(k) + "]"));
          add_edge(e, field(t, "[]"));
        }
      }
    } else if (name == "list" || name == "tuple" || name == "set" || name == "frozenset" || name == "sorted" ||
               name == "reversed" || name == "filter") {
      ContainerKind kind = name == "tuple" ? ContainerKind::Tuple
                           : (name == "set" || name == "frozenset") ? ContainerKind::Set
                                                                    : ContainerKind::List;
      int c = make(kind, 0);
      add_object(result, c);
      int e = aux(fn, i, 0);
      elements_into(arg(name == "filter" ? 1 : 0), e);
      add_edge(e, field(c, "[]"));
    } else if (name == "dict") {
      int c = make(ContainerKind::Dict, 0);
      add_object(result, c);
      if (arg(0) >= 0) {
        add_constraint(arg(0), {CKind::FieldOf, -1, -1, field(c, "[]"), "[]"});
        add_constraint(arg(0), {CKind::FieldOf, -1, -1, field(c, "{keys}"), "{keys}"});
      }
      const Instruction& ins = instruction(fn, i);
      for (std::size_t k = ins.operands.size() - ins.keywords.size(); k < ins.operands.size(); ++k) {
        add_edge(operand_node(fn, ins.operands[k]), field(c, "[]"));
        add_edge(literal_node(LiteralKind::String), field(c, "{keys}"));
      }
    } else if (name == "map") {
      add_object(result, make(ContainerKind::List, 0));
    } else if (name == "iter") {
      add_edge(arg(0), result);
    } else if (name == "next") {
      elements_into(arg(0), result);
      add_edge(arg(1), result);
    } else if (name == "len" || name == "hash" || name == "id" || name == "ord" || name == "int" ||
               name == "float" || name == "complex" || name == "divmod") {
      add_edge(literal_node(LiteralKind::Number), result);
    } else if (name == "abs" || name == "round" || name == "pow") {
      for (int a : args) add_edge(a, result);
    } else if (name == "sum" || name == "min" || name == "max") {
      if (args.size() == 1) {
        elements_into(args[0], result);
      } else {
        for (int a : args) add_edge(a, result);
      }
      if (name == "sum") add_edge(literal_node(LiteralKind::Number), result);
    } else if (name == "str" || name == "repr" || name == "format" || name == "chr" || name == "ascii" ||
               name == "bin" || name == "hex" || name == "oct" || name == "input") {
      add_edge(literal_node(LiteralKind::String), result);
    } else if (name == "bool" || name == "isinstance" || name == "issubclass" || name == "callable" ||
               name == "hasattr" || name == "all" || name == "any") {
      add_edge(literal_node(LiteralKind::Boolean), result);
    } else if (name == "getattr") {
      add_object(result, opaque());
      add_edge(arg(2), result);
    } else if (name == "super") {
      if (args.size() >= 2) {
        add_constraint(args[0], {CKind::SuperClass, fn, i, args[1]});
      } else {
        lexical_super(fn, result);
      }
    } else {
      ObjKey key{ObjectKind::External, -1, fn, i};
      key.api = "builtins." + name;
      add_object(result, intern(key, result));
    }
  }

  void lexical_super(int fn, int result) {
    for (int f = fn; f >= 0; f = prog_.functions[static_cast<std::size_t>(f)].parent) {
      const FunctionUnit& unit = prog_.functions[static_cast<std::size_t>(f)];
      if (unit.kind == frontend::FunctionKind::ModuleInit) return;
      if (unit.enclosing_class >= 0) {
        int recv = unit.receiver_index();
        int recv_node = recv >= 0 ? node(NodeKind::Param, f, recv) : -1;
        add_object(result, intern({ObjectKind::Super, -1, -1, -1, unit.enclosing_class, -1, recv_node}));
        return;
      }
    }
  }

  void container_method(int fn, int i, const std::string& method, int c, const AbstractObject& recv, int result) {
    std::vector<int> args = positional_args(fn, i);
    auto arg = [&](std::size_t k) { return k < args.size() ? args[k] : -1; };
    bool is_dict = recv.container == ContainerKind::Dict;
    if (method == "append" || method == "add") {
      add_edge(arg(0), field(c, "[]"));
    } else if (method == "insert") {
      add_edge(arg(1), field(c, "[]"));
    } else if (method == "extend" || method == "update") {
      if (is_dict) {
        if (arg(0) >= 0) {
          add_constraint(arg(0), {CKind::FieldOf, -1, -1, field(c, "[]"), "[]"});
          add_constraint(arg(0), {CKind::FieldOf, -1, -1, field(c, "{keys}"), "{keys}"});
        }
        const Instruction& ins = instruction(fn, i);
        for (std::size_t k = ins.operands.size() - ins.keywords.size(); k < ins.operands.size(); ++k) {
          add_edge(operand_node(fn, ins.operands[k]), field(c, "[]"));
        }
      } else {
        int e = aux(fn, i, 0);
        elements_into(arg(0), e);
        add_edge(e, field(c, "[]"));
      }
    } else if (method == "setdefault") {
      add_edge(arg(1), field(c, "[]"));
      add_edge(field(c, "[]"), result);
    } else if (method == "pop" || method == "get" || method == "popitem" || method == "__getitem__") {
      add_edge(field(c, "[]"), result);
      if (is_dict) add_edge(arg(1), result);
    } else if (method == "copy") {
      add_object(result, c);
    } else if (method == "keys" || method == "values") {
      int out = container(ContainerKind::List, fn, i, 0, result);
      add_object(result, out);
      add_edge(field(c, method == "keys" ? "{keys}" : "[]"), field(out, "[]"));
    } else if (method == "items") {
      int out = container(ContainerKind::List, fn, i, 0, result);
      int t = container(ContainerKind::Tuple, fn, i, 1, result);
      add_object(result, out);
      add_object(field(out, "[]"), t);
      add_edge(field(c, "{keys}"), field(t, "[0]"));
      add_edge(field(c, "{keys}"), field(t, "[]"));
      add_edge(field(c, "[]"), field(t, "[1]"));
      add_edge(field(c, "[]"), field(t, "[]"));
    } else if (method == "index" || method == "count") {
      add_edge(literal_node(LiteralKind::Number), result);
    }
  }

  void on_attr_read(int base, int fn, int i, const std::string& name, int o, int result) {
    AbstractObject obj = g_.objects_[static_cast<std::size_t>(o)];
    switch (obj.kind) {
      case ObjectKind::Instance:
        add_edge(field(o, name), result);
        class_attribute(fn, i, obj.cls, name, o, -1, result, true, false);
        break;
      case ObjectKind::Class:
        add_edge(field(o, name), result);
        class_attribute(fn, i, obj.cls, name, o, -1, result, false, false);
        break;
      case ObjectKind::Super:
        class_attribute(fn, i, obj.cls, name, -1, obj.receiver_node, result, true, true);
        break;
      case ObjectKind::Module: {
        add_edge(node(NodeKind::Global, -1, -1, name, obj.module), result);
        std::string sub = obj.module + "." + name;
        if (prog_.project->find_module(sub) != nullptr) {
          add_object(result, intern({ObjectKind::Module, -1, -1, -1, -1, -1, -1, 0, {}, sub}));
        }
        break;
      }
      case ObjectKind::ExternalName:
        add_object(result, external_name(obj.api + "." + name, -1));
        break;
      case ObjectKind::External:
        add_edge(field(o, name), result);
        add_object(result, external_name(type_api(obj) + "." + name, o));
        break;
      case ObjectKind::Dataset:
        add_object(result, external_name(type_api(obj) + "." + name, o, base));
        break;
      case ObjectKind::Tensor:
      case ObjectKind::DatasetElement:
      case ObjectKind::Container:
      case ObjectKind::Literal:
        add_object(result, external_name(type_api(obj) + "." + name, o));
        break;
      case ObjectKind::Opaque:
        add_object(result, opaque());
        break;
      default:
        break;
    }
  }

  /// Looks `name` up along the hierarchy of `cls`. `receiver`/`receiver_node`
  /// bind methods; `skip_self` starts the search after `cls` (super()).
  void class_attribute(int fn, int i, int cls, const std::string& name, int receiver, int receiver_node, int result,
                       bool via_instance, bool skip_self) {
    std::vector<int> order = prog_.linearize(cls);
    for (std::size_t k = skip_self ? 1 : 0; k < order.size(); ++k) {
      const ClassInfo& info = prog_.classes[static_cast<std::size_t>(order[k])];
      auto m = info.methods.find(name);
      if (m != info.methods.end()) {
        const FunctionUnit& f = prog_.functions[static_cast<std::size_t>(m->second)];
        if (f.is_staticmethod) {
          add_object(result, function_object(f.id));
        } else if (f.is_classmethod) {
          add_object(result, bound_method(f.id, class_object(cls), -1));
        } else if (f.is_property && via_instance) {
          call_function(fn, i, f.id, receiver, receiver_node, true);
        } else if (via_instance) {
          add_object(result, bound_method(f.id, receiver, receiver_node));
        } else {
          add_object(result, function_object(f.id));
        }
        return;
      }
      if (info.attributes.count(name)) {
        add_edge(field(class_object(info.id), name), result);
        return;
      }
    }
    // Names written somewhere in the project are taken to be instance fields
    // rather than members inherited from a library base.
    std::vector<std::string> bases = prog_.all_external_bases(cls);
    if (!bases.empty() && !prog_.written_attributes.count(name)) {
      add_object(result, external_name(bases.front() + "." + name, receiver));
    } else if (prog_.hierarchy_open(cls) && !prog_.written_attributes.count(name)) {
      add_object(result, opaque());
    }
  }

  void on_attr_write(const std::string& name, int o, int v) {
    const AbstractObject& obj = g_.objects_[static_cast<std::size_t>(o)];
    switch (obj.kind) {
      case ObjectKind::Module:
        add_edge(v, node(NodeKind::Global, -1, -1, name, obj.module));
        break;
      case ObjectKind::Instance:
      case ObjectKind::Class:
      case ObjectKind::External:
      case ObjectKind::Container:
      case ObjectKind::Function:
        add_edge(v, field(o, name));
        break;
      default:
        break;
    }
  }

  void on_subscript_read(int base, int fn, int i, int o, int result) {
    AbstractObject obj = g_.objects_[static_cast<std::size_t>(o)];
    int element = instruction(fn, i).element;
    switch (obj.kind) {
      case ObjectKind::Container:
        if (obj.container == ContainerKind::Tuple && element >= 0) {
          add_edge(field(o, "[" + std::to_string(element) + "]"), result);
        } else {
          add_edge(field(o, "[]"), result);
        }
        break;
      case ObjectKind::Tensor:
      case ObjectKind::DatasetElement:
        add_edge(base, result, EdgeKind::Derived);
        break;
      case ObjectKind::Instance: {
        add_edge(field(o, "[]"), result);
        int m = find_method(obj.cls, "__getitem__");
        if (m >= 0) call_function(fn, i, m, o, -1, true);
        break;
      }
      case ObjectKind::External:
      case ObjectKind::ExternalName:
        add_edge(field(o, "[]"), result);
        break;
      case ObjectKind::Literal:
        if (obj.literal == LiteralKind::String || obj.literal == LiteralKind::Bytes) {
          add_edge(literal_node(obj.literal), result);
        }
        break;
      case ObjectKind::Opaque:
        add_object(result, opaque());
        break;
      default:
        break;
    }
  }

  void on_subscript_write(int fn, int i, int o) {
    const Instruction& ins = instruction(fn, i);
    AbstractObject obj = g_.objects_[static_cast<std::size_t>(o)];
    int index = operand_node(fn, ins.operands[1]);
    int v = ins.operands.size() > 2 ? operand_node(fn, ins.operands[2]) : -1;
    switch (obj.kind) {
      case ObjectKind::Container:
        add_edge(v, field(o, "[]"));
        if (obj.container == ContainerKind::Dict) add_edge(index, field(o, "{keys}"));
        break;
      case ObjectKind::Instance: {
        add_edge(v, field(o, "[]"));
        int m = find_method(obj.cls, "__setitem__");
        if (m >= 0) call_function(fn, i, m, o, -1, true, false);
        break;
      }
      case ObjectKind::External:
      case ObjectKind::ExternalName:
        add_edge(v, field(o, "[]"));
        break;
      default:
        break;
    }
  }

  void on_elements(int base, int o, int target) {
    AbstractObject obj = g_.objects_[static_cast<std::size_t>(o)];
    switch (obj.kind) {
      case ObjectKind::Container:
        add_edge(field(o, obj.container == ContainerKind::Dict ? "{keys}" : "[]"), target);
        break;
      case ObjectKind::Tensor:
      case ObjectKind::DatasetElement:
        add_edge(base, target, EdgeKind::Derived);
        break;
      case ObjectKind::Dataset:
        add_edge(dataset_elements(o), target);
        break;
      case ObjectKind::Instance:
      case ObjectKind::External:
      case ObjectKind::ExternalName:
        add_edge(field(o, "[]"), target);
        break;
      case ObjectKind::Literal:
        if (obj.literal == LiteralKind::String) add_edge(literal_node(LiteralKind::String), target);
        break;
      case ObjectKind::Opaque:
        add_object(target, opaque());
        break;
      default:
        break;
    }
  }

  void on_field_of(int o, const std::string& name, int target) {
    switch (g_.objects_[static_cast<std::size_t>(o)].kind) {
      case ObjectKind::Container:
      case ObjectKind::Instance:
      case ObjectKind::External:
        add_edge(field(o, name), target);
        break;
      default:
        break;
    }
  }

  void on_decorate(int fn, int i, int o) {
    const AbstractObject& obj = g_.objects_[static_cast<std::size_t>(o)];
    if (obj.kind == ObjectKind::Function) {
      call_function(fn, i, obj.function, -1, -1, false);
    } else if (obj.kind == ObjectKind::BoundMethod) {
      call_function(fn, i, obj.function, obj.receiver, obj.receiver_node, true);
    }
  }

  void on_callback(int fn, int i, int o) {
    const AbstractObject& obj = g_.objects_[static_cast<std::size_t>(o)];
    if (obj.kind == ObjectKind::Function || obj.kind == ObjectKind::BoundMethod) {
      int target = obj.function;
      int receiver = obj.receiver;
      int receiver_node = obj.receiver_node;
      bool bound = obj.kind == ObjectKind::BoundMethod;
      cg_.add_edge(fn, target, i);
      reach(target);
      if (bound && !prog_.functions[static_cast<std::size_t>(target)].params.empty()) {
        int p0 = node(NodeKind::Param, target, 0);
        add_object(p0, receiver);
        if (receiver_node >= 0) add_edge(receiver_node, p0);
      }
    } else if (obj.kind == ObjectKind::Instance) {
      int m = find_method(obj.cls, "__call__");
      if (m < 0) m = find_method(obj.cls, "call");
      if (m >= 0) {
        cg_.add_edge(fn, m, i);
        reach(m);
        add_object(node(NodeKind::Param, m, 0), o);
      }
    }
  }

  void on_bind_element(int fn, int i, int o, int elements) {
    (void)fn;
    (void)i;
    const AbstractObject& obj = g_.objects_[static_cast<std::size_t>(o)];
    if (obj.kind != ObjectKind::Function && obj.kind != ObjectKind::BoundMethod) return;
    const FunctionUnit& f = prog_.functions[static_cast<std::size_t>(obj.function)];
    for (std::size_t p = 0; p < f.params.size(); ++p) {
      if (f.params[p].is_receiver && obj.kind == ObjectKind::BoundMethod) continue;
      add_edge(elements, node(NodeKind::Param, f.id, static_cast<int>(p)));
      break;
    }
  }

  void on_super_class(int fn, int i, int o, int receiver_node) {
    const AbstractObject& obj = g_.objects_[static_cast<std::size_t>(o)];
    if (obj.kind != ObjectKind::Class) return;
    add_object(value(fn, i), intern({ObjectKind::Super, -1, -1, -1, obj.cls, -1, receiver_node}));
  }

  // ---- unresolved sites ----------------------------------------------------

  void collect_unresolved() {
    for (std::size_t fn = 0; fn < prog_.functions.size(); ++fn) {
      if (!processed_[fn]) continue;
      const auto& instructions = prog_.functions[fn].ir.instructions;
      for (std::size_t i = 0; i < instructions.size(); ++i) {
        const Instruction& ins = instructions[i];
        if (ins.kind != InstrKind::Call) continue;
        int f = static_cast<int>(fn);
        int n = static_cast<int>(i);
        std::string reason;
        int callee = g_.operand_node(f, ins.operands[0]);
        const ObjectSet empty;
        const ObjectSet& pts = callee >= 0 ? g_.pts(callee) : empty;
        bool has_opaque = std::any_of(pts.begin(), pts.end(), [&](int o) {
          return g_.object(o).kind == ObjectKind::Opaque;
        });
        if (ins.opaque) {
          reason = "dynamic_call";
        } else if (pts.empty()) {
          reason = "no_callee";
        } else if (has_opaque || unresolved_marks_.count({f, n})) {
          reason = "opaque_callee";
        }
        if (!reason.empty()) cg_.add_unresolved({f, n, ins.line, ins.column, reason});
      }
    }
  }

  const frontend::Program& prog_;
  const summaries::SummaryDb& db_;
  DataflowGraph& g_;
  CallGraph& cg_;
  std::vector<int>& roots_;
  int imports_root_ = -1;

  std::map<ObjKey, int> object_index_;
  std::vector<std::vector<int>> delta_;
  std::vector<bool> queued_;
  std::deque<int> worklist_;
  std::vector<std::vector<Constraint>> constraints_;
  std::set<std::tuple<int, int, int>> edge_set_;
  std::set<std::tuple<int, int, int, int, int>> binding_set_;
  std::set<std::tuple<int, int, std::string, int, int>> external_set_;
  std::set<std::pair<int, int>> callback_sites_;
  std::set<std::pair<int, int>> unresolved_marks_;
  std::vector<bool> processed_;
};

Graphs build_graphs(const frontend::Program& program, const std::vector<EntryPoint>& entries,
                    const summaries::SummaryDb& db) {
  Graphs graphs;
  GraphBuilder(program, db, graphs).run(entries);
  return graphs;
}

}  // namespace hybridize::graphs
