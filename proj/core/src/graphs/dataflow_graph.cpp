#include "hybridize/graphs/dataflow_graph.h"

namespace hybridize::graphs {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Value: return "value";
    case NodeKind::Local: return "local";
    case NodeKind::Global: return "global";
    case NodeKind::Param: return "param";
    case NodeKind::Return: return "return";
    case NodeKind::Field: return "field";
    case NodeKind::Literal: return "literal";
    case NodeKind::Aux: return "aux";
  }
  return "?";
}

const char* to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::Function: return "function";
    case ObjectKind::BoundMethod: return "bound_method";
    case ObjectKind::Class: return "class";
    case ObjectKind::Instance: return "instance";
    case ObjectKind::Container: return "container";
    case ObjectKind::Literal: return "literal";
    case ObjectKind::ExternalName: return "external_name";
    case ObjectKind::External: return "external";
    case ObjectKind::Tensor: return "tensor";
    case ObjectKind::Dataset: return "dataset";
    case ObjectKind::DatasetElement: return "dataset_element";
    case ObjectKind::Module: return "module";
    case ObjectKind::Super: return "super";
    case ObjectKind::Opaque: return "opaque";
  }
  return "?";
}

bool DataflowGraph::has_edge(int from, int to, EdgeKind kind) const {
  if (from < 0 || static_cast<std::size_t>(from) >= out_.size()) return false;
  for (int e : out_[static_cast<std::size_t>(from)]) {
    const FlowEdge& edge = edges_[static_cast<std::size_t>(e)];
    if (edge.to == to && edge.kind == kind) return true;
  }
  return false;
}

int DataflowGraph::find(NodeKind kind, int function, int index, const std::string& name, const std::string& module,
                        int object) const {
  auto it = node_index_.find(Key{kind, function, index, name, module, object});
  return it == node_index_.end() ? -1 : it->second;
}

int DataflowGraph::operand_node(int function, const frontend::Operand& operand) const {
  if (operand.is_value()) return value_node(function, operand.value);
  if (operand.is_constant()) return literal_node(operand.literal);
  return -1;
}

std::vector<int> DataflowGraph::fields_of(int object) const {
  auto it = fields_.find(object);
  return it == fields_.end() ? std::vector<int>{} : it->second;
}

namespace {

std::string function_name(const frontend::Program* program, int fn) {
  if (program == nullptr || fn < 0) return "?";
  return program->functions[static_cast<std::size_t>(fn)].fq_name.str();
}

}  // namespace

std::string DataflowGraph::describe_node(int n) const {
  const Node& node = nodes_[static_cast<std::size_t>(n)];
  switch (node.kind) {
    case NodeKind::Value: {
      auto [file, line] = node_location(n);
      return "value " + file + ":" + std::to_string(line);
    }
    case NodeKind::Local:
      return function_name(program_, node.function) + ":" + node.name;
    case NodeKind::Global:
      return node.module + "." + node.name;
    case NodeKind::Param: {
      std::string fn = function_name(program_, node.function);
      if (program_ != nullptr) {
        const auto& params = program_->functions[static_cast<std::size_t>(node.function)].params;
        if (static_cast<std::size_t>(node.index) < params.size()) {
          return fn + ":" + params[static_cast<std::size_t>(node.index)].name;
        }
      }
      return fn + ":#" + std::to_string(node.index);
    }
    case NodeKind::Return:
      return function_name(program_, node.function) + ":<return>";
    case NodeKind::Field:
      return describe_object(node.object) + "." + node.name;
    case NodeKind::Literal:
      return std::string("<") + frontend::to_string(static_cast<frontend::LiteralKind>(node.index)) + ">";
    case NodeKind::Aux:
      return function_name(program_, node.function) + ":<aux " + node.name + "/" + std::to_string(node.index) + ">";
  }
  return "?";
}

std::string DataflowGraph::describe_object(int o) const {
  const AbstractObject& obj = objects_[static_cast<std::size_t>(o)];
  std::string out = to_string(obj.kind);
  switch (obj.kind) {
    case ObjectKind::Function:
    case ObjectKind::BoundMethod:
      return out + " " + function_name(program_, obj.function);
    case ObjectKind::Class:
    case ObjectKind::Instance:
    case ObjectKind::Super:
      if (program_ != nullptr && obj.cls >= 0) out += " " + program_->classes[static_cast<std::size_t>(obj.cls)].fq_name;
      break;
    case ObjectKind::Container:
      out += std::string(" ") + frontend::to_string(obj.container);
      break;
    case ObjectKind::Literal:
      return std::string("literal ") + frontend::to_string(obj.literal);
    case ObjectKind::ExternalName:
    case ObjectKind::External:
    case ObjectKind::Tensor:
    case ObjectKind::Dataset:
      out += " " + obj.api;
      break;
    case ObjectKind::Module:
      return out + " " + obj.module;
    default:
      break;
  }
  if (program_ != nullptr && obj.allocator >= 0) {
    const auto* unit = program_->functions[static_cast<std::size_t>(obj.allocator)].unit;
    if (unit != nullptr) out += " @" + unit->path + ":" + std::to_string(obj.line);
  }
  return out;
}

std::pair<std::string, std::uint32_t> DataflowGraph::node_location(int n) const {
  const Node& node = nodes_[static_cast<std::size_t>(n)];
  if (program_ == nullptr) return {{}, 0};
  if (node.kind == NodeKind::Field) {
    const AbstractObject& obj = objects_[static_cast<std::size_t>(node.object)];
    if (obj.allocator >= 0) {
      const auto& fn = program_->functions[static_cast<std::size_t>(obj.allocator)];
      return {fn.unit != nullptr ? fn.unit->path : std::string(), obj.line};
    }
    return {{}, 0};
  }
  if (node.kind == NodeKind::Global) {
    const frontend::SourceUnit* unit = program_->project->find_module(node.module);
    return {unit != nullptr ? unit->path : std::string(), 0};
  }
  if (node.function < 0) return {{}, 0};
  const auto& fn = program_->functions[static_cast<std::size_t>(node.function)];
  std::string file = fn.unit != nullptr ? fn.unit->path : std::string();
  if (node.kind == NodeKind::Value && static_cast<std::size_t>(node.index) < fn.ir.instructions.size()) {
    return {file, fn.ir.instructions[static_cast<std::size_t>(node.index)].line};
  }
  return {file, fn.line};
}

}  // namespace hybridize::graphs
