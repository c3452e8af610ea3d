#include "hybridize/frontend/ir.h"

namespace hybridize::frontend {

const char* to_string(InstrKind kind) {
  switch (kind) {
    case InstrKind::LoadName: return "load";
    case InstrKind::StoreName: return "store";
    case InstrKind::Call: return "call";
    case InstrKind::AttrRead: return "getattr";
    case InstrKind::AttrWrite: return "setattr";
    case InstrKind::SubscriptRead: return "getitem";
    case InstrKind::SubscriptWrite: return "setitem";
    case InstrKind::ContainerBuild: return "build";
    case InstrKind::Iterate: return "iter";
    case InstrKind::Return: return "return";
    case InstrKind::MakeFunction: return "function";
    case InstrKind::MakeClass: return "class";
    case InstrKind::Decorate: return "decorate";
    case InstrKind::Import: return "import";
    case InstrKind::Operator: return "op";
    case InstrKind::Opaque: return "opaque";
  }
  return "?";
}

const char* to_string(ContainerKind kind) {
  switch (kind) {
    case ContainerKind::List: return "list";
    case ContainerKind::Tuple: return "tuple";
    case ContainerKind::Set: return "set";
    case ContainerKind::Dict: return "dict";
    case ContainerKind::Generator: return "generator";
  }
  return "?";
}

namespace {

std::string operand(const Operand& o) {
  switch (o.kind) {
    case Operand::Kind::None: return "_";
    case Operand::Kind::Value: return "%" + std::to_string(o.value);
    case Operand::Kind::Constant: return std::string("<") + to_string(o.literal) + ">";
  }
  return "?";
}

std::string variable(const Instruction& ins) {
  switch (ins.scope) {
    case NameScope::Local: return "local[" + std::to_string(ins.owner) + "]." + ins.name;
    case NameScope::Global: return "global[" + ins.module + "]." + ins.name;
    case NameScope::External: return "external." + ins.name;
  }
  return ins.name;
}

}  // namespace

std::string to_string(const IRFunction& fn) {
  std::string out = fn.fq_name + ":\n";
  for (std::size_t i = 0; i < fn.instructions.size(); ++i) {
    const Instruction& ins = fn.instructions[i];
    out += "  ";
    if (ins.defines) out += "%" + std::to_string(i) + " = ";
    out += to_string(ins.kind);
    if (ins.kind == InstrKind::LoadName || ins.kind == InstrKind::StoreName) {
      out += ' ' + variable(ins);
    } else if (ins.kind == InstrKind::ContainerBuild) {
      out += ' ';
      out += to_string(ins.container);
    } else if (!ins.name.empty()) {
      out += ' ' + ins.name;
    }
    if (ins.target >= 0) out += " #" + std::to_string(ins.target);
    if (ins.element >= 0) out += " [" + std::to_string(ins.element) + "]";
    std::size_t positional = ins.operands.size() - ins.keywords.size();
    for (std::size_t k = 0; k < ins.operands.size(); ++k) {
      out += k == 0 ? " " : ", ";
      if (ins.kind == InstrKind::Call && k >= positional) out += ins.keywords[k - positional] + "=";
      out += operand(ins.operands[k]);
    }
    if (ins.opaque) out += " opaque";
    if (ins.is_delete) out += " del";
    if (ins.inplace) out += " inplace";
    out += "  @" + std::to_string(ins.line) + ":" + std::to_string(ins.column) + "\n";
  }
  return out;
}

}  // namespace hybridize::frontend
