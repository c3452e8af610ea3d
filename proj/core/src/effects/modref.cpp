#include "hybridize/effects/modref.h"

#include <algorithm>
#include <set>
#include <tuple>

namespace hybridize::effects {

using frontend::InstrKind;
using frontend::Instruction;
using frontend::NameScope;
using graphs::AbstractObject;
using graphs::ObjectKind;

const char* to_string(WitnessReason reason) {
  switch (reason) {
    case WitnessReason::GlobalWrite: return "global_write";
    case WitnessReason::ParameterMutation: return "parameter_mutation";
    case WitnessReason::InstanceFieldWrite: return "instance_field_write";
    case WitnessReason::EffectingBuiltin: return "effecting_builtin";
    case WitnessReason::UnknownCallee: return "unknown_callee";
  }
  return "?";
}

namespace {

bool mutable_object(const AbstractObject& o) {
  switch (o.kind) {
    case ObjectKind::Instance:
    case ObjectKind::Class:
    case ObjectKind::Container:
    case ObjectKind::External:
    case ObjectKind::Function:
    case ObjectKind::Tensor:
    case ObjectKind::Dataset:
      return true;
    default:
      return false;
  }
}

class ModRefBuilder {
 public:
  ModRefBuilder(const frontend::Program& program, const graphs::CallGraph& cg, const graphs::DataflowGraph& dfg,
                const summaries::SummaryDb& db)
      : prog_(program), cg_(cg), g_(dfg), db_(db) {}

  ModRefMap run() {
    ModRefMap out;
    out.mod.resize(prog_.functions.size());
    out.ref.resize(prog_.functions.size());
    mod_ = &out.mod;
    std::vector<bool> reachable = cg_.reachable();
    for (std::size_t f = 0; f < prog_.functions.size(); ++f) {
      if (!reachable[f]) continue;
      const auto& instructions = prog_.functions[f].ir.instructions;
      for (std::size_t i = 0; i < instructions.size(); ++i) {
        scan(static_cast<int>(f), instructions[i], out.ref[f]);
      }
    }
    for (const graphs::ExternalCall& call : g_.external_calls()) external(call);
    for (const graphs::UnresolvedSite& site : cg_.unresolved_sites()) {
      add(site.function, HeapLocation{-1, kUnknownRoot, {}, -1}, WitnessReason::UnknownCallee, site.line,
          "unresolved call (" + site.reason + ")");
    }
    for (auto& entries : out.mod) {
      std::sort(entries.begin(), entries.end(), [](const ModEntry& a, const ModEntry& b) {
        return std::tie(a.line, a.location, a.detail) < std::tie(b.line, b.location, b.detail);
      });
    }
    for (auto& refs : out.ref) {
      std::sort(refs.begin(), refs.end());
      refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
    }
    return out;
  }

 private:
  void add(int fn, HeapLocation loc, WitnessReason reason, std::uint32_t line, std::string detail) {
    auto key = std::make_tuple(fn, loc, reason, line, detail);
    if (!seen_.insert(key).second) return;
    (*mod_)[static_cast<std::size_t>(fn)].push_back(ModEntry{std::move(loc), reason, fn, line, std::move(detail)});
  }

  WitnessReason classify(int fn, int object) const {
    const frontend::FunctionUnit& f = prog_.functions[static_cast<std::size_t>(fn)];
    bool in_other_param = false;
    for (std::size_t p = 0; p < f.params.size(); ++p) {
      int node = g_.param_node(fn, static_cast<int>(p));
      if (node < 0 || !g_.pts(node).contains(object)) continue;
      if (f.params[p].is_receiver) return WitnessReason::InstanceFieldWrite;
      in_other_param = true;
    }
    if (in_other_param) return WitnessReason::ParameterMutation;
    ObjectKind kind = g_.object(object).kind;
    return kind == ObjectKind::Instance || kind == ObjectKind::Class ? WitnessReason::InstanceFieldWrite
                                                                     : WitnessReason::ParameterMutation;
  }

  void write_objects(int fn, int node, const std::string& selector, std::uint32_t line) {
    if (node < 0) return;
    for (int o : g_.pts(node)) {
      const AbstractObject& obj = g_.object(o);
      if (obj.kind == ObjectKind::Module) {
        add(fn, HeapLocation{-1, "global:" + obj.module + "." + selector, {}, -1}, WitnessReason::GlobalWrite, line,
            obj.module + "." + selector);
      } else if (mutable_object(obj)) {
        add(fn, HeapLocation{o, {}, selector, obj.allocator}, classify(fn, o), line, selector);
      }
    }
  }

  void read_objects(int node, const std::string& selector, std::vector<HeapLocation>& ref) const {
    if (node < 0) return;
    for (int o : g_.pts(node)) {
      const AbstractObject& obj = g_.object(o);
      if (mutable_object(obj)) ref.push_back(HeapLocation{o, {}, selector, obj.allocator});
    }
  }

  void scan(int fn, const Instruction& ins, std::vector<HeapLocation>& ref) {
    auto operand = [&](std::size_t k) {
      return k < ins.operands.size() ? g_.operand_node(fn, ins.operands[k]) : -1;
    };
    switch (ins.kind) {
      case InstrKind::AttrWrite:
        write_objects(fn, operand(0), ins.name, ins.line);
        break;
      case InstrKind::SubscriptWrite:
        write_objects(fn, operand(0), "[]", ins.line);
        break;
      case InstrKind::AttrRead:
        read_objects(operand(0), ins.name, ref);
        break;
      case InstrKind::SubscriptRead:
        read_objects(operand(0), "[]", ref);
        break;
      case InstrKind::StoreName:
        if (ins.scope == NameScope::Global) {
          std::string name = ins.module + "." + ins.name;
          add(fn, HeapLocation{-1, "global:" + name, {}, -1}, WitnessReason::GlobalWrite, ins.line, name);
        } else if (ins.scope == NameScope::Local && ins.owner != fn && ins.owner >= 0) {
          std::string name = prog_.functions[static_cast<std::size_t>(ins.owner)].fq_name.str() + "." + ins.name;
          add(fn, HeapLocation{-1, "nonlocal:" + name, {}, -1}, WitnessReason::GlobalWrite, ins.line, name);
        }
        break;
      case InstrKind::LoadName:
        if (ins.scope == NameScope::Global) ref.push_back(HeapLocation{-1, "global:" + ins.module + "." + ins.name});
        break;
      case InstrKind::Operator:
        if (ins.inplace) {
          int node = operand(0);
          if (node < 0) break;
          for (int o : g_.pts(node)) {
            const AbstractObject& obj = g_.object(o);
            if (obj.kind == ObjectKind::Container && obj.container != frontend::ContainerKind::Tuple) {
              add(fn, HeapLocation{o, {}, "[]", obj.allocator}, classify(fn, o), ins.line, "[]");
            }
          }
        }
        break;
      default:
        break;
    }
  }

  void external(const graphs::ExternalCall& call) {
    std::uint32_t line =
        prog_.functions[static_cast<std::size_t>(call.function)].ir.instructions[static_cast<std::size_t>(
            call.instruction)].line;
    const summaries::EffectSpec* spec = db_.effect(call.api);
    if (spec == nullptr) {
      add(call.function, HeapLocation{-1, kUnknownRoot, {}, -1}, WitnessReason::UnknownCallee, line, call.api);
      return;
    }
    switch (spec->effect) {
      case summaries::Effect::Pure:
        break;
      case summaries::Effect::ExternalSideEffect:
        add(call.function, HeapLocation{-1, kExternalRoot, {}, -1}, WitnessReason::EffectingBuiltin, line, call.api);
        break;
      case summaries::Effect::MutatesReceiver: {
        auto mutate = [&](int o) {
          const AbstractObject& obj = g_.object(o);
          if (obj.kind == ObjectKind::Module) {
            add(call.function, HeapLocation{-1, "global:" + obj.module, {}, -1}, WitnessReason::GlobalWrite, line,
                call.api);
          } else if (mutable_object(obj)) {
            add(call.function, HeapLocation{o, {}, "*", obj.allocator}, classify(call.function, o), line, call.api);
          }
        };
        if (call.receiver_object >= 0) mutate(call.receiver_object);
        if (call.receiver_node >= 0) {
          for (int o : g_.pts(call.receiver_node)) mutate(o);
        }
        break;
      }
    }
  }

  const frontend::Program& prog_;
  const graphs::CallGraph& cg_;
  const graphs::DataflowGraph& g_;
  const summaries::SummaryDb& db_;
  std::vector<std::vector<ModEntry>>* mod_ = nullptr;
  std::set<std::tuple<int, HeapLocation, WitnessReason, std::uint32_t, std::string>> seen_;
};

}  // namespace

ModRefMap compute_mod_ref(const frontend::Program& program, const graphs::CallGraph& cg,
                          const graphs::DataflowGraph& dfg, const summaries::SummaryDb& db) {
  return ModRefBuilder(program, cg, dfg, db).run();
}

std::vector<bool> call_closure(const graphs::CallGraph& cg, int fn) {
  std::vector<bool> seen(cg.size(), false);
  std::vector<int> stack{fn};
  seen[static_cast<std::size_t>(fn)] = true;
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (int s : cg.successors(n)) {
      if (!seen[static_cast<std::size_t>(s)]) {
        seen[static_cast<std::size_t>(s)] = true;
        stack.push_back(s);
      }
    }
  }
  return seen;
}

SideEffectVerdict side_effect_verdict(int fn, const ModRefMap& modref, const graphs::CallGraph& cg,
                                      const frontend::Program& program) {
  SideEffectVerdict v;
  v.function = program.functions[static_cast<std::size_t>(fn)].fq_name.str();
  std::vector<bool> closure = call_closure(cg, fn);
  std::set<std::tuple<std::string, std::uint32_t, WitnessReason, std::string>> seen;
  for (std::size_t g = 0; g < modref.mod.size(); ++g) {
    if (!closure[g]) continue;
    for (const ModEntry& e : modref.mod[g]) {
      const HeapLocation& loc = e.location;
      bool local = !loc.named_root() && loc.allocator >= 0 && closure[static_cast<std::size_t>(loc.allocator)];
      if (local) continue;
      const frontend::FunctionUnit& owner = program.functions[static_cast<std::size_t>(e.function)];
      std::string file = owner.unit != nullptr ? owner.unit->path : std::string();
      if (!seen.insert({file, e.line, e.reason, e.detail}).second) continue;
      v.witnesses.push_back(EffectWitness{loc, file, e.line, e.reason, e.detail});
    }
  }
  std::sort(v.witnesses.begin(), v.witnesses.end(), [](const EffectWitness& a, const EffectWitness& b) {
    return std::tie(a.file, a.line, a.detail) < std::tie(b.file, b.line, b.detail);
  });
  v.has_effects = !v.witnesses.empty();
  return v;
}

}  // namespace hybridize::effects
