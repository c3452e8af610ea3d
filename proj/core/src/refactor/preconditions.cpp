#include "hybridize/refactor/preconditions.h"

#include <algorithm>
#include <set>

namespace hybridize::refactor {

const char* to_string(Mode mode) { return mode == Mode::Eager ? "eager" : "hybrid"; }

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::P1: return "P1";
    case Rule::P2: return "P2";
    case Rule::P3: return "P3";
  }
  return "?";
}

const char* to_string(Action action) {
  switch (action) {
    case Action::None: return "none";
    case Action::Hybridize: return "hybridize";
    case Action::Dehybridize: return "dehybridize";
  }
  return "?";
}

const char* to_string(Failure failure) {
  switch (failure) {
    case Failure::F1: return "F1";
    case Failure::F2: return "F2";
    case Failure::F3: return "F3";
    case Failure::F4: return "F4";
  }
  return "?";
}

const char* to_string(Warning warning) {
  switch (warning) {
    case Warning::HybridSideEffects: return "W_hybrid_side_effects";
    case Warning::RecursiveHybridTensor: return "W_recursive_hybrid_tensor";
  }
  return "?";
}

bool is_hybridization_decorator(const std::string& canonical) {
  static const std::set<std::string, std::less<>> names = {
      "tensorflow.function",
      "tensorflow.compat.v2.function",
      "tensorflow.compat.v1.function",
      "tensorflow.python.eager.def_function.function",
      "tensorflow.python.eager.polymorphic_function.polymorphic_function.function",
  };
  return names.count(canonical) != 0;
}

ExecutionMode classify_execution_mode(const frontend::FunctionUnit& fn, const frontend::NameResolver& resolver) {
  ExecutionMode out;
  if (fn.def == nullptr || fn.unit == nullptr) return out;
  const auto& decorators = fn.def->decorators;
  for (std::size_t k = 0; k < decorators.size(); ++k) {
    const frontend::Expr* e = decorators[k].expr.get();
    if (e != nullptr && e->kind == frontend::ExprKind::Call) e = e->child(0);
    if (e == nullptr) continue;
    std::string dotted = frontend::dotted_name(*e);
    frontend::QualifiedName q = resolver.resolve(*fn.unit, *e);
    if (!q.resolved()) {
      out.unresolved_decorators.push_back(dotted.empty() ? frontend::dump(*e) : dotted);
      continue;
    }
    if (out.decorator < 0 && is_hybridization_decorator(q.str())) {
      out.mode = Mode::Hybrid;
      out.decorator = static_cast<int>(k);
    }
  }
  return out;
}

PreconditionVerdict check_preconditions(const PreconditionInput& in) {
  PreconditionVerdict v;
  v.exe = in.exe;
  v.tens = in.tens;
  v.lit = in.lit;
  v.se = in.se;
  v.rec = in.rec;
  if (!in.reachable) {
    v.failures.insert(Failure::F4);
    return v;
  }
  if (in.exe == Mode::Eager) {
    if (in.tens && !in.lit && !in.se && !in.rec) v.rule = Rule::P1;
    if (in.tens && in.lit) v.failures.insert(Failure::F2);
    if (in.se) v.failures.insert(Failure::F3);
  } else {
    if (!in.se && !in.tens) v.rule = Rule::P2;
    if (!in.se && in.tens && in.lit) v.rule = Rule::P3;
    if (in.tens && !in.lit) v.failures.insert(Failure::F1);
    if (in.se) {
      v.failures.insert(Failure::F3);
      v.warnings.insert(Warning::HybridSideEffects);
    }
    if (in.tens && in.rec) v.warnings.insert(Warning::RecursiveHybridTensor);
  }
  if (v.rule) v.action = *v.rule == Rule::P1 ? Action::Hybridize : Action::Dehybridize;
  return v;
}

}  // namespace hybridize::refactor
