#include <map>
#include <set>

#include "hybridize/inference/evidence.h"

namespace hybridize::inference {

const char* to_string(AssumptionBasis basis) {
  switch (basis) {
    case AssumptionBasis::KeywordMatch: return "keyword_match";
    case AssumptionBasis::ModelFunctor: return "model_functor";
  }
  return "?";
}

namespace {

const std::set<std::string, std::less<>> kKerasModels = {
    "tensorflow.keras.Model",
    "tensorflow.keras.models.Model",
    "tensorflow.keras.Sequential",
    "tensorflow.keras.models.Sequential",
    "tensorflow.python.keras.Model",
    "tensorflow.python.keras.engine.training.Model",
    "keras.Model",
    "keras.models.Model",
    "keras.Sequential",
    "keras.models.Sequential",
    "keras.engine.training.Model",
};

}  // namespace

bool reaches_keras_model(const frontend::Program& program, int cls) {
  if (cls < 0) return false;
  for (const std::string& base : program.all_external_bases(cls)) {
    if (kKerasModels.count(base)) return true;
  }
  return false;
}

std::optional<std::pair<TensorEvidence, Assumption>> speculative_guess(const frontend::FunctionUnit& fn,
                                                                       const frontend::Program& program,
                                                                       const summaries::SummaryDb& db,
                                                                       const ToolConfig& config) {
  if (!config.speculative || !fn.is_candidate()) return std::nullopt;
  int first = -1;
  for (std::size_t p = 0; p < fn.params.size(); ++p) {
    if (!fn.params[p].is_receiver) {
      first = static_cast<int>(p);
      break;
    }
  }
  if (first < 0) return std::nullopt;
  Assumption a;
  a.function = fn.fq_name.str();
  a.location = Location{fn.unit != nullptr ? fn.unit->path : std::string(), fn.line};
  std::vector<std::string> keywords = db.matching_keywords(fn.name);
  if (!keywords.empty()) {
    a.basis = AssumptionBasis::KeywordMatch;
    a.detail = keywords.front();
  } else if ((fn.name == "call" || fn.name == "__call__") && reaches_keras_model(program, fn.enclosing_class)) {
    a.basis = AssumptionBasis::ModelFunctor;
    a.detail = program.classes[static_cast<std::size_t>(fn.enclosing_class)].fq_name;
  } else {
    return std::nullopt;
  }
  TensorEvidence ev;
  ev.param = first;
  ev.name = fn.params[static_cast<std::size_t>(first)].name;
  ev.kinds.insert(EvidenceKind::Speculative);
  ev.tags.insert(TensorTag::Tensor);
  return std::make_pair(std::move(ev), std::move(a));
}

FunctionEvidence infer_function(const frontend::FunctionUnit& fn, const frontend::Program& program,
                                const graphs::Graphs& graphs, const summaries::SummaryDb& db,
                                const ToolConfig& config) {
  FunctionEvidence out;
  std::vector<TensorEvidence> flow = infer_tensor_params(fn, graphs);
  std::vector<TensorEvidence> hints = infer_hint_evidence(fn, *program.resolver, db, config);
  // Merge per parameter, keeping parameter order.
  std::map<int, TensorEvidence> merged;
  for (auto* list : {&flow, &hints}) {
    for (TensorEvidence& ev : *list) {
      auto [it, fresh] = merged.emplace(ev.param, ev);
      if (fresh) continue;
      it->second.kinds.insert(ev.kinds.begin(), ev.kinds.end());
      it->second.tags.insert(ev.tags.begin(), ev.tags.end());
      it->second.hints.insert(it->second.hints.end(), ev.hints.begin(), ev.hints.end());
    }
  }
  for (auto& [_, ev] : merged) out.tensors.push_back(std::move(ev));
  if (out.tensors.empty()) {
    bool hinted = false;
    if (config.follow_type_hints) {
      for (const frontend::ParamInfo& p : fn.params) hinted = hinted || (!p.is_receiver && p.annotation != nullptr);
    }
    if (!hinted) {
      if (auto guess = speculative_guess(fn, program, db, config)) {
        out.tensors.push_back(std::move(guess->first));
        out.assumption = std::move(guess->second);
      }
    }
  }
  out.literals = infer_literal_args(fn, graphs, config);
  return out;
}

}  // namespace hybridize::inference
