#include <algorithm>
#include <tuple>

#include "hybridize/refactor/preconditions.h"

namespace hybridize::refactor {

std::vector<std::pair<std::string, std::vector<std::size_t>>> RefactoringPlan::edits_by_file() const {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  for (std::size_t k = 0; k < functions.size(); ++k) {
    if (functions[k].verdict.action == Action::None) continue;
    if (out.empty() || out.back().first != functions[k].file) out.emplace_back(functions[k].file, std::vector<std::size_t>{});
    out.back().second.push_back(k);
  }
  return out;
}

RefactoringPlan plan_project(const frontend::Program& program, const graphs::Graphs& graphs,
                             const summaries::SummaryDb& db, const ToolConfig& config) {
  RefactoringPlan plan;
  effects::ModRefMap modref = effects::compute_mod_ref(program, graphs.call_graph, graphs.dataflow, db);
  for (const frontend::FunctionUnit& fn : program.functions) {
    if (!fn.is_candidate()) continue;
    FunctionAnalysis a;
    a.function = fn.id;
    a.fq_name = fn.fq_name.str();
    a.file = fn.unit != nullptr ? fn.unit->path : std::string();
    a.line = fn.line;
    a.mode = classify_execution_mode(fn, *program.resolver);
    a.reachable = graphs::is_reachable(graphs.call_graph, fn.id);
    PreconditionInput in;
    in.exe = a.mode.mode;
    in.reachable = a.reachable;
    if (a.reachable) {
      a.evidence = inference::infer_function(fn, program, graphs, db, config);
      a.effects = effects::side_effect_verdict(fn.id, modref, graphs.call_graph, program);
      in.tens = a.evidence.tens();
      in.lit = a.evidence.lit();
      in.se = a.effects.has_effects;
      in.rec = graphs::is_recursive(graphs.call_graph, fn.id);
    } else {
      a.effects.function = a.fq_name;
    }
    a.verdict = check_preconditions(in);
    a.verdict.function = a.fq_name;
    plan.functions.push_back(std::move(a));
  }
  std::stable_sort(plan.functions.begin(), plan.functions.end(), [&](const FunctionAnalysis& x, const FunctionAnalysis& y) {
    auto cx = program.functions[static_cast<std::size_t>(x.function)].column;
    auto cy = program.functions[static_cast<std::size_t>(y.function)].column;
    return std::tie(x.file, x.line, cx) < std::tie(y.file, y.line, cy);
  });
  return plan;
}

}  // namespace hybridize::refactor
