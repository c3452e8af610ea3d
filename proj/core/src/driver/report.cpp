#include <nlohmann/json.hpp>

#include "hybridize/driver/pipeline.h"

namespace hybridize::driver {

using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = "0.1.0";

ordered_json location(const inference::Location& loc) { return ordered_json{{"file", loc.file}, {"line", loc.line}}; }

template <class Set>
ordered_json names(const Set& values) {
  ordered_json out = ordered_json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

ordered_json tensor_evidence(const inference::TensorEvidence& ev, const graphs::DataflowGraph& g) {
  ordered_json witnesses = ordered_json::array();
  for (const inference::TensorWitness& w : ev.witnesses) {
    ordered_json path = ordered_json::array();
    for (const inference::WitnessStep& s : w.path) {
      auto [file, line] = g.node_location(s.node);
      path.push_back(ordered_json{{"step", to_string(s.kind)}, {"node", g.describe_node(s.node)}, {"file", file},
                                  {"line", line}});
    }
    witnesses.push_back(ordered_json{{"generator", w.api}, {"file", w.location.file}, {"line", w.location.line},
                                     {"path", std::move(path)}});
  }
  ordered_json hints = ordered_json::array();
  for (const inference::Location& h : ev.hints) hints.push_back(location(h));
  return ordered_json{{"param", ev.name},      {"kinds", names(ev.kinds)}, {"tags", names(ev.tags)},
                      {"witnesses", witnesses}, {"hints", hints}};
}

ordered_json literal_evidence(const inference::LiteralEvidence& ev) {
  ordered_json sites = ordered_json::array();
  for (const inference::Location& l : ev.call_sites) sites.push_back(location(l));
  return ordered_json{{"param", ev.name}, {"kinds", names(ev.kinds)}, {"call_sites", sites}};
}

ordered_json effect_witness(const effects::EffectWitness& w) {
  return ordered_json{{"file", w.file}, {"line", w.line}, {"reason", to_string(w.reason)}, {"detail", w.detail}};
}

/// Report notes beyond the precondition warnings: unresolved decorators,
/// other decorators below an inserted one, and edits that could not be made.
std::vector<std::string> notes(const Analysis& a, const refactor::FunctionAnalysis& f) {
  std::vector<std::string> out;
  for (const std::string& d : f.mode.unresolved_decorators) out.push_back("unresolved_decorator: " + d);
  const frontend::FunctionUnit& fn = a.program.functions[static_cast<std::size_t>(f.function)];
  if (f.verdict.action == refactor::Action::Hybridize && fn.def != nullptr && !fn.def->decorators.empty()) {
    std::string below;
    for (const frontend::Decorator& d : fn.def->decorators) {
      if (!below.empty()) below += ", ";
      const frontend::Expr* e = d.expr.get();
      if (e != nullptr && e->kind == frontend::ExprKind::Call) e = e->child(0);
      std::string name = e != nullptr ? frontend::dotted_name(*e) : std::string();
      below += "@" + (name.empty() && e != nullptr ? frontend::dump(*e) : name);
    }
    out.push_back("decorator_placed_outermost: above " + below);
  }
  for (const transform::EditFailure& e : a.script.failures) {
    if (e.function == f.fq_name && e.file == f.file) out.push_back("edit_failed: " + e.message);
  }
  return out;
}

ordered_json config_echo(const ToolConfig& c) {
  ordered_json j;
  j["consider_booleans"] = c.consider_booleans;
  j["speculative"] = c.speculative;
  j["follow_type_hints"] = c.follow_type_hints;
  j["pytest_entry_points"] = c.pytest_entry_points;
  j["apply"] = c.apply;
  j["summary_paths"] = c.summary_paths;
  j["report_path"] = c.report_path ? ordered_json(*c.report_path) : ordered_json(nullptr);
  j["dump_callgraph"] = c.dump_callgraph ? ordered_json(*c.dump_callgraph) : ordered_json(nullptr);
  return j;
}

}  // namespace

std::string render_report(const Analysis& a) {
  const graphs::DataflowGraph& g = a.graphs.dataflow;
  ordered_json functions = ordered_json::array();
  ordered_json assumptions = ordered_json::array();
  std::size_t refactorable = 0;
  std::map<std::string, std::size_t> rules{{"P1", 0}, {"P2", 0}, {"P3", 0}};
  std::map<std::string, std::size_t> failures{{"F1", 0}, {"F2", 0}, {"F3", 0}, {"F4", 0}};
  for (const refactor::FunctionAnalysis& f : a.plan.functions) {
    const refactor::PreconditionVerdict& v = f.verdict;
    ordered_json tens = ordered_json::array();
    for (const inference::TensorEvidence& ev : f.evidence.tensors) tens.push_back(tensor_evidence(ev, g));
    ordered_json lits = ordered_json::array();
    for (const inference::LiteralEvidence& ev : f.evidence.literals) lits.push_back(literal_evidence(ev));
    ordered_json se = ordered_json::array();
    for (const effects::EffectWitness& w : f.effects.witnesses) se.push_back(effect_witness(w));
    ordered_json warnings = names(v.warnings);
    for (std::string& n : notes(a, f)) warnings.push_back(std::move(n));

    ordered_json r;
    r["fq_name"] = f.fq_name;
    r["file"] = f.file;
    r["line"] = f.line;
    r["exe"] = to_string(v.exe);
    r["tens"] = v.tens;
    r["tens_evidence"] = std::move(tens);
    r["lit"] = v.lit;
    r["lit_evidence"] = std::move(lits);
    r["se"] = v.se;
    r["se_witnesses"] = std::move(se);
    r["rec"] = v.rec;
    r["rule"] = v.rule ? ordered_json(to_string(*v.rule)) : ordered_json(nullptr);
    r["action"] = to_string(v.action);
    r["failures"] = names(v.failures);
    r["warnings"] = std::move(warnings);
    functions.push_back(std::move(r));

    if (v.action != refactor::Action::None) ++refactorable;
    if (v.rule) ++rules[to_string(*v.rule)];
    for (refactor::Failure x : v.failures) ++failures[to_string(x)];
    if (f.evidence.assumption) {
      const inference::Assumption& as = *f.evidence.assumption;
      assumptions.push_back(ordered_json{{"function", as.function},
                                         {"basis", to_string(as.basis)},
                                         {"detail", as.detail},
                                         {"file", as.location.file},
                                         {"line", as.location.line},
                                         {"action", to_string(v.action)}});
    }
  }

  ordered_json parse_warnings = ordered_json::array();
  for (const auto& u : a.project.units) {
    if (!u->failure) continue;
    parse_warnings.push_back(ordered_json{{"file", u->path},
                                          {"line", u->failure->line},
                                          {"message", u->failure->message},
                                          {"python2", u->failure->python2}});
  }

  ordered_json summary;
  summary["candidates"] = a.plan.functions.size();
  summary["refactorable"] = refactorable;
  summary["edits"] = a.script.edits.size();
  for (const auto& [k, n] : rules) summary[k] = n;
  for (const auto& [k, n] : failures) summary[k] = n;
  summary["parse_warnings"] = std::move(parse_warnings);

  ordered_json report;
  report["version"] = ordered_json{{"schema", kSchemaVersion}, {"tool", kToolVersion}};
  report["config"] = config_echo(a.config);
  report["functions"] = std::move(functions);
  report["assumptions"] = std::move(assumptions);
  report["summary"] = std::move(summary);
  return report.dump(2) + "\n";
}

}  // namespace hybridize::driver
