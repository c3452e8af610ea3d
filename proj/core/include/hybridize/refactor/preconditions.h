#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hybridize/effects/modref.h"
#include "hybridize/inference/evidence.h"

namespace hybridize::refactor {

enum class Mode : std::uint8_t { Eager, Hybrid };
enum class Rule : std::uint8_t { P1, P2, P3 };
enum class Action : std::uint8_t { None, Hybridize, Dehybridize };
enum class Failure : std::uint8_t { F1, F2, F3, F4 };
enum class Warning : std::uint8_t { HybridSideEffects, RecursiveHybridTensor };

const char* to_string(Mode mode);
const char* to_string(Rule rule);
const char* to_string(Action action);
const char* to_string(Failure failure);
const char* to_string(Warning warning);

struct ExecutionMode {
  Mode mode = Mode::Eager;
  int decorator = -1;  // index of the hybridization decorator in source order
  std::vector<std::string> unresolved_decorators;
};

/// Canonical names accepted as the hybridization decorator.
bool is_hybridization_decorator(const std::string& canonical);

ExecutionMode classify_execution_mode(const frontend::FunctionUnit& fn, const frontend::NameResolver& resolver);

struct PreconditionInput {
  Mode exe = Mode::Eager;
  bool tens = false;
  bool lit = false;
  bool se = false;
  bool rec = false;
  bool reachable = true;
};

struct PreconditionVerdict {
  std::string function;
  Mode exe = Mode::Eager;
  bool tens = false;
  bool lit = false;
  bool se = false;
  bool rec = false;
  std::optional<Rule> rule;
  Action action = Action::None;
  std::set<Failure> failures;
  std::set<Warning> warnings;
};

PreconditionVerdict check_preconditions(const PreconditionInput& in);

/// Everything the report needs about one candidate function.
struct FunctionAnalysis {
  int function = -1;
  std::string fq_name;
  std::string file;
  std::uint32_t line = 0;
  ExecutionMode mode;
  inference::FunctionEvidence evidence;
  effects::SideEffectVerdict effects;
  bool reachable = false;
  PreconditionVerdict verdict;
};

struct RefactoringPlan {
  std::vector<FunctionAnalysis> functions;  // sorted by (file, line)

  /// Indices into `functions` of records with an action, grouped by file in
  /// path order.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> edits_by_file() const;
};

RefactoringPlan plan_project(const frontend::Program& program, const graphs::Graphs& graphs,
                             const summaries::SummaryDb& db, const ToolConfig& config);

}  // namespace hybridize::refactor
