#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hybridize/config.h"
#include "hybridize/graphs/builder.h"

namespace hybridize::inference {

enum class EvidenceKind : std::uint8_t { Dataflow, Hint, Speculative };
enum class TensorTag : std::uint8_t { Tensor, TensorLike, DatasetElement };

const char* to_string(EvidenceKind kind);
const char* to_string(TensorTag tag);

struct Location {
  std::string file;
  std::uint32_t line = 0;

  auto operator<=>(const Location&) const = default;
};

/// One step of a witness path, read from the generator towards the parameter.
///   Alloc      first step: `object` appears at its allocation node
///   Copy       an edge previous -> node exists and `object` is in pts(node)
///   ElementOf  previous is a field node of `object` and `object` is in pts(node)
///   Derived    a Derived edge previous -> node carries `object`, or `object`
///              is the element of the dataset held by the previous step
enum class StepKind : std::uint8_t { Alloc, Copy, ElementOf, Derived };

const char* to_string(StepKind kind);

struct WitnessStep {
  int node = -1;
  int object = -1;
  StepKind kind = StepKind::Copy;
};

struct TensorWitness {
  int generator = -1;  // Tensor or Dataset object
  std::string api;
  Location location;
  std::vector<WitnessStep> path;
};

struct TensorEvidence {
  int param = -1;
  std::string name;
  std::set<EvidenceKind> kinds;
  std::set<TensorTag> tags;
  std::vector<TensorWitness> witnesses;  // dataflow witnesses
  std::vector<Location> hints;           // annotation locations
};

enum class AssumptionBasis : std::uint8_t { KeywordMatch, ModelFunctor };

const char* to_string(AssumptionBasis basis);

struct Assumption {
  std::string function;
  AssumptionBasis basis = AssumptionBasis::KeywordMatch;
  std::string detail;
  Location location;
};

enum class LiteralTag : std::uint8_t { Number, String, Boolean, None, ContainerOfLiterals, ObjectWithLiteralField };

const char* to_string(LiteralTag tag);

struct LiteralEvidence {
  int param = -1;
  std::string name;
  std::set<LiteralTag> kinds;
  std::vector<Location> call_sites;
};

/// Parameters with a dataflow path from a tensor or dataset generator, directly
/// or through containers. The receiver is never reported.
std::vector<TensorEvidence> infer_tensor_params(const frontend::FunctionUnit& fn, const graphs::Graphs& graphs);

/// Parameters whose annotation names a tensor type of `db`, bare or inside
/// Optional/List/Tuple/Sequence (one level of nesting).
std::vector<TensorEvidence> infer_hint_evidence(const frontend::FunctionUnit& fn, const frontend::NameResolver& resolver,
                                                const summaries::SummaryDb& db, const ToolConfig& config);

/// Tag of an annotation under the hint grammar, or nullopt when unrecognized.
std::optional<TensorTag> hint_tag(const frontend::Expr& annotation, const frontend::SourceUnit& unit,
                                  const frontend::NameResolver& resolver, const summaries::SummaryDb& db);

/// Keyword or functor-based guess attached to the first non-receiver
/// parameter. The caller checks that no dataflow or hint evidence exists.
std::optional<std::pair<TensorEvidence, Assumption>> speculative_guess(const frontend::FunctionUnit& fn,
                                                                       const frontend::Program& program,
                                                                       const summaries::SummaryDb& db,
                                                                       const ToolConfig& config);

/// True when `cls` inherits, possibly indirectly, from a Keras model class.
bool reaches_keras_model(const frontend::Program& program, int cls);

std::vector<LiteralEvidence> infer_literal_args(const frontend::FunctionUnit& fn, const graphs::Graphs& graphs,
                                                const ToolConfig& config);

/// All tensor evidence of `fn`: dataflow and hints, then the speculative
/// fallback when neither produced anything.
struct FunctionEvidence {
  std::vector<TensorEvidence> tensors;
  std::vector<LiteralEvidence> literals;
  std::optional<Assumption> assumption;

  bool tens() const { return !tensors.empty(); }
  bool lit() const { return !literals.empty(); }
};

FunctionEvidence infer_function(const frontend::FunctionUnit& fn, const frontend::Program& program,
                                const graphs::Graphs& graphs, const summaries::SummaryDb& db,
                                const ToolConfig& config);

}  // namespace hybridize::inference
