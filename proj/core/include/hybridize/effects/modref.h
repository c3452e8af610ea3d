#pragma once

#include <string>
#include <vector>

#include "hybridize/graphs/builder.h"

namespace hybridize::effects {

enum class WitnessReason : std::uint8_t {
  GlobalWrite,
  ParameterMutation,
  InstanceFieldWrite,
  EffectingBuiltin,
  UnknownCallee,
};

const char* to_string(WitnessReason reason);

/// An abstract object (allocation site) or a named root such as a module
/// global or the external world.
struct HeapLocation {
  int object = -1;
  std::string root;      // set for named roots: "<external>", "<unknown>", "global:m.x"
  std::string selector;  // field name, "[]" for elements
  int allocator = -1;    // function that allocated `object`; -1 for roots

  bool named_root() const { return object < 0; }
  auto operator<=>(const HeapLocation&) const = default;
};

struct ModEntry {
  HeapLocation location;
  WitnessReason reason = WitnessReason::UnknownCallee;
  int function = -1;  // function holding the write or call
  std::uint32_t line = 0;
  std::string detail;  // api, field, or global name
};

/// Direct mod/ref sets per function; closure over call edges is taken by
/// side_effect_verdict.
struct ModRefMap {
  std::vector<std::vector<ModEntry>> mod;
  std::vector<std::vector<HeapLocation>> ref;
};

inline const char* kExternalRoot = "<external>";
inline const char* kUnknownRoot = "<unknown>";

ModRefMap compute_mod_ref(const frontend::Program& program, const graphs::CallGraph& cg,
                          const graphs::DataflowGraph& dfg, const summaries::SummaryDb& db);

struct EffectWitness {
  HeapLocation location;
  std::string file;
  std::uint32_t line = 0;
  WitnessReason reason = WitnessReason::UnknownCallee;
  std::string detail;
};

struct SideEffectVerdict {
  std::string function;
  bool has_effects = false;
  std::vector<EffectWitness> witnesses;
};

/// Functions reachable from `fn` through call edges, `fn` included.
std::vector<bool> call_closure(const graphs::CallGraph& cg, int fn);

SideEffectVerdict side_effect_verdict(int fn, const ModRefMap& modref, const graphs::CallGraph& cg,
                                      const frontend::Program& program);

}  // namespace hybridize::effects
