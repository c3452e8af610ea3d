#include <algorithm>

#include "hybridize/inference/evidence.h"

namespace hybridize::inference {

using frontend::LiteralKind;
using graphs::AbstractObject;
using graphs::DataflowGraph;
using graphs::ObjectKind;

const char* to_string(LiteralTag tag) {
  switch (tag) {
    case LiteralTag::Number: return "number";
    case LiteralTag::String: return "string";
    case LiteralTag::Boolean: return "boolean";
    case LiteralTag::None: return "none";
    case LiteralTag::ContainerOfLiterals: return "container_of_literals";
    case LiteralTag::ObjectWithLiteralField: return "object_with_literal_field";
  }
  return "?";
}

namespace {

constexpr int kMaxDepth = 3;

LiteralTag scalar_tag(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::Number: return LiteralTag::Number;
    case LiteralKind::String:
    case LiteralKind::Bytes: return LiteralTag::String;
    case LiteralKind::Boolean: return LiteralTag::Boolean;
    case LiteralKind::None:
    case LiteralKind::Ellipsis: return LiteralTag::None;
  }
  return LiteralTag::None;
}

class LiteralScan {
 public:
  LiteralScan(const DataflowGraph& g, bool booleans) : g_(g), booleans_(booleans) {}

  /// Literal tags carried by `object` when passed as an argument.
  std::set<LiteralTag> classify(int object) {
    std::set<LiteralTag> out;
    const AbstractObject& o = g_.object(object);
    if (o.kind == ObjectKind::Literal) {
      LiteralTag tag = scalar_tag(o.literal);
      if (tag != LiteralTag::Boolean || booleans_) out.insert(tag);
    } else if (o.kind == ObjectKind::Container) {
      std::set<int> seen;
      if (holds_literal(object, 0, seen)) out.insert(LiteralTag::ContainerOfLiterals);
    } else if (o.kind == ObjectKind::Instance) {
      std::set<int> seen;
      if (holds_literal(object, 0, seen)) out.insert(LiteralTag::ObjectWithLiteralField);
    }
    return out;
  }

 private:
  bool holds_literal(int object, int depth, std::set<int>& seen) {
    if (depth >= kMaxDepth || !seen.insert(object).second) return false;
    for (int f : g_.fields_of(object)) {
      const std::string& name = g_.node(f).name;
      if (name == "{keys}") continue;  // keys do not reach the callee's trace
      for (int y : g_.pts(f)) {
        const AbstractObject& o = g_.object(y);
        if (o.kind == ObjectKind::Literal) {
          if (o.literal != LiteralKind::Boolean || booleans_) return true;
        } else if (o.kind == ObjectKind::Container || o.kind == ObjectKind::Instance) {
          if (holds_literal(y, depth + 1, seen)) return true;
        }
      }
    }
    return false;
  }

  const DataflowGraph& g_;
  bool booleans_;
};

}  // namespace

std::vector<LiteralEvidence> infer_literal_args(const frontend::FunctionUnit& fn, const graphs::Graphs& graphs,
                                                const ToolConfig& config) {
  const DataflowGraph& g = graphs.dataflow;
  const frontend::Program* program = g.program();
  LiteralScan scan(g, config.consider_booleans);
  std::vector<LiteralEvidence> out(fn.params.size());
  for (const graphs::Binding& b : g.bindings()) {
    if (b.callee != fn.id || b.param < 0 || fn.params[static_cast<std::size_t>(b.param)].is_receiver) continue;
    std::set<LiteralTag> tags;
    for (int o : g.pts(b.arg_node)) {
      std::set<LiteralTag> t = scan.classify(o);
      tags.insert(t.begin(), t.end());
    }
    if (tags.empty()) continue;
    LiteralEvidence& ev = out[static_cast<std::size_t>(b.param)];
    ev.kinds.insert(tags.begin(), tags.end());
    if (program != nullptr) {
      const frontend::FunctionUnit& caller = program->functions[static_cast<std::size_t>(b.caller)];
      Location loc{caller.unit != nullptr ? caller.unit->path : std::string(),
                   caller.ir.instructions[static_cast<std::size_t>(b.instruction)].line};
      if (std::find(ev.call_sites.begin(), ev.call_sites.end(), loc) == ev.call_sites.end()) {
        ev.call_sites.push_back(loc);
      }
    }
  }
  // Extra positional or keyword arguments land in the *args/**kwargs container.
  for (std::size_t p = 0; p < fn.params.size(); ++p) {
    auto kind = fn.params[p].kind;
    if (kind != frontend::ParamKind::VarArgs && kind != frontend::ParamKind::VarKeywords) continue;
    int node = g.param_node(fn.id, static_cast<int>(p));
    if (node < 0) continue;
    for (int o : g.pts(node)) {
      if (g.object(o).allocator != fn.id || g.object(o).site != -1) continue;
      for (int f : g.fields_of(o)) {
        if (g.node(f).name != "[]") continue;
        for (int y : g.pts(f)) {
          std::set<LiteralTag> t = scan.classify(y);
          out[p].kinds.insert(t.begin(), t.end());
        }
      }
    }
    if (!out[p].kinds.empty() && out[p].call_sites.empty() && fn.unit != nullptr) {
      out[p].call_sites.push_back(Location{fn.unit->path, fn.line});
    }
  }
  std::vector<LiteralEvidence> result;
  for (std::size_t p = 0; p < out.size(); ++p) {
    if (out[p].kinds.empty()) continue;
    out[p].param = static_cast<int>(p);
    out[p].name = fn.params[p].name;
    std::sort(out[p].call_sites.begin(), out[p].call_sites.end());
    result.push_back(std::move(out[p]));
  }
  return result;
}

}  // namespace hybridize::inference
