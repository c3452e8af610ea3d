#include <set>

#include "hybridize/inference/evidence.h"

namespace hybridize::inference {

using frontend::Expr;
using frontend::ExprKind;

namespace {

const std::set<std::string, std::less<>> kWrappers = {
    "typing.Optional", "typing.List", "typing.Sequence", "typing.Tuple", "builtins.list",
    "builtins.tuple",  "collections.abc.Sequence",
};

std::optional<TensorTag> base_tag(const Expr& e, const frontend::SourceUnit& unit,
                                  const frontend::NameResolver& resolver, const summaries::SummaryDb& db) {
  if (e.kind != ExprKind::Name && e.kind != ExprKind::Attribute) return std::nullopt;
  frontend::QualifiedName q = resolver.resolve(unit, e);
  if (!q.resolved()) return std::nullopt;
  const summaries::GeneratorSpec* spec = db.generator(q.str());
  if (spec == nullptr || spec->kind != summaries::GeneratorKind::Tensor) return std::nullopt;
  return spec->tensor_like ? TensorTag::TensorLike : TensorTag::Tensor;
}

std::optional<TensorTag> tag_at(const Expr& e, const frontend::SourceUnit& unit, const frontend::NameResolver& resolver,
                                const summaries::SummaryDb& db, int nesting) {
  if (e.kind != ExprKind::Subscript) return base_tag(e, unit, resolver, db);
  if (nesting >= 2) return std::nullopt;
  const Expr* head = e.child(0);
  const Expr* index = e.child(1);
  if (head == nullptr || index == nullptr) return std::nullopt;
  if (head->kind != ExprKind::Name && head->kind != ExprKind::Attribute) return std::nullopt;
  frontend::QualifiedName q = resolver.resolve(unit, *head);
  if (!q.resolved() || !kWrappers.count(q.str())) return std::nullopt;
  bool tuple = q.str() == "typing.Tuple" || q.str() == "builtins.tuple";
  if (tuple && index->kind == ExprKind::Tuple) {
    // Tuple[T, ...] or Tuple[T1, T2]: any tensor element counts.
    for (const auto& element : index->children) {
      if (element->kind == ExprKind::Constant && element->literal == frontend::LiteralKind::Ellipsis) continue;
      if (auto tag = tag_at(*element, unit, resolver, db, nesting + 1)) return tag;
    }
    return std::nullopt;
  }
  return tag_at(*index, unit, resolver, db, nesting + 1);
}

}  // namespace

std::optional<TensorTag> hint_tag(const Expr& annotation, const frontend::SourceUnit& unit,
                                  const frontend::NameResolver& resolver, const summaries::SummaryDb& db) {
  return tag_at(annotation, unit, resolver, db, 0);
}

std::vector<TensorEvidence> infer_hint_evidence(const frontend::FunctionUnit& fn, const frontend::NameResolver& resolver,
                                                const summaries::SummaryDb& db, const ToolConfig& config) {
  std::vector<TensorEvidence> out;
  if (!config.follow_type_hints || fn.unit == nullptr) return out;
  for (std::size_t p = 0; p < fn.params.size(); ++p) {
    const frontend::ParamInfo& param = fn.params[p];
    if (param.is_receiver || param.annotation == nullptr) continue;
    std::optional<TensorTag> tag = hint_tag(*param.annotation, *fn.unit, resolver, db);
    if (!tag) continue;
    TensorEvidence ev;
    ev.param = static_cast<int>(p);
    ev.name = param.name;
    ev.kinds.insert(EvidenceKind::Hint);
    ev.tags.insert(*tag);
    ev.hints.push_back(Location{fn.unit->path, param.annotation->range.begin.line});
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace hybridize::inference
