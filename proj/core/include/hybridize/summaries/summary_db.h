#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hybridize::summaries {

enum class GeneratorKind : std::uint8_t { Tensor, Dataset };

const char* to_string(GeneratorKind kind);

/// A library API whose result is a fresh tensor (or a dataset of tensors).
struct GeneratorSpec {
  std::string api;  // canonical, e.g. `tensorflow.ones`
  std::vector<std::string> aliases;
  GeneratorKind kind = GeneratorKind::Tensor;
  bool tensor_like = false;

  bool operator==(const GeneratorSpec&) const = default;
};

enum class Effect : std::uint8_t { ExternalSideEffect, MutatesReceiver, Pure };

const char* to_string(Effect effect);

/// Effect classification of a library API. `api` may end in `.*`, which
/// matches every name below that prefix.
struct EffectSpec {
  std::string api;
  Effect effect = Effect::Pure;

  bool operator==(const EffectSpec&) const = default;
};

struct KeywordSpec {
  std::string token;
  double weight = 1.0;

  bool operator==(const KeywordSpec&) const = default;
};

/// Malformed summary file; the message names the file and line.
class SummaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SummaryDb {
 public:
  /// The built-in database.
  static const SummaryDb& defaults();

  /// Parses one summary file. `source` names it in error messages.
  static SummaryDb parse(std::string_view text, std::string_view source = "<summary>");

  /// Adds or overrides entries of `other`, keyed by api name (or token).
  void merge(const SummaryDb& other);

  /// Spec for `api` or any of its aliases.
  const GeneratorSpec* generator(std::string_view api) const;
  /// Exact entry first, then the longest matching wildcard.
  const EffectSpec* effect(std::string_view api) const;
  /// True when `api` has a generator or effect entry (wildcards included).
  bool knows(std::string_view api) const;

  const std::map<std::string, GeneratorSpec, std::less<>>& generators() const { return generators_; }
  const std::map<std::string, EffectSpec, std::less<>>& effects() const { return effects_; }
  const std::vector<KeywordSpec>& keywords() const { return keywords_; }

  /// Keywords contained, case-insensitively, in `function_name`.
  std::vector<std::string> matching_keywords(std::string_view function_name) const;

  /// Rendering in the summary file format; `parse(format())` yields an
  /// equal database.
  std::string format() const;

  bool operator==(const SummaryDb&) const = default;

 private:
  std::map<std::string, GeneratorSpec, std::less<>> generators_;
  std::map<std::string, std::string, std::less<>> alias_of_;
  std::map<std::string, EffectSpec, std::less<>> effects_;
  std::vector<KeywordSpec> keywords_;
};

/// Spells `tf.` prefixes out as `tensorflow.`.
std::string canonical_api(std::string_view api);

/// Defaults merged with each file of `paths` in order. Throws SummaryError.
SummaryDb load_summaries(const std::vector<std::filesystem::path>& paths);

std::optional<GeneratorSpec> lookup_generator(const SummaryDb& db, std::string_view api);
std::optional<EffectSpec> lookup_effect(const SummaryDb& db, std::string_view api);

}  // namespace hybridize::summaries
