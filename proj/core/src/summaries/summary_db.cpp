#include "hybridize/summaries/summary_db.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace hybridize::summaries {

extern const char* const kDefaultSummaries;

const char* to_string(GeneratorKind kind) {
  return kind == GeneratorKind::Tensor ? "tensor" : "dataset";
}

const char* to_string(Effect effect) {
  switch (effect) {
    case Effect::ExternalSideEffect: return "external";
    case Effect::MutatesReceiver: return "mutates-receiver";
    case Effect::Pure: return "pure";
  }
  return "?";
}

std::string canonical_api(std::string_view api) {
  if (api == "tf") return "tensorflow";
  if (api.substr(0, 3) == "tf.") return "tensorflow." + std::string(api.substr(3));
  return std::string(api);
}

namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) words.emplace_back(line.substr(start, i - start));
  }
  return words;
}

bool valid_api(std::string_view api) {
  if (api.empty() || api.front() == '.' || api.back() == '.') return false;
  if (api.find("..") != std::string_view::npos) return false;
  for (std::size_t i = 0; i < api.size(); ++i) {
    char c = api[i];
    if (c == '*') {
      if (i + 1 != api.size() || i == 0 || api[i - 1] != '.') return false;
      continue;
    }
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  }
  return true;
}

std::string format_weight(double w) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, end);
}

class FileParser {
 public:
  FileParser(std::string_view source) : source_(source) {}

  void run(std::string_view text, std::map<std::string, GeneratorSpec, std::less<>>& gens,
           std::map<std::string, EffectSpec, std::less<>>& effects, std::vector<KeywordSpec>& keywords) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_;
      if (std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      std::vector<std::string> words = split_words(line);
      if (!words.empty()) entry(words, gens, effects, keywords);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw SummaryError(std::string(source_) + ":" + std::to_string(line_) + ": " + message);
  }

  std::string api(const std::string& word) const {
    if (!valid_api(word)) fail("malformed api name '" + word + "'");
    return canonical_api(word);
  }

  void claim(const std::string& name) {
    if (!seen_.insert(name).second) fail("duplicate entry '" + name + "'");
  }

  void entry(const std::vector<std::string>& words, std::map<std::string, GeneratorSpec, std::less<>>& gens,
             std::map<std::string, EffectSpec, std::less<>>& effects, std::vector<KeywordSpec>& keywords) {
    const std::string& directive = words[0];
    if (words.size() < 2) fail("missing name after '" + directive + "'");
    if (directive == "generator") {
      GeneratorSpec spec;
      spec.api = api(words[1]);
      if (spec.api.back() == '*') fail("wildcards are not allowed in generator entries");
      claim("generator " + spec.api);
      bool has_kind = false;
      bool has_tensorlike = false;
      for (std::size_t i = 2; i < words.size(); ++i) {
        const std::string& w = words[i];
        std::size_t eq = w.find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + w + "'");
        std::string key = w.substr(0, eq);
        std::string value = w.substr(eq + 1);
        if (key == "alias") {
          std::size_t start = 0;
          while (start <= value.size()) {
            std::size_t comma = value.find(',', start);
            std::string a = api(value.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            claim("generator " + a);
            spec.aliases.push_back(a);
            if (comma == std::string::npos) break;
            start = comma + 1;
          }
        } else if (key == "kind") {
          if (value == "tensor") {
            spec.kind = GeneratorKind::Tensor;
          } else if (value == "dataset") {
            spec.kind = GeneratorKind::Dataset;
          } else {
            fail("kind must be tensor or dataset");
          }
          has_kind = true;
        } else if (key == "tensorlike") {
          if (value != "true" && value != "false") fail("tensorlike must be true or false");
          spec.tensor_like = value == "true";
          has_tensorlike = true;
        } else {
          fail("unknown generator attribute '" + key + "'");
        }
      }
      if (!has_kind) fail("generator entry lacks kind=");
      if (!has_tensorlike) fail("generator entry lacks tensorlike=");
      gens[spec.api] = spec;
      return;
    }
    if (directive == "effect") {
      if (words.size() != 3) fail("expected 'effect <api> external|mutates-receiver|pure'");
      EffectSpec spec;
      spec.api = api(words[1]);
      claim("effect " + spec.api);
      if (words[2] == "external") {
        spec.effect = Effect::ExternalSideEffect;
      } else if (words[2] == "mutates-receiver") {
        spec.effect = Effect::MutatesReceiver;
      } else if (words[2] == "pure") {
        spec.effect = Effect::Pure;
      } else {
        fail("unknown effect '" + words[2] + "'");
      }
      effects[spec.api] = spec;
      return;
    }
    if (directive == "keyword") {
      if (words.size() != 3 || words[2].rfind("weight=", 0) != 0) fail("expected 'keyword <token> weight=<float>'");
      KeywordSpec spec;
      spec.token = words[1];
      claim("keyword " + spec.token);
      std::string value = words[2].substr(7);
      auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), spec.weight);
      if (ec != std::errc() || end != value.data() + value.size()) fail("malformed weight '" + value + "'");
      keywords.push_back(spec);
      return;
    }
    fail("unknown directive '" + directive + "'");
  }

  std::string_view source_;
  std::size_t line_ = 0;
  std::set<std::string> seen_;
};

}  // namespace

SummaryDb SummaryDb::parse(std::string_view text, std::string_view source) {
  SummaryDb db;
  std::map<std::string, GeneratorSpec, std::less<>> gens;
  std::map<std::string, EffectSpec, std::less<>> effects;
  std::vector<KeywordSpec> keywords;
  FileParser(source).run(text, gens, effects, keywords);
  for (auto& [api, spec] : gens) {
    for (const std::string& a : spec.aliases) db.alias_of_[a] = api;
    db.generators_.emplace(api, spec);
  }
  db.effects_ = std::move(effects);
  db.keywords_ = std::move(keywords);
  return db;
}

const SummaryDb& SummaryDb::defaults() {
  static const SummaryDb db = parse(kDefaultSummaries, "<defaults>");
  return db;
}

void SummaryDb::merge(const SummaryDb& other) {
  for (const auto& [api, spec] : other.generators_) {
    auto old = generators_.find(api);
    if (old != generators_.end()) {
      for (const std::string& a : old->second.aliases) alias_of_.erase(a);
    }
    generators_[api] = spec;
    for (const std::string& a : spec.aliases) alias_of_[a] = api;
  }
  for (const auto& [api, spec] : other.effects_) effects_[api] = spec;
  for (const KeywordSpec& k : other.keywords_) {
    auto it = std::find_if(keywords_.begin(), keywords_.end(),
                           [&](const KeywordSpec& mine) { return mine.token == k.token; });
    if (it != keywords_.end()) {
      *it = k;
    } else {
      keywords_.push_back(k);
    }
  }
}

const GeneratorSpec* SummaryDb::generator(std::string_view api) const {
  std::string name = canonical_api(api);
  if (auto it = generators_.find(name); it != generators_.end()) return &it->second;
  if (auto a = alias_of_.find(name); a != alias_of_.end()) {
    if (auto it = generators_.find(a->second); it != generators_.end()) return &it->second;
  }
  return nullptr;
}

const EffectSpec* SummaryDb::effect(std::string_view api) const {
  std::string name = canonical_api(api);
  if (auto it = effects_.find(name); it != effects_.end()) return &it->second;
  for (std::size_t dot = name.rfind('.'); dot != std::string::npos; dot = name.rfind('.', dot - 1)) {
    std::string pattern = name.substr(0, dot) + ".*";
    if (auto it = effects_.find(pattern); it != effects_.end()) return &it->second;
    if (dot == 0) break;
  }
  return nullptr;
}

bool SummaryDb::knows(std::string_view api) const {
  // A package root is known when the summaries cover its members.
  return generator(api) != nullptr || effect(api) != nullptr || effect(std::string(api) + ".*") != nullptr;
}

std::vector<std::string> SummaryDb::matching_keywords(std::string_view function_name) const {
  std::string lowered(function_name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::vector<std::string> out;
  for (const KeywordSpec& k : keywords_) {
    if (k.weight <= 0) continue;
    std::string token = k.token;
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!token.empty() && lowered.find(token) != std::string::npos) out.push_back(k.token);
  }
  return out;
}

std::string SummaryDb::format() const {
  std::string out;
  for (const auto& [api, spec] : generators_) {
    out += "generator " + api;
    for (std::size_t i = 0; i < spec.aliases.size(); ++i) {
      out += i == 0 ? " alias=" : ",";
      out += spec.aliases[i];
    }
    out += std::string(" kind=") + to_string(spec.kind);
    out += spec.tensor_like ? " tensorlike=true\n" : " tensorlike=false\n";
  }
  for (const auto& [api, spec] : effects_) out += "effect " + api + " " + to_string(spec.effect) + "\n";
  for (const KeywordSpec& k : keywords_) out += "keyword " + k.token + " weight=" + format_weight(k.weight) + "\n";
  return out;
}

SummaryDb load_summaries(const std::vector<std::filesystem::path>& paths) {
  SummaryDb db = SummaryDb::defaults();
  for (const std::filesystem::path& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw SummaryError(p.string() + ": cannot read summary file");
    std::ostringstream text;
    text << in.rdbuf();
    db.merge(SummaryDb::parse(text.str(), p.string()));
  }
  return db;
}

std::optional<GeneratorSpec> lookup_generator(const SummaryDb& db, std::string_view api) {
  if (const GeneratorSpec* spec = db.generator(api)) return *spec;
  return std::nullopt;
}

std::optional<EffectSpec> lookup_effect(const SummaryDb& db, std::string_view api) {
  if (const EffectSpec* spec = db.effect(api)) return *spec;
  return std::nullopt;
}

}  // namespace hybridize::summaries
