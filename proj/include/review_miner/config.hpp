#pragma once

// Layered key=value configuration: built-in defaults, then a config file,
// then command-line overrides. Relative input paths resolve against the
// directory of the config file.

#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "review_miner/analysis.hpp"
#include "review_miner/corpus.hpp"
#include "review_miner/error.hpp"
#include "review_miner/text.hpp"
#include "review_miner/types.hpp"

namespace review_miner::config {

using Settings = std::map<std::string, std::string>;

inline Settings default_settings() {
  return {
      {"seed", "42"},
      {"out", "out"},
      {"date.start", "2014-07-01"},
      {"date.end", "2017-07-31"},
      {"grid.alpha", "1.25:6.00:0.25"},
      {"grid.alpha_prime", "1.25:6.00:0.25"},
      {"grid.C", "0.25:4.00:0.25"},
      {"count_mode", "tokens"},
      {"strict", "false"},
      {"format", "markdown"},
      {"tags", "xpos"},
      {"match", "true"},
      {"zh.k", "5"},
      {"en.k", "10"},
  };
}

// Lines are "key = value"; '#' starts a comment line.
inline void read_settings(std::istream& in, const std::string& source, Settings& into) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ValidationError(source + ":" + std::to_string(line_no) + ": expected key = value");
    auto key = std::string(text::trim(body.substr(0, eq)));
    if (key.empty()) throw ValidationError(source + ":" + std::to_string(line_no) + ": empty key");
    into[key] = std::string(text::trim(body.substr(eq + 1)));
  }
}

// "a,b,c" or "start:end:step" (inclusive end).
inline std::vector<double> parse_grid(std::string_view spec, const std::string& key) {
  std::vector<double> out;
  spec = text::trim(spec);
  if (spec.empty()) return out;
  if (spec.find(':') != std::string_view::npos) {
    auto parts = text::split(spec, ':');
    if (parts.size() != 3) throw ValidationError(key + ": range must be start:end:step");
    auto a = text::parse_double(parts[0]);
    auto b = text::parse_double(parts[1]);
    auto s = text::parse_double(parts[2]);
    if (!a || !b || !s || !(*s > 0) || *b < *a) throw ValidationError(key + ": bad range '" + std::string(spec) + "'");
    const auto n = static_cast<long long>((*b - *a) / *s + 1e-9);
    for (long long i = 0; i <= n; ++i) out.push_back(*a + static_cast<double>(i) * *s);
    return out;
  }
  for (const auto& part : text::split(spec, ',')) {
    auto v = text::parse_double(part);
    if (!v) throw ValidationError(key + ": bad number '" + part + "'");
    out.push_back(*v);
  }
  return out;
}

inline bool parse_bool(const std::string& value, const std::string& key) {
  auto v = text::ascii_lower(value);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ValidationError(key + ": expected true or false, got '" + value + "'");
}

enum class ReportFormat { Markdown, Tsv };

struct LanguageInputs {
  Language language = Language::Other;
  std::string reviews;   // JSON lines
  std::string training;  // label<TAB>sentence
  std::string conllu;
  std::string lexicon;   // attribute lexicon, optional
  std::string lemmas;    // lemma exception table, English only, optional
  int k = 5;

  bool enabled() const { return !reviews.empty(); }
};

struct PipelineConfig {
  Settings settings;        // effective key/values, echoed in the manifest
  std::filesystem::path base_dir;
  std::vector<LanguageInputs> languages;  // zh before en
  corpus::Date date_start;
  corpus::Date date_end;
  std::vector<double> alpha_grid;
  std::vector<double> alpha_prime_grid;
  std::vector<double> c_grid;
  std::uint64_t seed = 42;
  std::string out_dir;
  analysis::CountMode count_mode = analysis::CountMode::Tokens;
  bool strict = false;
  bool match_hotels = true;
  bool universal_tags = false;
  ReportFormat format = ReportFormat::Markdown;

  // Absolute or base-relative path of a configured file.
  std::string resolve(const std::string& path) const {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    return p.is_absolute() ? p.string() : (base_dir / p).lexically_normal().string();
  }

  const LanguageInputs* inputs(Language lang) const {
    for (const auto& l : languages) {
      if (l.language == lang) return &l;
    }
    return nullptr;
  }
};

inline PipelineConfig build_config(const Settings& settings, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  c.settings = settings;
  c.base_dir = base_dir;
  auto get = [&](const std::string& key) -> std::string {
    auto it = settings.find(key);
    return it == settings.end() ? std::string() : it->second;
  };

  static const std::set<std::string> kKnown = {
      "seed", "out", "date.start", "date.end", "grid.alpha", "grid.alpha_prime", "grid.C",
      "count_mode", "strict", "format", "tags", "match"};
  for (const auto& [key, value] : settings) {
    if (kKnown.count(key)) continue;
    auto dot = key.find('.');
    if (dot != std::string::npos) {
      auto prefix = key.substr(0, dot);
      auto field = key.substr(dot + 1);
      static const std::set<std::string> kFields = {"reviews", "training", "conllu", "lexicon", "lemmas", "k"};
      if ((prefix == "zh" || prefix == "en") && kFields.count(field)) continue;
    }
    throw ValidationError("unknown configuration key '" + key + "'");
  }

  auto seed = text::parse_int<std::uint64_t>(get("seed"));
  if (!seed) throw ValidationError("seed must be a non-negative integer");
  c.seed = *seed;
  c.out_dir = get("out");
  if (c.out_dir.empty()) throw ValidationError("out must be set");

  auto start = corpus::Date::parse(get("date.start"));
  auto end = corpus::Date::parse(get("date.end"));
  if (!start || !end) throw ValidationError("date.start and date.end must be YYYY-MM-DD");
  if (*end < *start) throw ValidationError("date.end is before date.start");
  c.date_start = *start;
  c.date_end = *end;

  c.alpha_grid = parse_grid(get("grid.alpha"), "grid.alpha");
  c.alpha_prime_grid = parse_grid(get("grid.alpha_prime"), "grid.alpha_prime");
  c.c_grid = parse_grid(get("grid.C"), "grid.C");
  if (c.alpha_grid.empty()) throw ValidationError("grid.alpha is empty");
  if (c.alpha_prime_grid.empty()) throw ValidationError("grid.alpha_prime is empty");
  if (c.c_grid.empty()) throw ValidationError("grid.C is empty");
  for (double a : c.alpha_grid) {
    if (!(a >= 1.0)) throw ValidationError("grid.alpha values must be >= 1");
  }
  for (double a : c.alpha_prime_grid) {
    if (!(a >= 1.0)) throw ValidationError("grid.alpha_prime values must be >= 1");
  }
  for (double v : c.c_grid) {
    if (!(v > 0.0)) throw ValidationError("grid.C values must be > 0");
  }

  const auto mode = get("count_mode");
  if (mode == "tokens") {
    c.count_mode = analysis::CountMode::Tokens;
  } else if (mode == "sentences") {
    c.count_mode = analysis::CountMode::Sentences;
  } else {
    throw ValidationError("count_mode must be tokens or sentences");
  }
  c.strict = parse_bool(get("strict"), "strict");
  c.match_hotels = parse_bool(get("match"), "match");
  const auto tags = get("tags");
  if (tags != "xpos" && tags != "upos") throw ValidationError("tags must be xpos or upos");
  c.universal_tags = tags == "upos";
  const auto format = get("format");
  if (format == "markdown") {
    c.format = ReportFormat::Markdown;
  } else if (format == "tsv") {
    c.format = ReportFormat::Tsv;
  } else {
    throw ValidationError("format must be markdown or tsv");
  }

  for (auto lang : {Language::Chinese, Language::English}) {
    const std::string p(language_code(lang));
    LanguageInputs in;
    in.language = lang;
    in.reviews = get(p + ".reviews");
    in.training = get(p + ".training");
    in.conllu = get(p + ".conllu");
    in.lexicon = get(p + ".lexicon");
    in.lemmas = get(p + ".lemmas");
    auto k = text::parse_int<int>(get(p + ".k"));
    if (!k || *k < 2) throw ValidationError(p + ".k must be an integer >= 2");
    in.k = *k;
    if (!in.enabled()) continue;
    if (in.training.empty()) throw ValidationError(p + ".training is required when " + p + ".reviews is set");
    if (in.conllu.empty()) throw ValidationError(p + ".conllu is required when " + p + ".reviews is set");
    c.languages.push_back(std::move(in));
  }
  if (c.languages.empty()) throw ValidationError("no language configured (set zh.reviews or en.reviews)");
  return c;
}

// defaults < file < overrides
inline PipelineConfig load_config(const std::optional<std::string>& path, const Settings& overrides) {
  Settings s = default_settings();
  std::filesystem::path base = std::filesystem::current_path();
  if (path) {
    std::ifstream in(*path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file " + *path);
    read_settings(in, *path, s);
    base = std::filesystem::absolute(*path).parent_path();
  }
  for (const auto& [k, v] : overrides) s[k] = v;
  return build_config(s, base);
}

}  // namespace review_miner::config
