#pragma once

// Stage orchestration. Every stage writes its artifacts into the cache
// directory and later stages read them back from there, so a run that reuses
// cached artifacts goes through exactly the same bytes as a cold run. A
// stage is skipped when its sidecar key (a digest over its parameters and
// the contents of everything it reads) is unchanged.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "review_miner/analysis.hpp"
#include "review_miner/classifier.hpp"
#include "review_miner/config.hpp"
#include "review_miner/corpus.hpp"
#include "review_miner/digest.hpp"
#include "review_miner/error.hpp"
#include "review_miner/keywords.hpp"
#include "review_miner/lemmatizer.hpp"
#include "review_miner/report.hpp"
#include "review_miner/syntax.hpp"
#include "review_miner/text.hpp"
#include "review_miner/textproc.hpp"

namespace review_miner::pipeline {

enum class Stage { Ingest, Match, Segment, Keywords, Train, Classify, Pairs, Rank, HardSoft, Report };

inline constexpr std::array<Stage, 10> kStages = {Stage::Ingest,   Stage::Match,    Stage::Segment,
                                                  Stage::Keywords, Stage::Train,    Stage::Classify,
                                                  Stage::Pairs,    Stage::Rank,     Stage::HardSoft,
                                                  Stage::Report};

inline std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Ingest: return "ingest";
    case Stage::Match: return "match";
    case Stage::Segment: return "segment";
    case Stage::Keywords: return "keywords";
    case Stage::Train: return "train";
    case Stage::Classify: return "classify";
    case Stage::Pairs: return "pairs";
    case Stage::Rank: return "rank";
    case Stage::HardSoft: return "hardsoft";
    case Stage::Report: return "report";
  }
  return "?";
}

inline std::optional<Stage> stage_from_name(std::string_view name) {
  for (auto s : kStages) {
    if (stage_name(s) == name) return s;
  }
  return std::nullopt;
}

// Bumped whenever an artifact format or stage semantics change.
inline constexpr std::string_view kCacheVersion = "review-miner-cache 1";

// ---------------------------------------------------------------------------
// Artifact formats

// review_id<TAB>index<TAB>hotel_id<TAB>price_bin<TAB>sentiment(pos|neg|-)<TAB>text
inline void write_sentences_tsv(std::ostream& out, std::span<const corpus::SentenceRecord> sentences) {
  for (const auto& s : sentences) {
    out << text::tsv_escape(s.parent_review_id) << '\t' << s.index_in_review << '\t'
        << text::tsv_escape(s.hotel_id) << '\t' << s.price_bin.ordinal << '\t'
        << (s.sentiment ? sentiment_code(*s.sentiment) : std::string_view("-")) << '\t'
        << text::tsv_escape(s.text) << '\n';
  }
}

inline std::vector<corpus::SentenceRecord> read_sentences_tsv(std::istream& in, const std::string& source,
                                                              Language language) {
  std::vector<corpus::SentenceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 6) throw ParseError(source, line_no, "expected 6 columns");
    corpus::SentenceRecord r;
    r.parent_review_id = text::tsv_unescape(cols[0]);
    auto idx = text::parse_int<int>(cols[1]);
    auto bin = text::parse_int<int>(cols[3]);
    if (!idx || !bin || *bin < 1 || *bin > corpus::kPriceBinCount) throw ParseError(source, line_no, "bad sentence row");
    r.index_in_review = *idx;
    r.hotel_id = text::tsv_unescape(cols[2]);
    r.price_bin = corpus::price_bin(*bin);
    if (cols[4] != "-") r.sentiment = sentiment_from_code(cols[4]);
    r.text = text::tsv_unescape(cols[5]);
    r.language = language;
    out.push_back(std::move(r));
  }
  return out;
}

// price_bin<TAB>adjective<TAB>rank<TAB>noun<TAB>count
inline void write_pair_rankings_tsv(std::ostream& out, std::span<const analysis::PairRanking> rankings) {
  out << "price_bin\tadjective\trank\tnoun\tcount\n";
  for (const auto& r : rankings) {
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      out << r.price_bin << '\t' << text::tsv_escape(r.adjective) << '\t' << (i + 1) << '\t'
          << text::tsv_escape(r.entries[i].term) << '\t' << r.entries[i].count << '\n';
    }
  }
}

inline std::vector<analysis::PairRanking> read_pair_rankings_tsv(std::istream& in, const std::string& source,
                                                                 Sentiment sentiment) {
  std::vector<analysis::PairRanking> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line_no == 1) continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 5) throw ParseError(source, line_no, "expected 5 columns");
    auto bin = text::parse_int<int>(cols[0]);
    auto count = text::parse_int<long long>(cols[4]);
    if (!bin || !count) throw ParseError(source, line_no, "bad pair ranking row");
    auto adj = text::tsv_unescape(cols[1]);
    if (out.empty() || out.back().price_bin != *bin || out.back().adjective != adj) {
      out.push_back({adj, *bin, sentiment, {}});
    }
    out.back().entries.push_back({text::tsv_unescape(cols[3]), *count});
  }
  return out;
}

inline std::string rational_string(const analysis::Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// price_bin<TAB>sentiment<TAB>n<TAB>hard<TAB>soft<TAB>undefined, exact percentages
inline void write_hardsoft_tsv(std::ostream& out, std::span<const analysis::HardSoftSummary> summaries) {
  out << "price_bin\tsentiment\tkeywords\thard_pct\tsoft_pct\tundefined_pct\n";
  for (const auto& s : summaries) {
    out << s.price_bin << '\t' << sentiment_code(s.sentiment) << '\t' << s.n_keywords << '\t'
        << rational_string(s.hard_pct) << '\t' << rational_string(s.soft_pct) << '\t'
        << rational_string(s.undefined_pct) << '\n';
  }
}

inline std::vector<analysis::HardSoftSummary> read_hardsoft_tsv(std::istream& in, const std::string& source,
                                                                Language language) {
  std::vector<analysis::HardSoftSummary> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line_no == 1) continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 6) throw ParseError(source, line_no, "expected 6 columns");
    analysis::HardSoftSummary s;
    s.language = language;
    auto bin = text::parse_int<int>(cols[0]);
    auto n = text::parse_int<std::size_t>(cols[2]);
    if (!bin || !n) throw ParseError(source, line_no, "bad summary row");
    s.price_bin = *bin;
    s.sentiment = sentiment_from_code(cols[1]);
    s.n_keywords = *n;
    auto h = analysis::parse_fraction(cols[3]);
    auto so = analysis::parse_fraction(cols[4]);
    auto u = analysis::parse_fraction(cols[5]);
    if (!h || !so || !u) throw ParseError(source, line_no, "bad percentage");
    s.hard_pct = *h;
    s.soft_pct = *so;
    s.undefined_pct = *u;
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct RunOptions {
  std::string cache_dir;          // empty: REVIEW_MINER_CACHE, else <out>/cache
  std::ostream* log = nullptr;    // progress and diagnostics
};

inline std::string default_cache_dir(const config::PipelineConfig& cfg) {
  if (const char* env = std::getenv("REVIEW_MINER_CACHE"); env && *env) return env;
  return (std::filesystem::path(cfg.resolve(cfg.out_dir)) / "cache").string();
}

class Pipeline {
 public:
  Pipeline(config::PipelineConfig cfg, RunOptions options = {})
      : cfg_(std::move(cfg)), options_(std::move(options)) {
    cache_ = options_.cache_dir.empty() ? default_cache_dir(cfg_) : options_.cache_dir;
    out_ = cfg_.resolve(cfg_.out_dir);
  }

  const std::filesystem::path& cache_dir() const { return cache_; }
  const std::filesystem::path& out_dir() const { return out_; }
  const config::PipelineConfig& config() const { return cfg_; }

  // Runs every stage up to and including `last`. Returns the report bundle
  // when the report stage ran.
  std::optional<report::ReportBundle> run(Stage last = Stage::Report) {
    std::error_code ec;
    std::filesystem::create_directories(cache_, ec);
    if (ec) throw DataError("cannot create cache directory " + cache_.string());
    std::optional<report::ReportBundle> bundle;
    for (auto s : kStages) {
      try {
        if (s == Stage::Report) {
          bundle = run_report();
        } else {
          run_stage(s);
        }
      } catch (const ValidationError& e) {
        throw ValidationError("stage " + std::string(stage_name(s)) + ": " + e.what());
      } catch (const DataError& e) {
        throw DataError("stage " + std::string(stage_name(s)) + ": " + e.what());
      } catch (const std::exception& e) {
        throw std::runtime_error("stage " + std::string(stage_name(s)) + ": " + e.what());
      }
      if (s == last) break;
    }
    return bundle;
  }

  std::filesystem::path artifact(const std::string& name) const { return cache_ / name; }

 private:
  static std::string code(Language l) { return std::string(language_code(l)); }

  void log(const std::string& msg) const {
    if (options_.log) *options_.log << msg << '\n';
  }

  std::string read_text(const std::filesystem::path& p) const {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("missing artifact " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::ifstream open(const std::filesystem::path& p) const {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("missing artifact " + p.string());
    return in;
  }

  // Digest of a file's content, memoised per run.
  const std::string& file_digest(const std::string& path) {
    auto it = digests_.find(path);
    if (it == digests_.end()) it = digests_.emplace(path, digest::sha256_file(path)).first;
    return it->second;
  }

  // Stage key: the stage, its parameters and the contents of what it reads.
  std::string stage_key(const std::string& id, const std::vector<std::string>& params,
                        const std::vector<std::string>& reads) {
    digest::Sha256 h;
    h.update(kCacheVersion).update("\n").update(id).update("\n");
    for (const auto& p : params) h.update(p).update("\n");
    for (const auto& r : reads) h.update(file_digest(r)).update("\n");
    return h.hex();
  }

  bool fresh(const std::string& id, const std::string& key, const std::vector<std::string>& outputs) const {
    const auto sidecar = cache_ / (id + ".key");
    if (!std::filesystem::exists(sidecar)) return false;
    for (const auto& o : outputs) {
      if (!std::filesystem::exists(cache_ / o)) return false;
    }
    std::ifstream in(sidecar, std::ios::binary);
    std::string stored;
    std::getline(in, stored);
    return stored == key;
  }

  void store(const std::string& id, const std::string& key,
             const std::vector<std::pair<std::string, std::string>>& outputs) {
    for (const auto& [name, content] : outputs) {
      report::write_file(cache_ / name, content);
      digests_.erase((cache_ / name).string());
    }
    report::write_file(cache_ / (id + ".key"), key + "\n");
  }

  // Runs `produce` unless the cached outputs are current.
  template <typename Produce>
  void cached(const std::string& id, const std::vector<std::string>& params,
              const std::vector<std::string>& reads, const std::vector<std::string>& outputs,
              Produce&& produce) {
    const auto key = stage_key(id, params, reads);
    if (fresh(id, key, outputs)) {
      log(id + ": cached");
      return;
    }
    log(id + ": running");
    store(id, key, produce());
  }

  const textproc::Lemmatizer& lemmatizer(const config::LanguageInputs& in) {
    auto it = lemmatizers_.find(in.language);
    if (it == lemmatizers_.end()) {
      auto lem = in.lemmas.empty() ? textproc::Lemmatizer() : textproc::Lemmatizer::from_file(cfg_.resolve(in.lemmas));
      it = lemmatizers_.emplace(in.language, std::move(lem)).first;
    }
    return it->second;
  }

  std::string path(const std::string& name) const { return (cache_ / name).string(); }

  bool matching_enabled() const { return cfg_.match_hotels && cfg_.languages.size() == 2; }

  void run_stage(Stage s) {
    switch (s) {
      case Stage::Ingest: return ingest();
      case Stage::Match: return match();
      case Stage::Segment: return segment();
      case Stage::Keywords: return select_keywords();
      case Stage::Train: return train();
      case Stage::Classify: return classify();
      case Stage::Pairs: return pairs();
      case Stage::Rank: return rank();
      case Stage::HardSoft: return hardsoft();
      case Stage::Report: return;
    }
  }

  // -- stages ---------------------------------------------------------------

  void ingest() {
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      const auto src = cfg_.resolve(in.reviews);
      cached("ingest_" + l,
             {cfg_.strict ? "strict" : "lenient", cfg_.date_start.to_string(), cfg_.date_end.to_string()},
             {src}, {"ingest_" + l + ".jsonl", "ingest_" + l + ".log"}, [&] {
               auto loaded = corpus::load_reviews(src, corpus::LoadOptions{cfg_.strict});
               std::ostringstream diag;
               for (const auto& d : loaded.diagnostics) diag << d << '\n';
               const auto before = loaded.reviews.size();
               auto kept = corpus::filter_by_date(loaded.reviews, cfg_.date_start, cfg_.date_end);
               diag << "date window " << cfg_.date_start.to_string() << ".." << cfg_.date_end.to_string()
                    << ": kept " << kept.size() << " of " << before << " reviews\n";
               std::ostringstream out;
               for (const auto& r : kept) out << corpus::review_to_json(r).dump() << '\n';
               log(diag.str());
               return std::vector<std::pair<std::string, std::string>>{
                   {"ingest_" + l + ".jsonl", out.str()}, {"ingest_" + l + ".log", diag.str()}};
             });
    }
  }

  std::vector<corpus::Review> ingested(Language lang) {
    const auto p = path("ingest_" + code(lang) + ".jsonl");
    std::ifstream in = open(p);
    std::vector<corpus::Review> out;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) out.push_back(corpus::detail::review_from_json(nlohmann::json::parse(line)));
    }
    return out;
  }

  void match() {
    if (!matching_enabled()) {
      log("match: skipped (needs both languages and match = true)");
      return;
    }
    cached("match", {}, {path("ingest_zh.jsonl"), path("ingest_en.jsonl")}, {"match.tsv"}, [&] {
      const auto join = corpus::match_hotels(ingested(Language::Chinese), ingested(Language::English));
      std::ostringstream out;
      for (const auto& m : join.matched) {
        out << "matched\t" << text::tsv_escape(m.hotel_id_a) << '\t' << text::tsv_escape(m.hotel_id_b) << '\t'
            << text::tsv_escape(m.canonical_name) << '\n';
      }
      for (const auto& id : join.unmatched_a) out << "unmatched_zh\t" << text::tsv_escape(id) << '\n';
      for (const auto& id : join.unmatched_b) out << "unmatched_en\t" << text::tsv_escape(id) << '\n';
      for (const auto& d : join.diagnostics) {
        out << "diagnostic\t" << text::tsv_escape(d) << '\n';
        log("match: " + d);
      }
      return std::vector<std::pair<std::string, std::string>>{{"match.tsv", out.str()}};
    });
  }

  std::set<std::string> matched_hotels(Language lang) {
    std::set<std::string> ids;
    std::ifstream in = open(path("match.tsv"));
    std::string line;
    while (std::getline(in, line)) {
      auto cols = text::split(line, '\t');
      if (cols.size() == 4 && cols[0] == "matched") {
        ids.insert(text::tsv_unescape(lang == Language::Chinese ? cols[1] : cols[2]));
      }
    }
    return ids;
  }

  void segment() {
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      std::vector<std::string> reads = {path("ingest_" + l + ".jsonl")};
      if (matching_enabled()) reads.push_back(path("match.tsv"));
      cached("segment_" + l, {cfg_.strict ? "strict" : "lenient", matching_enabled() ? "match" : "all"},
             reads, {"segment_" + l + ".tsv", "segment_" + l + ".log"}, [&] {
               auto reviews = ingested(in.language);
               if (matching_enabled()) reviews = corpus::filter_by_hotels(reviews, matched_hotels(in.language));
               std::vector<corpus::SentenceRecord> sentences;
               std::ostringstream diag;
               std::size_t skipped = 0;
               for (const auto& r : reviews) {
                 if (r.language != in.language) {
                   const auto msg = "review " + r.review_id + " is " + code(r.language) + ", expected " + l;
                   if (cfg_.strict) throw DataError(msg);
                   diag << msg << '\n';
                   ++skipped;
                   continue;
                 }
                 try {
                   auto parts = corpus::split_sentences(r);
                   sentences.insert(sentences.end(), parts.begin(), parts.end());
                 } catch (const DataError& e) {
                   if (cfg_.strict) throw;
                   diag << "review " << r.review_id << ": " << e.what() << '\n';
                   ++skipped;
                 }
               }
               diag << "segmented " << reviews.size() - skipped << " reviews into " << sentences.size()
                    << " sentences; skipped " << skipped << '\n';
               log(diag.str());
               std::ostringstream out;
               write_sentences_tsv(out, sentences);
               return std::vector<std::pair<std::string, std::string>>{
                   {"segment_" + l + ".tsv", out.str()}, {"segment_" + l + ".log", diag.str()}};
             });
    }
  }

  std::vector<textproc::LabeledSentence> training(const config::LanguageInputs& in) {
    return classifier::read_training_tsv(cfg_.resolve(in.training), in.language, lemmatizer(in));
  }

  std::vector<std::string> lemma_reads(const config::LanguageInputs& in) const {
    if (in.lemmas.empty()) return {};
    return {cfg_.resolve(in.lemmas)};
  }

  static std::string grid_string(const std::vector<double>& g) {
    std::string s;
    for (double v : g) s += text::format_roundtrip(v) + ",";
    return s;
  }

  void select_keywords() {
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      auto reads = lemma_reads(in);
      reads.push_back(cfg_.resolve(in.training));
      cached("keywords_" + l,
             {grid_string(cfg_.alpha_grid), grid_string(cfg_.alpha_prime_grid), grid_string(cfg_.c_grid),
              std::to_string(in.k), std::to_string(cfg_.seed)},
             reads, {"grid_" + l + ".tsv", "keywords_" + l + ".tsv"}, [&] {
               const auto labeled = training(in);
               const auto grid = classifier::grid_search(labeled, cfg_.alpha_grid, cfg_.alpha_prime_grid,
                                                         cfg_.c_grid, in.k, cfg_.seed);
               const auto& best = grid.best();
               const auto table = keywords::entropy_table(textproc::term_class_counts(labeled));
               const auto set = keywords::select_keywords(table, best.alpha, best.alpha_prime);
               std::ostringstream g, k;
               classifier::write_grid_tsv(g, grid);
               keywords::write_keyword_set(k, set, table);
               log("keywords_" + l + ": best alpha=" + text::format_roundtrip(best.alpha) +
                   " alpha'=" + text::format_roundtrip(best.alpha_prime) + " C=" + text::format_roundtrip(best.C) +
                   " F1=" + text::format_fixed(best.cv.mean_f1, 4));
               return std::vector<std::pair<std::string, std::string>>{{"grid_" + l + ".tsv", g.str()},
                                                                       {"keywords_" + l + ".tsv", k.str()}};
             });
    }
  }

  classifier::GridSearchResult grid(Language lang) {
    auto in = open(path("grid_" + code(lang) + ".tsv"));
    return classifier::read_grid_tsv(in, path("grid_" + code(lang) + ".tsv"));
  }

  keywords::KeywordSet keyword_set(Language lang) {
    auto in = open(path("keywords_" + code(lang) + ".tsv"));
    return keywords::read_keyword_set(in, path("keywords_" + code(lang) + ".tsv")).set;
  }

  void train() {
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      auto reads = lemma_reads(in);
      reads.push_back(cfg_.resolve(in.training));
      reads.push_back(path("grid_" + l + ".tsv"));
      cached("train_" + l, {std::to_string(cfg_.seed)}, reads, {"model_" + l + ".txt"}, [&] {
        const auto best = grid(in.language).best();
        const auto model = classifier::train_final_model(training(in), best.alpha, best.alpha_prime, best.C,
                                                         cfg_.seed, in.language);
        std::ostringstream out;
        classifier::write_model(out, model);
        return std::vector<std::pair<std::string, std::string>>{{"model_" + l + ".txt", out.str()}};
      });
    }
  }

  classifier::SvcModel model(Language lang) {
    auto in = open(path("model_" + code(lang) + ".txt"));
    return classifier::read_model(in, path("model_" + code(lang) + ".txt"));
  }

  std::vector<corpus::SentenceRecord> sentences(const std::string& name, Language lang) {
    auto in = open(path(name));
    return read_sentences_tsv(in, path(name), lang);
  }

  void classify() {
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      auto reads = lemma_reads(in);
      reads.push_back(path("model_" + l + ".txt"));
      reads.push_back(path("segment_" + l + ".tsv"));
      cached("classify_" + l, {}, reads, {"classified_" + l + ".tsv"}, [&] {
        const auto records = sentences("segment_" + l + ".tsv", in.language);
        const auto classified = analysis::classify_corpus(model(in.language), records, lemmatizer(in));
        std::vector<corpus::SentenceRecord> out_records;
        out_records.reserve(classified.size());
        for (const auto& c : classified) out_records.push_back(c.record);
        std::ostringstream out;
        write_sentences_tsv(out, out_records);
        return std::vector<std::pair<std::string, std::string>>{{"classified_" + l + ".tsv", out.str()}};
      });
    }
  }

  std::vector<analysis::ClassifiedSentence> classified(const config::LanguageInputs& in) {
    auto records = sentences("classified_" + code(in.language) + ".tsv", in.language);
    std::vector<analysis::ClassifiedSentence> out;
    out.reserve(records.size());
    for (auto& r : records) {
      auto tokens = textproc::tokenize(r.text, in.language, lemmatizer(in));
      out.push_back({std::move(r), std::move(tokens)});
    }
    return out;
  }

  void pairs() {
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      cached("pairs_" + l, {cfg_.universal_tags ? "upos" : "xpos"}, {cfg_.resolve(in.conllu)}, {"pairs_" + l + ".tsv"},
             [&] {
               const auto policy =
                   cfg_.universal_tags ? syntax::TagPolicy::universal() : syntax::TagPolicy::defaults(in.language);
               policy.validate();
               std::vector<syntax::AspectPair> all;
               for (const auto& sentence : syntax::read_conllu(cfg_.resolve(in.conllu))) {
                 auto ps = syntax::extract_pairs(sentence, policy, in.language);
                 all.insert(all.end(), ps.begin(), ps.end());
               }
               std::ostringstream out;
               syntax::write_pairs_tsv(out, all);
               return std::vector<std::pair<std::string, std::string>>{{"pairs_" + l + ".tsv", out.str()}};
             });
    }
  }

  std::vector<syntax::AspectPair> extracted_pairs(Language lang) {
    auto in = open(path("pairs_" + code(lang) + ".tsv"));
    return syntax::read_pairs_tsv(in, path("pairs_" + code(lang) + ".tsv"));
  }

  static std::string ranking_file(const std::string& prefix, const std::string& l, Sentiment s) {
    return prefix + "_" + l + "_" + std::string(sentiment_code(s)) + ".tsv";
  }

  void rank() {
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      auto reads = lemma_reads(in);
      reads.push_back(path("classified_" + l + ".tsv"));
      reads.push_back(path("keywords_" + l + ".tsv"));
      reads.push_back(path("pairs_" + l + ".tsv"));
      cached("rank_" + l, {cfg_.count_mode == analysis::CountMode::Tokens ? "tokens" : "sentences"}, reads,
             {ranking_file("rank", l, Sentiment::Positive), ranking_file("rank", l, Sentiment::Negative),
              ranking_file("pairrank", l, Sentiment::Positive), ranking_file("pairrank", l, Sentiment::Negative)},
             [&] {
               const auto corpus = classified(in);
               const auto set = keyword_set(in.language);
               const auto pairs = extracted_pairs(in.language);
               const analysis::SentenceLookup lookup(corpus);
               std::vector<std::pair<std::string, std::string>> files;
               for (auto s : {Sentiment::Positive, Sentiment::Negative}) {
                 std::vector<analysis::KeywordRanking> rankings;
                 std::vector<analysis::PairRanking> pair_rankings;
                 const auto& list = s == Sentiment::Positive ? set.positive : set.negative;
                 std::set<std::string> modifiers;
                 for (const auto& p : pairs) modifiers.insert(p.modifier);
                 for (int b = 0; b <= corpus::kPriceBinCount; ++b) {
                   rankings.push_back(analysis::rank_keywords(corpus, set, b, s, cfg_.count_mode, in.language));
                   for (const auto& kw : list) {
                     if (!modifiers.count(kw)) continue;
                     auto pr = analysis::top_pairs(kw, pairs, lookup, b, s);
                     if (!pr.entries.empty()) pair_rankings.push_back(std::move(pr));
                   }
                 }
                 std::ostringstream r, p;
                 analysis::write_rankings_tsv(r, rankings);
                 write_pair_rankings_tsv(p, pair_rankings);
                 files.emplace_back(ranking_file("rank", l, s), r.str());
                 files.emplace_back(ranking_file("pairrank", l, s), p.str());
               }
               return files;
             });
    }
  }

  std::vector<analysis::KeywordRanking> rankings(Language lang, Sentiment s) {
    const auto p = path(ranking_file("rank", code(lang), s));
    auto in = open(p);
    return analysis::read_rankings_tsv(in, p, lang, s);
  }

  std::vector<analysis::PairRanking> pair_rankings(Language lang, Sentiment s) {
    const auto p = path(ranking_file("pairrank", code(lang), s));
    auto in = open(p);
    return read_pair_rankings_tsv(in, p, s);
  }

  void hardsoft() {
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      std::vector<std::string> reads = {path(ranking_file("rank", l, Sentiment::Positive)),
                                        path(ranking_file("rank", l, Sentiment::Negative))};
      if (!in.lexicon.empty()) reads.push_back(cfg_.resolve(in.lexicon));
      cached("hardsoft_" + l, {in.lexicon.empty() ? "no-lexicon" : "lexicon"}, reads, {"hardsoft_" + l + ".tsv"},
             [&] {
               std::vector<analysis::HardSoftSummary> summaries;
               if (!in.lexicon.empty()) {
                 const auto lexicon = analysis::load_attribute_lexicon(cfg_.resolve(in.lexicon));
                 for (auto s : {Sentiment::Positive, Sentiment::Negative}) {
                   for (const auto& r : rankings(in.language, s)) {
                     if (!r.entries.empty()) summaries.push_back(analysis::aggregate_hard_soft(r, lexicon));
                   }
                 }
               } else {
                 log("hardsoft_" + l + ": no lexicon configured, section left empty");
               }
               std::ostringstream out;
               write_hardsoft_tsv(out, summaries);
               return std::vector<std::pair<std::string, std::string>>{{"hardsoft_" + l + ".tsv", out.str()}};
             });
    }
  }

  report::ReportBundle run_report() {
    report::ReportBundle bundle;
    bundle.settings = cfg_.settings;
    bundle.settings.erase("out");  // where the report lands is not part of its content
    for (const auto& in : cfg_.languages) {
      const auto l = code(in.language);
      const std::vector<std::pair<std::string, std::string>> keyed = {
          {l + ".reviews", in.reviews}, {l + ".training", in.training}, {l + ".conllu", in.conllu},
          {l + ".lexicon", in.lexicon}, {l + ".lemmas", in.lemmas}};
      for (const auto& [key, p] : keyed) {
        if (!p.empty()) bundle.inputs.push_back({key, p, file_digest(cfg_.resolve(p))});
      }

      report::LanguageReport lr;
      lr.language = in.language;
      lr.grid = grid(in.language);
      lr.keywords = keyword_set(in.language);
      lr.counts = analysis::count_classifications(classified(in));
      for (auto s : {Sentiment::Positive, Sentiment::Negative}) {
        for (auto& r : rankings(in.language, s)) lr.keyword_rankings.push_back(std::move(r));
        for (auto& r : pair_rankings(in.language, s)) lr.pair_rankings.push_back(std::move(r));
      }
      auto hs = open(path("hardsoft_" + l + ".tsv"));
      lr.hardsoft = read_hardsoft_tsv(hs, path("hardsoft_" + l + ".tsv"), in.language);
      lr.has_lexicon = !in.lexicon.empty();
      bundle.languages.push_back(std::move(lr));
    }
    report::emit_report(bundle, cfg_.format, out_);
    log("report: written to " + out_.string());
    return bundle;
  }

  config::PipelineConfig cfg_;
  RunOptions options_;
  std::filesystem::path cache_;
  std::filesystem::path out_;
  std::map<std::string, std::string> digests_;
  std::map<Language, textproc::Lemmatizer> lemmatizers_;
};

inline report::ReportBundle run_pipeline(const config::PipelineConfig& cfg, RunOptions options = {}) {
  Pipeline p(cfg, std::move(options));
  return *p.run(Stage::Report);
}

}  // namespace review_miner::pipeline
