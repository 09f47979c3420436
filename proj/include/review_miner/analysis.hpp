#pragma once

// Corpus-level analysis: sentiment classification of segmented sentences,
// keyword frequency rankings and adjective pairings per price bin, and
// hard/soft attribute aggregation over ranked keywords.

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/rational.hpp>

#include "review_miner/classifier.hpp"
#include "review_miner/corpus.hpp"
#include "review_miner/error.hpp"
#include "review_miner/syntax.hpp"
#include "review_miner/text.hpp"
#include "review_miner/textproc.hpp"
#include "review_miner/types.hpp"

namespace review_miner::analysis {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// ---------------------------------------------------------------------------
// Classification

struct ClassifiedSentence {
  corpus::SentenceRecord record;
  std::vector<textproc::Token> tokens;
};

inline std::vector<ClassifiedSentence> classify_corpus(const classifier::SvcModel& model,
                                                       std::span<const corpus::SentenceRecord> sentences,
                                                       const textproc::Lemmatizer& lemmatizer) {
  const classifier::FeatureIndex index(model.keyword_set);
  std::vector<ClassifiedSentence> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    if (s.language != model.language) {
      throw DataError("sentence " + s.id() + " is " + std::string(language_code(s.language)) +
                      " but the model is " + std::string(language_code(model.language)));
    }
    ClassifiedSentence c{s, textproc::tokenize(s.text, s.language, lemmatizer)};
    c.record.sentiment = classifier::predict(model, index.vectorize(c.tokens));
    out.push_back(std::move(c));
  }
  return out;
}

inline bool in_bin(const corpus::SentenceRecord& r, int bin_ordinal) {
  return bin_ordinal == 0 || r.price_bin.ordinal == bin_ordinal;
}

struct BinCounts {
  long long hotels = 0;
  long long reviews = 0;
  long long sentences = 0;
  long long positive = 0;
  long long negative = 0;
};

// Index 0 aggregates every bin.
using ClassificationTable = std::array<BinCounts, corpus::kPriceBinCount + 1>;

inline ClassificationTable count_classifications(std::span<const ClassifiedSentence> corpus) {
  ClassificationTable table{};
  std::array<std::set<std::string>, corpus::kPriceBinCount + 1> hotels;
  std::array<std::set<std::string>, corpus::kPriceBinCount + 1> reviews;
  for (const auto& c : corpus) {
    for (int bin : {0, c.record.price_bin.ordinal}) {
      auto& row = table[bin];
      hotels[bin].insert(c.record.hotel_id);
      reviews[bin].insert(c.record.parent_review_id);
      ++row.sentences;
      if (c.record.sentiment == Sentiment::Positive) ++row.positive;
      if (c.record.sentiment == Sentiment::Negative) ++row.negative;
    }
  }
  for (std::size_t b = 0; b < table.size(); ++b) {
    table[b].hotels = static_cast<long long>(hotels[b].size());
    table[b].reviews = static_cast<long long>(reviews[b].size());
  }
  return table;
}

// ---------------------------------------------------------------------------
// Keyword rankings

enum class CountMode { Tokens, Sentences };

struct RankEntry {
  std::string term;
  long long count = 0;

  bool operator==(const RankEntry&) const = default;
};

struct KeywordRanking {
  Language language = Language::Other;
  int price_bin = 0;
  Sentiment sentiment = Sentiment::Positive;
  std::vector<RankEntry> entries;
};

inline constexpr std::size_t kTopKeywords = 10;
inline constexpr std::size_t kTopPairs = 4;

// Occurrences of each listed keyword within sentences of the given bin and
// sentiment. Keywords that never occur are absent.
inline std::map<std::string, long long> keyword_counts(std::span<const ClassifiedSentence> corpus,
                                                       const std::vector<std::string>& keyword_list,
                                                       int bin_ordinal, Sentiment sentiment,
                                                       CountMode mode = CountMode::Tokens) {
  const std::set<std::string> wanted(keyword_list.begin(), keyword_list.end());
  std::map<std::string, long long> counts;
  std::set<std::string> seen;
  for (const auto& c : corpus) {
    if (c.record.sentiment != sentiment || !in_bin(c.record, bin_ordinal)) continue;
    seen.clear();
    for (const auto& tok : c.tokens) {
      if (!wanted.count(tok.lemma)) continue;
      if (mode == CountMode::Sentences && !seen.insert(tok.lemma).second) continue;
      ++counts[tok.lemma];
    }
  }
  return counts;
}

// Sorts by count descending, term ascending, and truncates.
inline std::vector<RankEntry> top_entries(const std::map<std::string, long long>& counts,
                                          std::size_t limit) {
  std::vector<RankEntry> entries;
  for (const auto& [term, n] : counts) {
    if (n > 0) entries.push_back({term, n});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const RankEntry& a, const RankEntry& b) { return a.count > b.count; });
  if (entries.size() > limit) entries.resize(limit);
  return entries;
}

inline KeywordRanking rank_keywords(std::span<const ClassifiedSentence> corpus,
                                    const keywords::KeywordSet& keyword_set, int bin_ordinal,
                                    Sentiment sentiment, CountMode mode = CountMode::Tokens,
                                    Language language = Language::Other) {
  const auto& list = sentiment == Sentiment::Positive ? keyword_set.positive : keyword_set.negative;
  KeywordRanking r;
  r.language = language;
  r.price_bin = bin_ordinal;
  r.sentiment = sentiment;
  r.entries = top_entries(keyword_counts(corpus, list, bin_ordinal, sentiment, mode), kTopKeywords);
  return r;
}

// ---------------------------------------------------------------------------
// Adjective pairings

struct PairRanking {
  std::string adjective;
  int price_bin = 0;
  Sentiment sentiment = Sentiment::Positive;
  std::vector<RankEntry> entries;  // term = paired noun
};

// sentence id -> record, for joining parses to classified sentences
class SentenceLookup {
 public:
  explicit SentenceLookup(std::span<const ClassifiedSentence> corpus) {
    for (const auto& c : corpus) by_id_.emplace(c.record.id(), &c.record);
  }

  const corpus::SentenceRecord* find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : it->second;
  }

 private:
  std::unordered_map<std::string, const corpus::SentenceRecord*> by_id_;
};

inline PairRanking top_pairs(const std::string& adjective, std::span<const syntax::AspectPair> pairs,
                             const SentenceLookup& sentences, int bin_ordinal, Sentiment sentiment) {
  std::map<std::string, long long> counts;
  for (const auto& p : pairs) {
    if (p.modifier != adjective) continue;
    const auto* rec = sentences.find(p.sentence_id);
    if (!rec || rec->sentiment != sentiment || !in_bin(*rec, bin_ordinal)) continue;
    ++counts[p.noun];
  }
  return {adjective, bin_ordinal, sentiment, top_entries(counts, kTopPairs)};
}

inline PairRanking top_pairs(const std::string& adjective, std::span<const syntax::AspectPair> pairs,
                             std::span<const ClassifiedSentence> corpus, int bin_ordinal,
                             Sentiment sentiment) {
  return top_pairs(adjective, pairs, SentenceLookup(corpus), bin_ordinal, sentiment);
}

// ---------------------------------------------------------------------------
// Hard / soft attributes

struct AttributeFractions {
  Rational hard;
  Rational soft;
  Rational undefined;
};

using AttributeLexicon = std::map<std::string, AttributeFractions>;

// Exact decimal ("0.25", "1", ".5") or ratio ("1/3") in [0, 1].
inline std::optional<Rational> parse_fraction(std::string_view s) {
  s = text::trim(s);
  if (s.empty()) return std::nullopt;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = text::parse_int<long long>(s.substr(0, slash));
    auto den = text::parse_int<long long>(s.substr(slash + 1));
    if (!num || !den || *den <= 0 || *num < 0) return std::nullopt;
    return Rational(*num, *den);
  }
  long long whole = 0;
  long long frac = 0;
  long long scale = 1;
  auto dot = s.find('.');
  auto int_part = s.substr(0, dot);
  if (!int_part.empty()) {
    auto v = text::parse_int<long long>(int_part);
    if (!v || *v < 0 || int_part.front() == '-') return std::nullopt;
    whole = *v;
  }
  if (dot != std::string_view::npos) {
    auto frac_part = s.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 15) return std::nullopt;
    for (char c : frac_part) {
      if (c < '0' || c > '9') return std::nullopt;
      frac = frac * 10 + (c - '0');
      scale *= 10;
    }
  } else if (int_part.empty()) {
    return std::nullopt;
  }
  return Rational(whole) + Rational(frac, scale);
}

inline AttributeLexicon load_attribute_lexicon(std::istream& in, const std::string& source) {
  AttributeLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) throw ParseError(source, line_no, "expected keyword<TAB>hard<TAB>soft<TAB>undefined");
    AttributeFractions f;
    auto h = parse_fraction(cols[1]);
    auto so = parse_fraction(cols[2]);
    auto u = parse_fraction(cols[3]);
    if (!h || !so || !u) throw ParseError(source, line_no, "fractions must be non-negative decimals or ratios");
    f.hard = *h;
    f.soft = *so;
    f.undefined = *u;
    for (const auto& part : {f.hard, f.soft, f.undefined}) {
      if (part > Rational(1)) throw ParseError(source, line_no, "fraction above 1");
    }
    const double sum = to_double(f.hard + f.soft + f.undefined);
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ParseError(source, line_no,
                       "fractions for '" + cols[0] + "' sum to " + text::format_fixed(sum, 6) + ", not 1");
    }
    auto keyword = text::tsv_unescape(cols[0]);
    if (!lexicon.emplace(keyword, f).second) {
      throw ParseError(source, line_no, "duplicate keyword '" + keyword + "'");
    }
  }
  return lexicon;
}

inline AttributeLexicon load_attribute_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read attribute lexicon: " + path);
  return load_attribute_lexicon(in, path);
}

struct HardSoftSummary {
  Language language = Language::Other;
  int price_bin = 0;
  Sentiment sentiment = Sentiment::Positive;
  Rational hard_pct;
  Rational soft_pct;
  Rational undefined_pct;
  std::size_t n_keywords = 0;
};

// Unweighted mean of the ranked keywords' fractions, as exact percentages.
// An empty ranking is reported as 100% undefined.
inline HardSoftSummary aggregate_hard_soft(const KeywordRanking& ranking,
                                           const AttributeLexicon& lexicon) {
  HardSoftSummary s;
  s.language = ranking.language;
  s.price_bin = ranking.price_bin;
  s.sentiment = ranking.sentiment;
  s.n_keywords = ranking.entries.size();
  if (ranking.entries.empty()) {
    s.undefined_pct = Rational(100);
    return s;
  }
  std::vector<std::string> missing;
  Rational hard, soft, undefined;
  for (const auto& e : ranking.entries) {
    auto it = lexicon.find(e.term);
    if (it == lexicon.end()) {
      missing.push_back(e.term);
      continue;
    }
    hard += it->second.hard;
    soft += it->second.soft;
    undefined += it->second.undefined;
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw DataError("keywords missing from attribute lexicon: " + list);
  }
  const Rational scale(100, static_cast<long long>(s.n_keywords));
  s.hard_pct = hard * scale;
  s.soft_pct = soft * scale;
  s.undefined_pct = undefined * scale;
  return s;
}

// ---------------------------------------------------------------------------
// Ranking files: price_bin<TAB>rank<TAB>keyword<TAB>count

inline void write_rankings_tsv(std::ostream& out, std::span<const KeywordRanking> rankings) {
  out << "price_bin\trank\tkeyword\tcount\n";
  for (const auto& r : rankings) {
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      out << r.price_bin << '\t' << (i + 1) << '\t' << text::tsv_escape(r.entries[i].term) << '\t'
          << r.entries[i].count << '\n';
    }
  }
}

// Rankings are returned for every bin that has at least one row, in file order.
inline std::vector<KeywordRanking> read_rankings_tsv(std::istream& in, const std::string& source,
                                                     Language language, Sentiment sentiment) {
  std::vector<KeywordRanking> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || text::starts_with(line, "price_bin\t")) continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) throw ParseError(source, line_no, "expected price_bin<TAB>rank<TAB>keyword<TAB>count");
    auto bin = text::parse_int<int>(cols[0]);
    auto rank = text::parse_int<int>(cols[1]);
    auto count = text::parse_int<long long>(cols[3]);
    if (!bin || *bin < 0 || *bin > corpus::kPriceBinCount || !rank || !count || *count < 0) {
      throw ParseError(source, line_no, "bad ranking row");
    }
    if (out.empty() || out.back().price_bin != *bin) {
      out.push_back({language, *bin, sentiment, {}});
    }
    auto& r = out.back();
    if (static_cast<std::size_t>(*rank) != r.entries.size() + 1) {
      throw ParseError(source, line_no, "ranks must be consecutive from 1 within a price bin");
    }
    r.entries.push_back({text::tsv_unescape(cols[2]), *count});
  }
  return out;
}

inline std::vector<KeywordRanking> read_rankings_tsv(const std::string& path, Language language,
                                                     Sentiment sentiment) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read ranking file: " + path);
  return read_rankings_tsv(in, path, language, sentiment);
}

}  // namespace review_miner::analysis
