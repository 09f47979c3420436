#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "review_miner/lemmatizer.hpp"
#include "review_miner/text.hpp"
#include "review_miner/types.hpp"

namespace review_miner::textproc {

struct Token {
  std::string surface;
  std::string lemma;
  int position = 0;

  bool operator==(const Token&) const = default;
};

namespace detail {

inline bool is_word_char(char32_t cp) { return !text::is_space(cp) && !text::is_punct(cp); }

inline std::vector<std::string> english_words(std::string_view s) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < s.size();) {
    auto d = text::decode_utf8(s, i);
    if (is_word_char(d.cp)) {
      current.append(s.substr(i, d.length));
    } else if ((d.cp == '\'' || d.cp == U'’') && !current.empty() && i + d.length < s.size() &&
               is_word_char(text::decode_utf8(s, i + d.length).cp)) {
      current.push_back('\'');  // keep contractions such as don't
    } else {
      flush();
    }
    i += d.length;
  }
  flush();
  return words;
}

}  // namespace detail

// Chinese input must be pre-segmented with spaces; English is split on
// whitespace and punctuation, lowercased and lemmatized.
inline std::vector<Token> tokenize(std::string_view sentence, Language language,
                                   const Lemmatizer& lemmatizer) {
  std::vector<Token> out;
  if (language == Language::English) {
    for (auto& word : detail::english_words(sentence)) {
      auto lower = text::ascii_lower(word);
      auto lemma = lemmatizer.lemmatize(lower);
      out.push_back({std::move(word), std::move(lemma), static_cast<int>(out.size())});
    }
  } else {
    for (auto& word : text::split_whitespace(sentence)) {
      if (text::is_all_punct(word)) continue;
      auto lemma = word;
      out.push_back({std::move(word), std::move(lemma), static_cast<int>(out.size())});
    }
  }
  return out;
}

inline std::vector<Token> tokenize(std::string_view sentence, Language language) {
  static const Lemmatizer kDefault;
  return tokenize(sentence, language, kDefault);
}

// Terms ordered by code point (byte order of UTF-8 agrees with code point order).
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::set<std::string> terms) : terms_(terms.begin(), terms.end()) {
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
  }

  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool contains(std::string_view term) const { return index_.count(std::string(term)) > 0; }
  std::size_t ordinal(std::string_view term) const { return index_.at(std::string(term)); }

  bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

 private:
  std::vector<std::string> terms_;
  std::map<std::string, std::size_t> index_;
};

inline Vocabulary build_vocabulary(std::span<const std::vector<Token>> sentences) {
  std::set<std::string> terms;
  for (const auto& sentence : sentences) {
    for (const auto& tok : sentence) terms.insert(tok.lemma);
  }
  return Vocabulary(std::move(terms));
}

struct LabeledSentence {
  std::vector<Token> tokens;
  Sentiment label = Sentiment::Positive;
};

// Per-document counts of one term within one class. Zero counts are omitted.
struct ClassCounts {
  std::vector<int> doc_counts;
  long long total = 0;

  std::size_t doc_freq() const { return doc_counts.size(); }
};

struct TermCounts {
  ClassCounts positive;
  ClassCounts negative;

  const ClassCounts& of(Sentiment s) const { return s == Sentiment::Positive ? positive : negative; }
  ClassCounts& of(Sentiment s) { return s == Sentiment::Positive ? positive : negative; }
};

struct TermClassCounts {
  std::map<std::string, TermCounts> terms;
  std::size_t positive_documents = 0;
  std::size_t negative_documents = 0;
};

// Each sentence is one document.
inline TermClassCounts term_class_counts(std::span<const LabeledSentence> labeled) {
  TermClassCounts out;
  std::map<std::string_view, int> local;
  for (const auto& sentence : labeled) {
    (sentence.label == Sentiment::Positive ? out.positive_documents : out.negative_documents)++;
    local.clear();
    for (const auto& tok : sentence.tokens) ++local[tok.lemma];
    for (const auto& [term, count] : local) {
      auto& cc = out.terms[std::string(term)].of(sentence.label);
      cc.doc_counts.push_back(count);
      cc.total += count;
    }
  }
  return out;
}

}  // namespace review_miner::textproc
