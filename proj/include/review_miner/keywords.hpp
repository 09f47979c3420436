#pragma once

// Entropy-ratio keyword selection. A term's entropy within a class measures
// how evenly it is spread over that class's documents; a term is a keyword
// of a class when its entropy there exceeds a factor times its entropy in the
// other class.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "review_miner/error.hpp"
#include "review_miner/text.hpp"
#include "review_miner/textproc.hpp"
#include "review_miner/types.hpp"

namespace review_miner::keywords {

// Shannon entropy (bits) of a term's distribution over documents.
inline double class_entropy(std::span<const int> doc_counts, long long total) {
  if (total <= 0) return 0.0;
  const double t = static_cast<double>(total);
  double h = 0.0;
  for (int n : doc_counts) {
    if (n <= 0) continue;
    const double p = static_cast<double>(n) / t;
    h -= p * std::log2(p);
  }
  // A single document gives p = 1 and -0.0; normalise the sign.
  return h <= 0.0 ? 0.0 : h;
}

inline double class_entropy(const textproc::ClassCounts& counts) {
  return class_entropy(counts.doc_counts, counts.total);
}

struct TermEntropy {
  double h_pos = 0.0;
  double h_neg = 0.0;
  std::size_t doc_freq_pos = 0;
  std::size_t doc_freq_neg = 0;
};

using EntropyTable = std::map<std::string, TermEntropy>;

inline EntropyTable entropy_table(const textproc::TermClassCounts& counts) {
  EntropyTable table;
  for (const auto& [term, tc] : counts.terms) {
    table.emplace(term, TermEntropy{class_entropy(tc.positive), class_entropy(tc.negative),
                                    tc.positive.doc_freq(), tc.negative.doc_freq()});
  }
  return table;
}

struct KeywordSet {
  double alpha = 1.0;
  double alpha_prime = 1.0;
  std::vector<std::string> positive;  // lexicographic
  std::vector<std::string> negative;  // lexicographic

  // Positive keywords then negative keywords; the classifier's feature order.
  std::vector<std::string> feature_order() const {
    std::vector<std::string> out = positive;
    out.insert(out.end(), negative.begin(), negative.end());
    return out;
  }

  std::size_t size() const { return positive.size() + negative.size(); }

  bool operator==(const KeywordSet&) const = default;
};

inline KeywordSet select_keywords(const EntropyTable& table, double alpha, double alpha_prime) {
  if (!(alpha >= 1.0) || !(alpha_prime >= 1.0)) {
    throw ValidationError("entropy comparison factors must be >= 1");
  }
  KeywordSet set;
  set.alpha = alpha;
  set.alpha_prime = alpha_prime;
  // std::map iteration is already lexicographic.
  for (const auto& [term, e] : table) {
    if (e.h_pos > 0.0 && e.h_pos > alpha * e.h_neg) set.positive.push_back(term);
    if (e.h_neg > 0.0 && e.h_neg > alpha_prime * e.h_pos) set.negative.push_back(term);
  }
  return set;
}

// Integer quarter counts, so every grid value is exact in binary.
inline std::vector<double> quarter_grid(int first_quarter, int last_quarter) {
  std::vector<double> out;
  for (int q = first_quarter; q <= last_quarter; ++q) out.push_back(q * 0.25);
  return out;
}

// 1.25, 1.50, ..., 6.00
inline std::vector<double> alpha_grid() { return quarter_grid(5, 24); }

// ---------------------------------------------------------------------------
// TSV: "# alpha=<a>\talpha_prime=<a'>" then term<TAB>pos|neg<TAB>H_pos<TAB>H_neg

inline void write_keyword_set(std::ostream& out, const KeywordSet& set, const EntropyTable& table) {
  out << "# alpha=" << text::format_roundtrip(set.alpha)
      << "\talpha_prime=" << text::format_roundtrip(set.alpha_prime) << '\n';
  auto row = [&](const std::string& term, std::string_view cls) {
    TermEntropy e;
    if (auto it = table.find(term); it != table.end()) e = it->second;
    out << text::tsv_escape(term) << '\t' << cls << '\t' << text::format_roundtrip(e.h_pos) << '\t'
        << text::format_roundtrip(e.h_neg) << '\n';
  };
  for (const auto& t : set.positive) row(t, "pos");
  for (const auto& t : set.negative) row(t, "neg");
}

struct LoadedKeywordSet {
  KeywordSet set;
  EntropyTable entropies;  // only the listed keywords
};

inline LoadedKeywordSet read_keyword_set(std::istream& in, const std::string& source) {
  LoadedKeywordSet out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = text::trim(std::string_view(line).substr(1));
      for (const auto& field : text::split(body, '\t')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        auto key = field.substr(0, eq);
        auto value = text::parse_double(field.substr(eq + 1));
        if (!value) throw ParseError(source, line_no, "bad header value");
        if (key == "alpha") out.set.alpha = *value;
        if (key == "alpha_prime") out.set.alpha_prime = *value;
      }
      have_header = true;
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) throw ParseError(source, line_no, "expected 4 columns");
    auto hp = text::parse_double(cols[2]);
    auto hn = text::parse_double(cols[3]);
    if (!hp || !hn) throw ParseError(source, line_no, "bad entropy value");
    auto term = text::tsv_unescape(cols[0]);
    if (cols[1] == "pos") {
      out.set.positive.push_back(term);
    } else if (cols[1] == "neg") {
      out.set.negative.push_back(term);
    } else {
      throw ParseError(source, line_no, "class must be pos or neg");
    }
    out.entropies[term] = TermEntropy{*hp, *hn, 0, 0};
  }
  if (!have_header) throw DataError(source + ": missing alpha header");
  std::sort(out.set.positive.begin(), out.set.positive.end());
  std::sort(out.set.negative.begin(), out.set.negative.end());
  return out;
}

}  // namespace review_miner::keywords
