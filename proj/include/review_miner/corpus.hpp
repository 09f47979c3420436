#pragma once

// Review ingestion: JSON-lines loading, script-based language detection,
// sentence splitting, cross-site hotel matching, date window filtering and
// price binning.

#include <algorithm>
#include <array>
#include <compare>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "review_miner/error.hpp"
#include "review_miner/text.hpp"
#include "review_miner/types.hpp"

namespace review_miner::corpus {

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  // Strict ISO-8601 calendar date, YYYY-MM-DD.
  static std::optional<Date> parse(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto y = text::parse_int<int>(s.substr(0, 4));
    auto m = text::parse_int<int>(s.substr(5, 2));
    auto d = text::parse_int<int>(s.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    if (*m < 1 || *m > 12 || *d < 1) return std::nullopt;
    static constexpr std::array<int, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (*y % 4 == 0 && *y % 100 != 0) || *y % 400 == 0;
    const int max_day = kDays[*m - 1] + ((*m == 2 && leap) ? 1 : 0);
    if (*d > max_day) return std::nullopt;
    return Date{*y, *m, *d};
  }

  std::string to_string() const {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

struct Review {
  std::string review_id;
  std::string hotel_id;
  std::string hotel_name_en;
  Date date;
  long long price_low = 0;
  long long price_high = 0;
  Language language = Language::Other;
  std::string text;
};

// Half-open yen range [low, high). Ordinal 0 is the "All Prices" aggregate.
struct PriceBin {
  int ordinal = 0;
  long long low = 0;
  long long high = 0;

  bool operator==(const PriceBin&) const = default;
};

inline constexpr std::array<long long, 10> kPriceBoundaries{0,     2500,  5000,  10000,  15000,
                                                             20000, 30000, 50000, 100000, 200000};
inline constexpr int kPriceBinCount = 9;

inline PriceBin all_prices_bin() { return {0, kPriceBoundaries.front(), kPriceBoundaries.back()}; }

inline PriceBin price_bin(int ordinal) {
  if (ordinal == 0) return all_prices_bin();
  if (ordinal < 1 || ordinal > kPriceBinCount) {
    throw ValidationError("price bin ordinal out of range: " + std::to_string(ordinal));
  }
  return {ordinal, kPriceBoundaries[ordinal - 1], kPriceBoundaries[ordinal]};
}

inline PriceBin assign_price_bin(long long price_high) {
  if (price_high < 0) {
    throw DataError("negative price: " + std::to_string(price_high));
  }
  if (price_high >= kPriceBoundaries.back()) {
    throw DataError("price out of range (>= 200000 yen): " + std::to_string(price_high));
  }
  auto it = std::upper_bound(kPriceBoundaries.begin(), kPriceBoundaries.end(), price_high);
  const int ordinal = static_cast<int>(it - kPriceBoundaries.begin());
  return price_bin(ordinal);
}

// Human-readable label, e.g. "4: 10,000 to 15,000 yen".
inline std::string price_bin_label(int ordinal) {
  if (ordinal == 0) return "0: All Prices";
  auto with_commas = [](long long v) {
    std::string digits = std::to_string(v);
    std::string out;
    const int n = static_cast<int>(digits.size());
    for (int i = 0; i < n; ++i) {
      if (i > 0 && (n - i) % 3 == 0 && n > 4) out.push_back(',');
      out.push_back(digits[i]);
    }
    return out;
  };
  const auto bin = price_bin(ordinal);
  return std::to_string(ordinal) + ": " + with_commas(bin.low) + " to " + with_commas(bin.high) +
         " yen";
}

struct SentenceRecord {
  std::string parent_review_id;
  std::string hotel_id;
  int index_in_review = 0;
  std::string text;
  Language language = Language::Other;
  PriceBin price_bin;
  std::optional<Sentiment> sentiment;

  // Stable identifier used to join CoNLL-U parses ("# sent_id = ...").
  std::string id() const { return parent_review_id + ":" + std::to_string(index_in_review); }
};

// ---------------------------------------------------------------------------
// Language detection

// Han share above 0.30 of letter code points means Chinese; otherwise a Latin
// share above 0.50 means English. Text with no letters is Other.
inline Language detect_language(std::string_view s) {
  std::size_t letters = 0;
  std::size_t han = 0;
  std::size_t latin = 0;
  for (std::size_t i = 0; i < s.size();) {
    auto d = text::decode_utf8(s, i);
    i += d.length;
    if (!text::is_letter(d.cp)) continue;
    ++letters;
    if (text::is_han(d.cp)) {
      ++han;
    } else if (text::is_latin_letter(d.cp)) {
      ++latin;
    }
  }
  if (letters == 0) return Language::Other;
  const double n = static_cast<double>(letters);
  if (static_cast<double>(han) / n > 0.30) return Language::Chinese;
  if (static_cast<double>(latin) / n > 0.50) return Language::English;
  return Language::Other;
}

// ---------------------------------------------------------------------------
// Loading

struct LoadOptions {
  bool strict = false;
};

struct LoadResult {
  std::vector<Review> reviews;
  std::vector<std::string> diagnostics;  // "source:line: message"
};

namespace detail {

inline Review review_from_json(const nlohmann::json& j) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) throw std::invalid_argument(std::string("missing field '") + key + "'");
    return *it;
  };
  auto need_string = [&](const char* key) {
    const auto& v = need(key);
    if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  };
  auto need_int = [&](const char* key) {
    const auto& v = need(key);
    if (!v.is_number_integer()) {
      throw std::invalid_argument(std::string("field '") + key + "' must be an integer");
    }
    return v.get<long long>();
  };

  Review r;
  r.review_id = need_string("id");
  r.hotel_id = need_string("hotel_id");
  r.hotel_name_en = need_string("hotel_name_en");
  const auto date = need_string("date");
  auto parsed = Date::parse(date);
  if (!parsed) throw std::invalid_argument("invalid date '" + date + "'");
  r.date = *parsed;
  r.price_low = need_int("price_low_jpy");
  r.price_high = need_int("price_high_jpy");
  if (r.price_low < 0) throw std::invalid_argument("price_low_jpy must be >= 0");
  if (r.price_high < r.price_low) throw std::invalid_argument("price_high_jpy below price_low_jpy");
  r.text = need_string("text");
  if (text::trim(r.text).empty()) throw std::invalid_argument("empty text");
  if (auto it = j.find("lang"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw std::invalid_argument("field 'lang' must be a string");
    const auto code = it->get<std::string>();
    if (code != "zh" && code != "en") throw std::invalid_argument("unsupported lang '" + code + "'");
    r.language = language_from_code(code);
  } else {
    r.language = detect_language(r.text);
  }
  return r;
}

}  // namespace detail

inline LoadResult load_reviews(std::istream& in, const std::string& source,
                               const LoadOptions& options = {}) {
  LoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
      result.reviews.push_back(detail::review_from_json(j));
    } catch (const std::exception& e) {
      if (options.strict) throw ParseError(source, line_no, e.what());
      result.diagnostics.push_back(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (result.reviews.empty()) throw DataError(source + ": zero valid records");
  return result;
}

inline LoadResult load_reviews(const std::string& path, const LoadOptions& options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read review file: " + path);
  return load_reviews(in, path, options);
}

inline nlohmann::json review_to_json(const Review& r) {
  nlohmann::json j;
  j["id"] = r.review_id;
  j["hotel_id"] = r.hotel_id;
  j["hotel_name_en"] = r.hotel_name_en;
  j["date"] = r.date.to_string();
  j["price_low_jpy"] = r.price_low;
  j["price_high_jpy"] = r.price_high;
  if (r.language != Language::Other) j["lang"] = std::string(language_code(r.language));
  j["text"] = r.text;
  return j;
}

// ---------------------------------------------------------------------------
// Sentence splitting

struct SplitOptions {
  std::vector<std::string> abbreviations{"mr.", "mrs.", "dr.", "st.", "vs.", "e.g.", "i.e.", "etc."};
};

inline bool is_chinese_delimiter(char32_t cp) {
  switch (cp) {
    case U'。':
    case U'．':
    case U'！':
    case U'？':
    case U'；':
    case U'…':
    case U'.':
    case U'!':
    case U'?':
      return true;
    default:
      return false;
  }
}

inline bool is_english_delimiter(char32_t cp) { return cp == '.' || cp == '!' || cp == '?'; }

namespace detail {

inline void push_fragment(std::vector<std::string>& out, std::string_view fragment) {
  auto t = text::trim(fragment);
  if (!t.empty()) out.emplace_back(t);
}

inline std::vector<std::string> split_chinese(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size();) {
    auto d = text::decode_utf8(s, i);
    if (is_chinese_delimiter(d.cp)) {
      push_fragment(out, s.substr(start, i - start));
      start = i + d.length;
    }
    i += d.length;
  }
  push_fragment(out, s.substr(start));
  return out;
}

inline std::string_view strip_trailing_english_delimiters(std::string_view s) {
  while (!s.empty() && is_english_delimiter(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_english(std::string_view s, const SplitOptions& options) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_english_delimiter(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < s.size() && is_english_delimiter(static_cast<unsigned char>(s[run_end]))) {
      ++run_end;
    }
    const bool at_boundary = run_end == s.size() ||
                             text::is_space(text::decode_utf8(s, run_end).cp);
    if (!at_boundary) {
      i = run_end;
      continue;
    }
    // A single period closing a listed abbreviation does not end the sentence.
    if (run_end == i + 1 && s[i] == '.' && run_end < s.size()) {
      std::size_t word_start = i;
      while (word_start > start && !text::is_space(static_cast<unsigned char>(s[word_start - 1]))) {
        --word_start;
      }
      const auto word = text::ascii_lower(s.substr(word_start, run_end - word_start));
      if (std::find(options.abbreviations.begin(), options.abbreviations.end(), word) !=
          options.abbreviations.end()) {
        i = run_end;
        continue;
      }
    }
    push_fragment(out, s.substr(start, i - start));
    start = run_end;
    i = run_end;
  }
  push_fragment(out, strip_trailing_english_delimiters(text::trim(s.substr(start))));
  return out;
}

}  // namespace detail

inline std::vector<SentenceRecord> split_sentences(const Review& review,
                                                   const SplitOptions& options = {}) {
  std::vector<std::string> fragments;
  switch (review.language) {
    case Language::Chinese:
      fragments = detail::split_chinese(review.text);
      break;
    case Language::English:
      fragments = detail::split_english(review.text, options);
      break;
    default:
      throw DataError("review " + review.review_id + ": unsupported language for sentence splitting");
  }
  const auto bin = assign_price_bin(review.price_high);
  std::vector<SentenceRecord> out;
  out.reserve(fragments.size());
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    SentenceRecord rec;
    rec.parent_review_id = review.review_id;
    rec.hotel_id = review.hotel_id;
    rec.index_in_review = static_cast<int>(i);
    rec.text = std::move(fragments[i]);
    rec.language = review.language;
    rec.price_bin = bin;
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hotel matching

struct MatchedHotel {
  std::string hotel_id_a;
  std::string hotel_id_b;
  std::string canonical_name;

  auto operator<=>(const MatchedHotel&) const = default;
};

struct HotelJoin {
  std::vector<MatchedHotel> matched;  // sorted by canonical name
  std::set<std::string> unmatched_a;
  std::set<std::string> unmatched_b;
  std::vector<std::string> diagnostics;
};

// Lowercase, drop apostrophes, turn other punctuation into spaces, collapse
// whitespace runs.
inline std::string normalize_hotel_name(std::string_view name) {
  std::string spaced;
  for (std::size_t i = 0; i < name.size();) {
    auto d = text::decode_utf8(name, i);
    if (d.cp == '\'' || d.cp == U'’') {
      // dropped
    } else if (text::is_punct(d.cp) || text::is_space(d.cp)) {
      spaced.push_back(' ');
    } else {
      spaced.append(name.substr(i, d.length));
    }
    i += d.length;
  }
  std::string out;
  for (const auto& word : text::split_whitespace(text::ascii_lower(spaced))) {
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

namespace detail {

struct NameIndex {
  std::map<std::string, std::set<std::string>> ids_by_name;
  std::set<std::string> all_ids;
  std::set<std::string> conflicting_ids;  // hotel_id seen under two names
};

inline NameIndex index_hotels(const std::vector<Review>& reviews, std::string_view side,
                              std::vector<std::string>& diagnostics) {
  NameIndex index;
  std::map<std::string, std::string> name_of;
  for (const auto& r : reviews) {
    index.all_ids.insert(r.hotel_id);
    auto name = normalize_hotel_name(r.hotel_name_en);
    auto [it, inserted] = name_of.emplace(r.hotel_id, name);
    if (!inserted && it->second != name && !index.conflicting_ids.count(r.hotel_id)) {
      index.conflicting_ids.insert(r.hotel_id);
      diagnostics.push_back(std::string(side) + ": hotel " + r.hotel_id +
                            " appears under several names");
    }
  }
  for (const auto& [id, name] : name_of) {
    if (!index.conflicting_ids.count(id)) index.ids_by_name[name].insert(id);
  }
  return index;
}

}  // namespace detail

inline HotelJoin match_hotels(const std::vector<Review>& set_a, const std::vector<Review>& set_b) {
  HotelJoin join;
  auto a = detail::index_hotels(set_a, "a", join.diagnostics);
  auto b = detail::index_hotels(set_b, "b", join.diagnostics);
  std::set<std::string> matched_a;
  std::set<std::string> matched_b;
  for (const auto& [name, ids_a] : a.ids_by_name) {
    auto it = b.ids_by_name.find(name);
    if (it == b.ids_by_name.end()) continue;
    const auto& ids_b = it->second;
    if (ids_a.size() == 1 && ids_b.size() == 1) {
      join.matched.push_back({*ids_a.begin(), *ids_b.begin(), name});
      matched_a.insert(*ids_a.begin());
      matched_b.insert(*ids_b.begin());
    } else {
      join.diagnostics.push_back("ambiguous hotel name '" + name + "': " +
                                 std::to_string(ids_a.size()) + " vs " +
                                 std::to_string(ids_b.size()) + " hotels");
    }
  }
  for (const auto& [name, ids] : a.ids_by_name) {
    if (ids.size() > 1 && !b.ids_by_name.count(name)) {
      join.diagnostics.push_back("ambiguous hotel name '" + name + "' in set a");
    }
  }
  for (const auto& [name, ids] : b.ids_by_name) {
    if (ids.size() > 1 && !a.ids_by_name.count(name)) {
      join.diagnostics.push_back("ambiguous hotel name '" + name + "' in set b");
    }
  }
  for (const auto& id : a.all_ids) {
    if (!matched_a.count(id)) join.unmatched_a.insert(id);
  }
  for (const auto& id : b.all_ids) {
    if (!matched_b.count(id)) join.unmatched_b.insert(id);
  }
  return join;
}

// ---------------------------------------------------------------------------

inline std::vector<Review> filter_by_date(const std::vector<Review>& reviews, const Date& start,
                                          const Date& end) {
  if (end < start) throw ValidationError("date window start is after its end");
  std::vector<Review> out;
  std::copy_if(reviews.begin(), reviews.end(), std::back_inserter(out),
               [&](const Review& r) { return start <= r.date && r.date <= end; });
  return out;
}

// Keeps reviews whose hotel_id is in `hotel_ids`, preserving order.
inline std::vector<Review> filter_by_hotels(const std::vector<Review>& reviews,
                                            const std::set<std::string>& hotel_ids) {
  std::vector<Review> out;
  std::copy_if(reviews.begin(), reviews.end(), std::back_inserter(out),
               [&](const Review& r) { return hotel_ids.count(r.hotel_id) > 0; });
  return out;
}

}  // namespace review_miner::corpus
