#pragma once

// Report tables (markdown or TSV), hard/soft SVG bar charts and the run
// manifest. All output is a pure function of the bundle.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "review_miner/analysis.hpp"
#include "review_miner/classifier.hpp"
#include "review_miner/config.hpp"
#include "review_miner/corpus.hpp"
#include "review_miner/digest.hpp"
#include "review_miner/error.hpp"
#include "review_miner/keywords.hpp"
#include "review_miner/text.hpp"

namespace review_miner::report {

struct LanguageReport {
  Language language = Language::Other;
  classifier::GridSearchResult grid;
  keywords::KeywordSet keywords;
  analysis::ClassificationTable counts{};
  std::vector<analysis::KeywordRanking> keyword_rankings;  // both sentiments, bins ascending
  std::vector<analysis::PairRanking> pair_rankings;
  std::vector<analysis::HardSoftSummary> hardsoft;
  bool has_lexicon = false;
};

struct InputRecord {
  std::string key;   // config key, e.g. "zh.reviews"
  std::string path;  // as configured
  std::string sha256;
};

struct ReportBundle {
  config::Settings settings;
  std::vector<InputRecord> inputs;
  std::vector<LanguageReport> languages;
};

// ---------------------------------------------------------------------------
// Formatting

inline std::string format_f1(double v) { return text::format_fixed(v, 2); }

inline std::string format_percent(const analysis::Rational& pct) {
  return text::format_fixed(analysis::to_double(pct), 1) + "%";
}

inline std::string format_percent(double pct) { return text::format_fixed(pct, 1) + "%"; }

// A header row and data rows, rendered as a markdown pipe table or TSV.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render(config::ReportFormat format) const {
    std::ostringstream out;
    if (format == config::ReportFormat::Tsv) {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << text::tsv_escape(cells[i]);
        out << '\n';
      };
      line(header);
      for (const auto& r : rows) line(r);
    } else {
      auto line = [&](const std::vector<std::string>& cells) {
        out << '|';
        for (const auto& c : cells) {
          std::string cell;
          for (char ch : c) {
            if (ch == '|') cell += "\\|";
            else cell.push_back(ch);
          }
          out << ' ' << cell << " |";
        }
        out << '\n';
      };
      line(header);
      out << '|';
      for (std::size_t i = 0; i < header.size(); ++i) out << "---|";
      out << '\n';
      for (const auto& r : rows) line(r);
    }
    return out.str();
  }
};

inline std::string bin_name(int ordinal) {
  return ordinal == 0 ? "All Prices" : corpus::price_bin_label(ordinal);
}

// ---------------------------------------------------------------------------
// Sections

inline Table grid_table(const classifier::GridSearchResult& grid) {
  Table t{{"alpha", "alpha_prime", "C", "positive keywords", "negative keywords", "F1 mean", "F1 std"}, {}};
  for (const auto& c : grid.cells) {
    t.rows.push_back({text::format_fixed(c.alpha, 2), text::format_fixed(c.alpha_prime, 2),
                      text::format_fixed(c.C, 2), std::to_string(c.positive_keywords),
                      std::to_string(c.negative_keywords), format_f1(c.cv.mean_f1),
                      format_f1(c.cv.std_f1)});
  }
  return t;
}

inline Table best_table(const LanguageReport& r) {
  Table t{{"language", "k", "alpha", "alpha_prime", "C", "F1 mean", "F1 std", "positive keywords",
           "negative keywords"},
          {}};
  if (r.grid.cells.empty()) return t;
  const auto& b = r.grid.best();
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  t.rows.push_back({std::string(language_code(r.language)), std::to_string(b.cv.k),
                    text::format_fixed(b.alpha, 2), text::format_fixed(b.alpha_prime, 2),
                    text::format_fixed(b.C, 2), format_f1(b.cv.mean_f1), format_f1(b.cv.std_f1),
                    join(r.keywords.positive), join(r.keywords.negative)});
  return t;
}

inline Table counts_table(const analysis::ClassificationTable& counts) {
  Table t{{"price range", "hotels", "reviews", "sentences", "positive", "negative"}, {}};
  for (int b = 1; b <= corpus::kPriceBinCount; ++b) {
    const auto& c = counts[b];
    t.rows.push_back({bin_name(b), std::to_string(c.hotels), std::to_string(c.reviews),
                      std::to_string(c.sentences), std::to_string(c.positive), std::to_string(c.negative)});
  }
  const auto& all = counts[0];
  t.rows.push_back({bin_name(0), std::to_string(all.hotels), std::to_string(all.reviews),
                    std::to_string(all.sentences), std::to_string(all.positive), std::to_string(all.negative)});
  return t;
}

inline Table keyword_table(const std::vector<analysis::KeywordRanking>& rankings, Sentiment s) {
  Table t{{"price_bin", "rank", "keyword", "count"}, {}};
  for (const auto& r : rankings) {
    if (r.sentiment != s) continue;
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      t.rows.push_back({std::to_string(r.price_bin), std::to_string(i + 1), r.entries[i].term,
                        std::to_string(r.entries[i].count)});
    }
  }
  return t;
}

inline Table pair_table(const std::vector<analysis::PairRanking>& rankings, Sentiment s) {
  Table t{{"price_bin", "adjective", "rank", "pair", "count"}, {}};
  for (const auto& r : rankings) {
    if (r.sentiment != s) continue;
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      t.rows.push_back({std::to_string(r.price_bin), r.adjective, std::to_string(i + 1),
                        r.adjective + " " + r.entries[i].term, std::to_string(r.entries[i].count)});
    }
  }
  return t;
}

inline Table hardsoft_table(const std::vector<analysis::HardSoftSummary>& summaries) {
  Table t{{"price_bin", "sentiment", "keywords", "hard", "soft", "undefined"}, {}};
  for (const auto& s : summaries) {
    t.rows.push_back({std::to_string(s.price_bin), std::string(sentiment_code(s.sentiment)),
                      std::to_string(s.n_keywords), format_percent(s.hard_pct), format_percent(s.soft_pct),
                      format_percent(s.undefined_pct)});
  }
  return t;
}

// ---------------------------------------------------------------------------
// SVG

inline constexpr int kBarWidth = 1000;

// Segment boundaries come from rounding the running total, so the three
// widths always add up to the full bar.
inline std::array<int, 3> segment_widths(const analysis::HardSoftSummary& s, int width = kBarWidth) {
  auto edge = [&](const analysis::Rational& pct) {
    const analysis::Rational x = pct * analysis::Rational(width, 100);
    // round half up on the exact value
    return static_cast<int>((2 * x.numerator() + x.denominator()) / (2 * x.denominator()));
  };
  const int e1 = std::clamp(edge(s.hard_pct), 0, width);
  const int e2 = std::clamp(edge(s.hard_pct + s.soft_pct), e1, width);
  return {e1, e2 - e1, width - e2};
}

inline std::string bar_chart_svg(const std::vector<analysis::HardSoftSummary>& summaries) {
  if (summaries.empty()) throw ValidationError("bar chart needs at least one summary");
  const auto lang = summaries.front().language;
  const auto sent = summaries.front().sentiment;
  for (const auto& s : summaries) {
    if (s.language != lang || s.sentiment != sent) {
      throw ValidationError("bar chart summaries must share language and sentiment");
    }
  }
  constexpr int kLabel = 230;
  constexpr int kRow = 30;
  constexpr int kBar = 20;
  constexpr int kTop = 60;
  const int width = kLabel + kBarWidth + 20;
  const int height = kTop + kRow * static_cast<int>(summaries.size()) + 10;
  static constexpr std::array<const char*, 3> kColours = {"#4e79a7", "#f28e2b", "#bab0ac"};
  static constexpr std::array<const char*, 3> kNames = {"hard", "soft", "undefined"};

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  o << "<text x=\"10\" y=\"20\" font-size=\"14\">Hard and soft attributes, "
    << (lang == Language::Chinese ? "Chinese" : lang == Language::English ? "English" : "other")
    << ' ' << (sent == Sentiment::Positive ? "positive" : "negative") << " keywords</text>\n";
  for (int i = 0; i < 3; ++i) {
    const int x = kLabel + i * 120;
    o << "<rect x=\"" << x << "\" y=\"32\" width=\"12\" height=\"12\" fill=\"" << kColours[i] << "\"/>\n";
    o << "<text x=\"" << x + 16 << "\" y=\"42\">" << kNames[i] << "</text>\n";
  }
  for (std::size_t r = 0; r < summaries.size(); ++r) {
    const auto& s = summaries[r];
    const int y = kTop + static_cast<int>(r) * kRow;
    o << "<text x=\"10\" y=\"" << y + 15 << "\">" << bin_name(s.price_bin) << "</text>\n";
    const auto w = segment_widths(s);
    const std::array<analysis::Rational, 3> pct = {s.hard_pct, s.soft_pct, s.undefined_pct};
    int x = kLabel;
    for (int i = 0; i < 3; ++i) {
      if (w[i] == 0) continue;
      o << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w[i] << "\" height=\"" << kBar
        << "\" fill=\"" << kColours[i] << "\"><title>" << kNames[i] << ' ' << format_percent(pct[i])
        << "</title></rect>\n";
      x += w[i];
    }
  }
  o << "</svg>\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Emission

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("write failed: " + path.string());
}

// Returns the names of the files written, in emission order.
inline std::vector<std::string> emit_report(const ReportBundle& bundle, config::ReportFormat format,
                                            const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw DataError("cannot create output directory " + dir.string());
  }
  const std::string ext = format == config::ReportFormat::Tsv ? ".tsv" : ".md";
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& lr : bundle.languages) {
    const std::string l(language_code(lr.language));
    files.emplace_back("grid_" + l + ext, grid_table(lr.grid).render(format));
    files.emplace_back("best_" + l + ext, best_table(lr).render(format));
    files.emplace_back("counts_" + l + ext, counts_table(lr.counts).render(format));
    for (auto s : {Sentiment::Positive, Sentiment::Negative}) {
      const std::string sc(sentiment_code(s));
      files.emplace_back("keywords_" + l + "_" + sc + ext, keyword_table(lr.keyword_rankings, s).render(format));
      files.emplace_back("pairs_" + l + "_" + sc + ext, pair_table(lr.pair_rankings, s).render(format));
    }
    files.emplace_back("hardsoft_" + l + ext, hardsoft_table(lr.hardsoft).render(format));
    for (auto s : {Sentiment::Positive, Sentiment::Negative}) {
      std::vector<analysis::HardSoftSummary> group;
      for (const auto& h : lr.hardsoft) {
        if (h.sentiment == s) group.push_back(h);
      }
      if (!group.empty()) {
        files.emplace_back("hardsoft_" + l + "_" + std::string(sentiment_code(s)) + ".svg", bar_chart_svg(group));
      }
    }
  }

  nlohmann::json manifest;
  manifest["config"] = bundle.settings;
  manifest["inputs"] = nlohmann::json::array();
  for (const auto& in : bundle.inputs) {
    manifest["inputs"].push_back({{"key", in.key}, {"path", in.path}, {"sha256", in.sha256}});
  }
  manifest["outputs"] = nlohmann::json::object();
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    write_file(dir / name, content);
    manifest["outputs"][name] = digest::sha256(content);
    names.push_back(name);
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  names.push_back("manifest.json");
  return names;
}

}  // namespace review_miner::report
