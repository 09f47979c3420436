#include <gtest/gtest.h>

#include <sstream>

#include "review_miner/corpus.hpp"
#include "review_miner/random.hpp"

using namespace review_miner;
using namespace review_miner::corpus;

namespace {

Review review(std::string id, std::string hotel, std::string name, Language lang = Language::English,
              std::string text = "Nice.") {
  Review r;
  r.review_id = std::move(id);
  r.hotel_id = std::move(hotel);
  r.hotel_name_en = std::move(name);
  r.date = *Date::parse("2015-03-02");
  r.price_low = 8000;
  r.price_high = 12000;
  r.language = lang;
  r.text = std::move(text);
  return r;
}

std::vector<std::string> texts(const std::vector<SentenceRecord>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(r.text);
  return out;
}

}  // namespace

TEST(LoadReviews, MapsFields) {
  std::istringstream in(
      R"({"id":"r1","hotel_id":"h1","hotel_name_en":"Hotel A","date":"2015-03-02","price_low_jpy":8000,"price_high_jpy":12000,"text":"Great stay."})");
  auto res = load_reviews(in, "t");
  ASSERT_EQ(res.reviews.size(), 1u);
  EXPECT_EQ(res.reviews[0].price_high, 12000);
  EXPECT_EQ(res.reviews[0].language, Language::English);
  EXPECT_EQ(res.reviews[0].date, *Date::parse("2015-03-02"));
}

TEST(LoadReviews, EmptyFileIsError) {
  std::istringstream in("");
  try {
    load_reviews(in, "empty");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("zero valid records"), std::string::npos);
  }
}

TEST(LoadReviews, MissingPriceSkippedWhenLenient) {
  std::istringstream in(
      "{\"id\":\"r1\",\"hotel_id\":\"h1\",\"hotel_name_en\":\"A\",\"date\":\"2015-03-02\",\"price_low_jpy\":1,\"text\":\"x\"}\n"
      "{\"id\":\"r2\",\"hotel_id\":\"h1\",\"hotel_name_en\":\"A\",\"date\":\"2015-03-02\",\"price_low_jpy\":1,\"price_high_jpy\":2,\"text\":\"ok\"}\n");
  auto res = load_reviews(in, "t");
  EXPECT_EQ(res.reviews.size(), 1u);
  ASSERT_EQ(res.diagnostics.size(), 1u);
  EXPECT_NE(res.diagnostics[0].find("t:1"), std::string::npos);

  std::istringstream again(
      "{\"id\":\"r1\",\"hotel_id\":\"h1\",\"hotel_name_en\":\"A\",\"date\":\"2015-03-02\",\"price_low_jpy\":1,\"text\":\"x\"}\n");
  EXPECT_THROW(load_reviews(again, "t", LoadOptions{true}), ParseError);
}

TEST(LoadReviews, RejectsInvertedPricesAndBlankText) {
  std::istringstream in(
      "{\"id\":\"r1\",\"hotel_id\":\"h\",\"hotel_name_en\":\"A\",\"date\":\"2015-03-02\",\"price_low_jpy\":5,\"price_high_jpy\":2,\"text\":\"x\"}\n"
      "{\"id\":\"r2\",\"hotel_id\":\"h\",\"hotel_name_en\":\"A\",\"date\":\"2015-03-02\",\"price_low_jpy\":1,\"price_high_jpy\":2,\"text\":\"   \"}\n"
      "{\"id\":\"r3\",\"hotel_id\":\"h\",\"hotel_name_en\":\"A\",\"date\":\"2015-03-02\",\"price_low_jpy\":1,\"price_high_jpy\":2,\"text\":\"fine\"}\n");
  auto res = load_reviews(in, "t");
  EXPECT_EQ(res.reviews.size(), 1u);
  EXPECT_EQ(res.diagnostics.size(), 2u);
}

TEST(DetectLanguage, Examples) {
  EXPECT_EQ(detect_language("酒店 的 服务 很 好"), Language::Chinese);
  EXPECT_EQ(detect_language("The staff was friendly"), Language::English);
  EXPECT_EQ(detect_language("123 456 !!!"), Language::Other);
  EXPECT_EQ(detect_language(""), Language::Other);
}

TEST(DetectLanguage, TotalAndDeterministicOnRandomBytes) {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const auto n = rng.below(40);
    for (std::uint64_t j = 0; j < n; ++j) s.push_back(static_cast<char>(rng.below(256)));
    EXPECT_EQ(detect_language(s), detect_language(s));
  }
}

TEST(SplitSentences, ChineseTwoDelimiters) {
  auto rs = split_sentences(review("r", "h", "A", Language::Chinese, "酒店 很 好。早餐 一般。"));
  EXPECT_EQ(texts(rs), (std::vector<std::string>{"酒店 很 好", "早餐 一般"}));
  EXPECT_EQ(rs[1].index_in_review, 1);
  EXPECT_EQ(rs[0].price_bin.ordinal, 4);
}

TEST(SplitSentences, AbbreviationGuard) {
  auto rs = split_sentences(review("r", "h", "A", Language::English, "Great stay. Dr. Lee was kind."));
  EXPECT_EQ(texts(rs), (std::vector<std::string>{"Great stay", "Dr. Lee was kind"}));
}

TEST(SplitSentences, NoDelimiter) {
  auto rs = split_sentences(review("r", "h", "A", Language::English, "No delimiter here"));
  EXPECT_EQ(texts(rs), (std::vector<std::string>{"No delimiter here"}));
}

TEST(SplitSentences, OtherLanguageRejected) {
  EXPECT_THROW(split_sentences(review("r", "h", "A", Language::Other, "???")), DataError);
}

// Concatenating the sentences reproduces every non-delimiter, non-space
// character of the review in order; indices run 0..n-1.
TEST(SplitSentences, PropertyPreservesContent) {
  Rng rng(11);
  const std::vector<std::string> zh_pieces = {"酒店", "很", "好", "。", "！", "？", "早餐", " ", "；"};
  const std::vector<std::string> en_pieces = {"room", "was", "nice", ".", "!", "?", " ", "big", "ok"};
  for (int trial = 0; trial < 300; ++trial) {
    const bool zh = trial % 2 == 0;
    const auto& pieces = zh ? zh_pieces : en_pieces;
    std::string t;
    const auto n = 1 + rng.below(15);
    for (std::uint64_t i = 0; i < n; ++i) t += pieces[rng.below(pieces.size())];
    if (text::trim(t).empty()) continue;
    auto r = review("r", "h", "A", zh ? Language::Chinese : Language::English, t);
    auto rs = split_sentences(r);
    auto strip = [&](std::string_view s) {
      std::string out;
      for (std::size_t i = 0; i < s.size();) {
        auto d = text::decode_utf8(s, i);
        const bool delim = zh ? is_chinese_delimiter(d.cp) : is_english_delimiter(d.cp);
        if (!delim && !text::is_space(d.cp)) out.append(s.substr(i, d.length));
        i += d.length;
      }
      return out;
    };
    std::string joined;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      EXPECT_EQ(rs[i].index_in_review, static_cast<int>(i));
      EXPECT_FALSE(rs[i].text.empty());
      joined += rs[i].text;
    }
    EXPECT_EQ(strip(joined), strip(t)) << t;
  }
}

TEST(PriceBin, Examples) {
  EXPECT_EQ(assign_price_bin(12000).ordinal, 4);
  EXPECT_EQ(assign_price_bin(15000).ordinal, 5);
  EXPECT_EQ(assign_price_bin(0).ordinal, 1);
  EXPECT_EQ(assign_price_bin(199999).ordinal, 9);
  EXPECT_THROW(assign_price_bin(250000), DataError);
  EXPECT_THROW(assign_price_bin(200000), DataError);
  EXPECT_THROW(assign_price_bin(-1), DataError);
  EXPECT_EQ(price_bin_label(4), "4: 10,000 to 15,000 yen");
  EXPECT_EQ(price_bin_label(2), "2: 2500 to 5000 yen");
  EXPECT_EQ(price_bin_label(0), "0: All Prices");
}

TEST(PriceBin, BoundariesAreExact) {
  EXPECT_EQ(kPriceBoundaries, (std::array<long long, 10>{0, 2500, 5000, 10000, 15000, 20000, 30000, 50000,
                                                          100000, 200000}));
}

TEST(PriceBin, PartitionAtEveryBoundary) {
  for (long long b : kPriceBoundaries) {
    for (long long p : {b - 1, b, b + 1}) {
      if (p < 0 || p >= 200000) continue;
      int hits = 0;
      for (int o = 1; o <= kPriceBinCount; ++o) {
        const auto bin = price_bin(o);
        if (bin.low <= p && p < bin.high) ++hits;
      }
      EXPECT_EQ(hits, 1) << p;
      const auto bin = assign_price_bin(p);
      EXPECT_TRUE(bin.low <= p && p < bin.high) << p;
    }
  }
}

TEST(MatchHotels, NormalizedNamesMatch) {
  auto join = match_hotels({review("a1", "ha", "Hotel  GRANVIA Kyoto")},
                           {review("b1", "hb", "hotel granvia kyoto")});
  ASSERT_EQ(join.matched.size(), 1u);
  EXPECT_EQ(join.matched[0].hotel_id_a, "ha");
  EXPECT_EQ(join.matched[0].hotel_id_b, "hb");
  EXPECT_TRUE(join.unmatched_a.empty());
}

TEST(MatchHotels, AmbiguousNamesExcluded) {
  auto join = match_hotels({review("a1", "h1", "Hotel Sun"), review("a2", "h2", "Hotel Sun")},
                           {review("b1", "hb", "Hotel Sun")});
  EXPECT_TRUE(join.matched.empty());
  EXPECT_EQ(join.unmatched_a, (std::set<std::string>{"h1", "h2"}));
  EXPECT_EQ(join.unmatched_b, (std::set<std::string>{"hb"}));
  EXPECT_FALSE(join.diagnostics.empty());
}

TEST(MatchHotels, DisjointNames) {
  auto join = match_hotels({review("a1", "h1", "Alpha")}, {review("b1", "h2", "Beta")});
  EXPECT_TRUE(join.matched.empty());
}

TEST(MatchHotels, PropertySymmetricAndOneToOne) {
  Rng rng(3);
  const std::vector<std::string> names = {"Sun", "Moon", "Star", "Sky", "Sea", "Hill"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Review> a, b;
    for (int i = 0; i < 6; ++i) {
      a.push_back(review("a" + std::to_string(i), "A" + std::to_string(rng.below(5)), names[rng.below(names.size())]));
      b.push_back(review("b" + std::to_string(i), "B" + std::to_string(rng.below(5)), names[rng.below(names.size())]));
    }
    auto ab = match_hotels(a, b);
    auto ba = match_hotels(b, a);
    ASSERT_EQ(ab.matched.size(), ba.matched.size());
    for (std::size_t i = 0; i < ab.matched.size(); ++i) {
      EXPECT_EQ(ab.matched[i].hotel_id_a, ba.matched[i].hotel_id_b);
      EXPECT_EQ(ab.matched[i].hotel_id_b, ba.matched[i].hotel_id_a);
    }
    EXPECT_EQ(ab.unmatched_a, ba.unmatched_b);
    EXPECT_EQ(ab.unmatched_b, ba.unmatched_a);
    std::set<std::string> ids;
    for (const auto& m : ab.matched) {
      EXPECT_TRUE(ids.insert(m.hotel_id_a).second);
      EXPECT_TRUE(ids.insert(m.hotel_id_b).second);
    }
  }
}

TEST(FilterByDate, WindowIsInclusive) {
  const auto start = *Date::parse("2014-07-01");
  const auto end = *Date::parse("2017-07-31");
  auto inside = review("r1", "h", "A");
  inside.date = *Date::parse("2015-01-01");
  auto before = review("r2", "h", "A");
  before.date = *Date::parse("2014-06-30");
  auto edge = review("r3", "h", "A");
  edge.date = end;
  auto out = filter_by_date({inside, before, edge}, start, end);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].review_id, "r1");
  EXPECT_EQ(out[1].review_id, "r3");
  EXPECT_TRUE(filter_by_date({}, start, end).empty());
}

TEST(Date, ParseAndFormat) {
  EXPECT_FALSE(Date::parse("2015-02-29"));
  EXPECT_TRUE(Date::parse("2016-02-29"));
  EXPECT_FALSE(Date::parse("2015-13-01"));
  EXPECT_EQ(Date::parse("2016-02-29")->to_string(), "2016-02-29");
}
