#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <tuple>

#include "review_miner/syntax.hpp"

using namespace review_miner;
using namespace review_miner::syntax;

namespace {

const std::string kFixture = std::string(RM_FIXTURE_DIR) + "/pairs_30.conllu";

using PairKey = std::tuple<std::string, std::string, std::string>;  // modifier, noun, relation

std::vector<PairKey> pairs_for(const std::vector<ParsedSentence>& sentences, Language lang) {
  const auto policy = TagPolicy::defaults(lang);
  const std::string prefix = lang == Language::English ? "en-" : "zh-";
  std::vector<PairKey> out;
  for (const auto& s : sentences) {
    if (s.sent_id.rfind(prefix, 0) != 0) continue;
    for (const auto& p : extract_pairs(s, policy, lang)) {
      out.emplace_back(p.modifier, p.noun, std::string(relation_name(p.relation)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParsedSentence one(const std::string& conllu) {
  std::istringstream in(conllu);
  auto s = read_conllu(in, "mem");
  EXPECT_EQ(s.size(), 1u);
  return s.front();
}

}  // namespace

TEST(ReadConllu, ThreeTokens) {
  const auto s = one("1\t房间\t房间\tNOUN\tNN\t_\t3\tnsubj\t_\t_\n2\t很\t很\tADV\tAD\t_\t3\tadvmod\t_\t_\n3\t大\t大\tADJ\tVA\t_\t0\troot\t_\t_\n\n");
  EXPECT_EQ(s.tokens.size(), 3u);
  EXPECT_EQ(s.tokens[0].head, 3);
}

TEST(ReadConllu, NineColumnsIsErrorWithLine) {
  std::istringstream in("# c\n1\ta\ta\tX\tX\t_\t0\troot\t_\n");
  try {
    read_conllu(in, "bad.conllu");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.conllu:2"), std::string::npos) << e.what();
  }
}

TEST(ReadConllu, RangeLinesSkipped) {
  const auto s = one(
      "1-2\tvámonos\t_\t_\t_\t_\t_\t_\t_\t_\n1\tvamos\tir\tVERB\tVB\t_\t0\troot\t_\t_\n2\tnos\tnosotros\tPRON\tPRP\t_\t1\tobj\t_\t_\n\n");
  ASSERT_EQ(s.tokens.size(), 2u);
  EXPECT_EQ(s.tokens[0].form, "vamos");
  EXPECT_EQ(s.tokens[1].form, "nos");
}

TEST(ReadConllu, SelfHeadRejected) {
  std::istringstream in("1\ta\ta\tX\tX\t_\t1\troot\t_\t_\n\n");
  EXPECT_THROW(read_conllu(in, "mem"), ParseError);
}

TEST(ReadConllu, RoundTripOnFixture) {
  const auto sentences = read_conllu(kFixture);
  ASSERT_EQ(sentences.size(), 30u);
  std::stringstream ss;
  write_conllu(ss, sentences);
  const auto again = read_conllu(ss, "mem");
  ASSERT_EQ(again.size(), sentences.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    EXPECT_EQ(again[i].sent_id, sentences[i].sent_id);
    EXPECT_EQ(again[i].tokens, sentences[i].tokens);
  }
}

TEST(TagPolicy, DefaultsMatchTables) {
  const auto zh = TagPolicy::defaults(Language::Chinese);
  EXPECT_EQ(zh.adjective_tags, (std::set<std::string>{"VA", "JJ"}));
  EXPECT_EQ(zh.verb_tags, (std::set<std::string>{"VV"}));
  EXPECT_EQ(zh.noun_tags, (std::set<std::string>{"NN"}));
  EXPECT_EQ(zh.filter_tags, (std::set<std::string>{"DT", "PN", "CD", "PU", "DEV", "NR", "M", "SP", "IJ"}));
  const auto en = TagPolicy::defaults(Language::English);
  EXPECT_EQ(en.adjective_tags, (std::set<std::string>{"JJ", "JJS", "JJR"}));
  EXPECT_EQ(en.verb_tags, (std::set<std::string>{"VB", "VBP", "VBN", "VBG"}));
  EXPECT_EQ(en.noun_tags, (std::set<std::string>{"NN", "NNS"}));
  EXPECT_EQ(en.filter_tags, (std::set<std::string>{"DT", "PN", "CD", "PU", "NNP", "PRP$", "WP"}));
  EXPECT_NO_THROW(zh.validate());
  EXPECT_NO_THROW(en.validate());
  auto bad = en;
  bad.filter_tags.insert("JJ");
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(ExtractPairs, AppleIsBig) {
  const auto s = one(
      "1\tThe\tthe\tDET\tDT\t_\t2\tdet\t_\t_\n2\tapple\tapple\tNOUN\tNN\t_\t4\tnsubj\t_\t_\n"
      "3\tis\tbe\tAUX\tVBZ\t_\t4\tcop\t_\t_\n4\tbig\tbig\tADJ\tJJ\t_\t0\troot\t_\t_\n\n");
  const auto pairs = extract_pairs(s, TagPolicy::defaults(Language::English), Language::English);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].modifier, "big");
  EXPECT_EQ(pairs[0].noun, "apple");
  EXPECT_EQ(pairs[0].relation, Relation::Nsubj);
}

TEST(ExtractPairs, CleanRoomAmod) {
  const auto s = one("1\tclean\tclean\tADJ\tJJ\t_\t2\tamod\t_\t_\n2\troom\troom\tNOUN\tNN\t_\t0\troot\t_\t_\n\n");
  const auto pairs = extract_pairs(s, TagPolicy::defaults(Language::English), Language::English);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(std::tie(pairs[0].modifier, pairs[0].noun), std::make_tuple(std::string("clean"), std::string("room")));
  EXPECT_EQ(pairs[0].relation, Relation::Amod);
}

TEST(ExtractPairs, ProperNounSubjectRejected) {
  const auto s = one("1\t日本\t日本\tPROPN\tNR\t_\t3\tnsubj\t_\t_\n2\t很\t很\tADV\tAD\t_\t3\tadvmod\t_\t_\n3\t干净\t干净\tADJ\tVA\t_\t0\troot\t_\t_\n\n");
  EXPECT_TRUE(extract_pairs(s, TagPolicy::defaults(Language::Chinese), Language::Chinese).empty());
}

// Hand-verified expected pairs for the 30-sentence fixture.
TEST(ExtractPairs, FixtureEnglishMultiset) {
  const auto got = pairs_for(read_conllu(kFixture), Language::English);
  std::vector<PairKey> want = {
      {"big", "apple", "nsubj"},         {"clean", "room", "amod"},       {"friendly", "staff", "nsubj"},
      {"large", "room", "amod"},         {"excellent", "breakfast", "nsubj"}, {"cheapest", "hotel", "amod"},
      {"noisy", "hotel", "nsubj"},       {"good", "location", "nsubj"},   {"recommend", "staff", "nsubj"},
      {"dirty", "room", "nsubj"},        {"high", "price", "nsubj"},      {"clean", "room", "nsubj"},
      {"friendly", "staff", "amod"},     {"japanese", "staff", "amod"},
  };
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(ExtractPairs, FixtureChineseMultiset) {
  const auto got = pairs_for(read_conllu(kFixture), Language::Chinese);
  std::vector<PairKey> want = {
      {"好", "服务", "nsubj"}, {"大", "房间", "nsubj"}, {"干净", "房间", "amod"},  {"不错", "早餐", "nsubj"},
      {"方便", "交通", "nsubj"}, {"一般", "价格", "nsubj"}, {"大", "床", "amod"},     {"贵", "酒店", "nsubj"},
      {"新", "房间", "nsubj"}, {"帮忙", "服务员", "nsubj"}, {"远", "位置", "nsubj"},
  };
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

// Every emitted pair comes from an arc in the input with the stated base
// relation, and neither end carries a filtered tag.
TEST(ExtractPairs, FixtureInvariants) {
  for (const auto& s : read_conllu(kFixture)) {
    const auto lang = s.sent_id.rfind("en-", 0) == 0 ? Language::English : Language::Chinese;
    const auto policy = TagPolicy::defaults(lang);
    for (const auto& p : extract_pairs(s, policy, lang)) {
      bool found = false;
      for (const auto& dep : s.tokens) {
        if (base_relation(dep.deprel) != relation_name(p.relation) || dep.head == 0) continue;
        const auto* head = s.find(dep.head);
        const auto& mod = p.relation == Relation::Amod ? dep : *head;
        const auto& noun = p.relation == Relation::Amod ? *head : dep;
        if (pair_key(mod, lang) != p.modifier || pair_key(noun, lang) != p.noun) continue;
        found = true;
        EXPECT_FALSE(policy.filter_tags.count(mod.xpos)) << mod.form;
        EXPECT_FALSE(policy.filter_tags.count(noun.xpos)) << noun.form;
        EXPECT_TRUE(policy.adjective_tags.count(mod.xpos) || policy.verb_tags.count(mod.xpos));
        EXPECT_TRUE(policy.noun_tags.count(noun.xpos));
      }
      EXPECT_TRUE(found) << p.modifier << " " << p.noun;
    }
    EXPECT_EQ(extract_pairs(s, policy, lang), extract_pairs(s, policy, lang));
  }
}

TEST(ExtractPairs, UniversalTags) {
  const auto s = one("1\tclean\tclean\tADJ\t_\t_\t2\tamod\t_\t_\n2\troom\troom\tNOUN\t_\t_\t0\troot\t_\t_\n\n");
  const auto pairs = extract_pairs(s, TagPolicy::universal(), Language::English);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_TRUE(extract_pairs(s, TagPolicy::defaults(Language::English), Language::English).empty());
}

TEST(PairsTsv, RoundTrip) {
  std::vector<AspectPair> pairs = {{"big", "apple", Relation::Nsubj, TagClass::Adjective, "en-01"},
                                   {"clean", "room", Relation::Amod, TagClass::Adjective, "en-02"}};
  std::stringstream ss;
  write_pairs_tsv(ss, pairs);
  const auto back = read_pairs_tsv(ss, "mem");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].modifier, "big");
  EXPECT_EQ(back[1].relation, Relation::Amod);
  EXPECT_EQ(back[1].sentence_id, "en-02");
}
