#pragma once

// Planted-lexicon corpus generator. Produces review files, labelled training
// sentences, CoNLL-U parses, an attribute lexicon and the ground truth
// (planted words, dominant nouns, sentence labels) for both languages.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "review_miner/corpus.hpp"
#include "review_miner/lemmatizer.hpp"
#include "review_miner/random.hpp"
#include "review_miner/syntax.hpp"
#include "review_miner/text.hpp"
#include "review_miner/types.hpp"

namespace review_miner::synthetic {

struct Options {
  std::uint64_t seed = 20170731;
  int corpus_sentences = 2000;
  int training_sentences = 600;
  int planted_per_class = 20;  // half adjectives, half verbs
  int noise_words = 200;       // includes the aspect nouns
  int aspect_nouns = 30;
  double contamination = 0.02;
  double positive_share = 0.6;           // corpus sentences
  double training_positive_share = 0.5;  // labelled sentences
  double dominant_share = 0.7;
  double trap_share = 0.1;
  double out_of_window = 0.03;
  int shared_hotels = 40;
  int unmatched_hotels = 3;  // per language
};

struct PlantedWord {
  std::string word;
  Sentiment polarity = Sentiment::Positive;
  bool adjective = false;
  std::string dominant_noun;  // adjectives only
};

struct Vocabulary {
  Language language = Language::Other;
  std::vector<PlantedWord> planted;
  std::vector<std::string> fillers;       // noise words that are not nouns
  std::vector<std::string> aspect_nouns;  // noise words usable as pair nouns
  std::vector<std::string> proper_nouns;  // filtered-tag traps
  std::vector<std::string> determiners;   // filtered-tag traps

  std::vector<const PlantedWord*> of(Sentiment s) const {
    std::vector<const PlantedWord*> out;
    for (const auto& p : planted) {
      if (p.polarity == s) out.push_back(&p);
    }
    return out;
  }
};

struct Token {
  std::string word;
  std::string xpos;
  int head = 0;  // 1-based, 0 = root
  std::string deprel;
};

struct Sentence {
  std::vector<Token> tokens;
  Sentiment label = Sentiment::Positive;

  // Space separated; English sentences are capitalised.
  std::string text(Language lang) const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out.push_back(' ');
      out += surface(i, lang);
    }
    return out;
  }

  std::string surface(std::size_t i, Language lang) const {
    std::string w = tokens[i].word;
    if (lang == Language::English && i == 0 && !w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 32);
    return w;
  }
};

namespace detail {

inline std::string english_word(Rng& rng) {
  static constexpr std::string_view kOnset = "bdfgklmnprtvz";
  static constexpr std::string_view kVowel = "aeiou";
  static constexpr std::string_view kFinal = "aoui";
  const int syllables = static_cast<int>(rng.between(2, 3));
  std::string w;
  for (int i = 0; i < syllables; ++i) {
    w.push_back(kOnset[rng.below(kOnset.size())]);
    w.push_back(i + 1 == syllables ? kFinal[rng.below(kFinal.size())] : kVowel[rng.below(kVowel.size())]);
  }
  return w;
}

inline std::string chinese_word(Rng& rng) {
  std::string w;
  for (int i = 0; i < 2; ++i) text::append_utf8(w, static_cast<char32_t>(0x4E00 + rng.below(0x5000)));
  return w;
}

}  // namespace detail

inline Vocabulary make_vocabulary(Language lang, const Options& opt, Rng& rng) {
  Vocabulary v;
  v.language = lang;
  const textproc::Lemmatizer lemmatizer;
  std::set<std::string> used;
  auto fresh = [&] {
    while (true) {
      auto w = lang == Language::Chinese ? detail::chinese_word(rng) : detail::english_word(rng);
      if (lang == Language::English && lemmatizer.lemmatize(w) != w) continue;
      if (used.insert(w).second) return w;
    }
  };
  for (int i = 0; i < opt.aspect_nouns; ++i) v.aspect_nouns.push_back(fresh());
  for (int i = opt.aspect_nouns; i < opt.noise_words; ++i) v.fillers.push_back(fresh());
  for (int i = 0; i < 5; ++i) v.proper_nouns.push_back(fresh());
  for (int i = 0; i < 3; ++i) v.determiners.push_back(fresh());
  int next_noun = 0;
  for (auto s : {Sentiment::Positive, Sentiment::Negative}) {
    for (int i = 0; i < opt.planted_per_class; ++i) {
      PlantedWord p;
      p.word = fresh();
      p.polarity = s;
      p.adjective = i < opt.planted_per_class / 2;
      if (p.adjective) p.dominant_noun = v.aspect_nouns[next_noun++ % v.aspect_nouns.size()];
      v.planted.push_back(std::move(p));
    }
  }
  return v;
}

namespace detail {

struct Chunk {
  std::vector<Token> tokens;  // heads are chunk-local, 1-based; 0 = chunk head
};

inline std::string tag(Language lang, std::string_view what) {
  const bool zh = lang == Language::Chinese;
  if (what == "adj") return zh ? "VA" : "JJ";
  if (what == "verb") return zh ? "VV" : "VBP";
  if (what == "noun") return "NN";
  if (what == "proper") return zh ? "NR" : "NNP";
  if (what == "det") return "DT";
  return zh ? "AD" : "RB";
}

}  // namespace detail

inline Sentence make_sentence(const Vocabulary& v, Sentiment label, const Options& opt, Rng& rng) {
  using detail::Chunk;
  const auto lang = v.language;
  std::vector<Chunk> chunks;
  auto planted_chunk = [&](const PlantedWord& p) {
    Chunk c;
    if (!p.adjective) {
      c.tokens.push_back({p.word, detail::tag(lang, "verb"), 0, ""});
      return c;
    }
    std::string noun = p.dominant_noun;
    if (!rng.chance(opt.dominant_share)) {
      do {
        noun = v.aspect_nouns[rng.below(v.aspect_nouns.size())];
      } while (noun == p.dominant_noun);
    }
    if (rng.chance(0.5)) {
      // amod: adjective before its noun, noun heads the chunk
      c.tokens.push_back({p.word, detail::tag(lang, "adj"), 2, "amod"});
      c.tokens.push_back({noun, detail::tag(lang, "noun"), 0, ""});
    } else {
      // predicate adjective with its nominal subject
      c.tokens.push_back({noun, detail::tag(lang, "noun"), 2, "nsubj"});
      c.tokens.push_back({p.word, detail::tag(lang, "adj"), 0, ""});
    }
    if (rng.chance(opt.trap_share)) {
      // a proper noun or determiner subject: filtered, never a pair
      const int adj_pos = c.tokens[0].xpos == detail::tag(lang, "adj") ? 1 : 2;
      const bool proper = rng.chance(0.5);
      const auto& pool = proper ? v.proper_nouns : v.determiners;
      c.tokens.insert(c.tokens.begin(), Token{pool[rng.below(pool.size())],
                                              detail::tag(lang, proper ? "proper" : "det"), adj_pos + 1, "nsubj"});
      for (std::size_t i = 1; i < c.tokens.size(); ++i) {
        if (c.tokens[i].head > 0) ++c.tokens[i].head;
      }
    }
    return c;
  };

  const auto own = v.of(label);
  const auto other = v.of(label == Sentiment::Positive ? Sentiment::Negative : Sentiment::Positive);
  const int n_planted = static_cast<int>(rng.between(1, 2));
  for (int i = 0; i < n_planted; ++i) chunks.push_back(planted_chunk(*own[rng.below(own.size())]));
  if (rng.chance(opt.contamination)) chunks.push_back(planted_chunk(*other[rng.below(other.size())]));
  const int n_noise = static_cast<int>(rng.between(3, 6));
  for (int i = 0; i < n_noise; ++i) {
    Chunk c;
    if (rng.chance(0.2)) {
      c.tokens.push_back({v.aspect_nouns[rng.below(v.aspect_nouns.size())], detail::tag(lang, "noun"), 0, ""});
    } else {
      c.tokens.push_back({v.fillers[rng.below(v.fillers.size())], detail::tag(lang, "other"), 0, ""});
    }
    chunks.push_back(std::move(c));
  }
  rng.shuffle(std::span<Chunk>(chunks));

  Sentence s;
  s.label = label;
  int root = 0;
  for (const auto& c : chunks) {
    const int base = static_cast<int>(s.tokens.size());
    int chunk_head = 0;
    for (std::size_t i = 0; i < c.tokens.size(); ++i) {
      if (c.tokens[i].head == 0) chunk_head = base + static_cast<int>(i) + 1;
    }
    for (const auto& t : c.tokens) {
      Token out = t;
      if (t.head > 0) {
        out.head = base + t.head;
      } else if (root == 0) {
        out.head = 0;
        out.deprel = "root";
      } else {
        out.head = root;
        out.deprel = "dep";
      }
      s.tokens.push_back(std::move(out));
    }
    if (root == 0) root = chunk_head;
  }
  return s;
}

inline std::vector<Sentence> make_sentences(const Vocabulary& v, int n, double positive_share, const Options& opt,
                                            Rng& rng) {
  std::vector<Sentence> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto label = rng.chance(positive_share) ? Sentiment::Positive : Sentiment::Negative;
    out.push_back(make_sentence(v, label, opt, rng));
  }
  return out;
}

inline syntax::ParsedSentence to_parsed(const Sentence& s, Language lang, const std::string& sent_id) {
  syntax::ParsedSentence p;
  p.sent_id = sent_id;
  p.text = s.text(lang);
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const auto& t = s.tokens[i];
    syntax::ParsedToken pt;
    pt.id = static_cast<int>(i) + 1;
    pt.form = s.surface(i, lang);
    pt.lemma = t.word;
    pt.upos = "_";
    pt.xpos = t.xpos;
    pt.feats = "_";
    pt.head = t.head;
    pt.deprel = t.deprel;
    pt.deps = "_";
    pt.misc = "_";
    p.tokens.push_back(std::move(pt));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Demo bundle

struct Hotel {
  std::string id;
  std::string name;
  long long price_low = 0;
  long long price_high = 0;
};

struct LanguageOutput {
  Vocabulary vocabulary;
  std::vector<Sentence> training;
  std::vector<Sentence> corpus;
  std::vector<std::string> corpus_ids;  // review:index of each corpus sentence
};

struct Demo {
  Options options;
  std::vector<LanguageOutput> languages;  // zh, en
};

namespace detail {

inline std::string hotel_name(Rng& rng) {
  static const std::vector<std::string> kKinds = {"Hotel", "Inn", "Ryokan", "Resort", "Hostel", "Suites"};
  auto word = [&] {
    auto w = english_word(rng);
    w[0] = static_cast<char>(w[0] - 32);
    return w;
  };
  return kKinds[rng.below(kKinds.size())] + " " + word() + " " + word();
}

// The same hotel as listed on the other site: case, spacing and punctuation differ.
inline std::string restyle_name(const std::string& name) {
  std::string out;
  for (char c : name) out.push_back(c == ' ' ? '-' : c);
  return text::ascii_lower(out) + "  ";
}

inline corpus::Date random_date(Rng& rng, bool inside) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  corpus::Date d;
  if (inside) {
    // 2014-07 .. 2017-07
    const int month_index = static_cast<int>(rng.between(0, 36));
    d.year = 2014 + (6 + month_index) / 12;
    d.month = (6 + month_index) % 12 + 1;
  } else {
    d.year = rng.chance(0.5) ? 2013 : 2018;
    d.month = static_cast<int>(rng.between(1, 12));
  }
  d.day = static_cast<int>(rng.between(1, kDays[d.month - 1]));
  return d;
}

inline void write(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + p.string());
  out << content;
}

}  // namespace detail

// Writes reviews_L.jsonl, training_L.tsv, parses_L.conllu, lexicon_L.tsv,
// planted_L.tsv, truth_L.tsv for L in {zh, en}, plus demo.conf.
inline Demo write_demo(const std::filesystem::path& dir, const Options& opt = {}) {
  std::filesystem::create_directories(dir);
  Rng rng(opt.seed);
  Demo demo;
  demo.options = opt;

  // Hotels: shared ones appear on both sites under restyled names.
  std::vector<std::string> shared_names;
  std::set<std::string> taken;
  while (static_cast<int>(shared_names.size()) < opt.shared_hotels + 2 * opt.unmatched_hotels) {
    auto n = detail::hotel_name(rng);
    if (taken.insert(corpus::normalize_hotel_name(n)).second) shared_names.push_back(n);
  }
  std::vector<std::pair<long long, long long>> prices;
  for (std::size_t i = 0; i < shared_names.size(); ++i) {
    const int bin = static_cast<int>(rng.between(1, corpus::kPriceBinCount));
    const auto b = corpus::price_bin(bin);
    const long long high = rng.between(b.low, b.high - 1);
    prices.emplace_back(high * 6 / 10, high);
  }

  for (auto lang : {Language::Chinese, Language::English}) {
    const bool zh = lang == Language::Chinese;
    const std::string l(language_code(lang));
    std::vector<Hotel> hotels;
    for (int i = 0; i < opt.shared_hotels; ++i) {
      hotels.push_back({(zh ? "ctrip-" : "ta-") + std::to_string(100 + i),
                        zh ? detail::restyle_name(shared_names[i]) : shared_names[i], prices[i].first,
                        prices[i].second});
    }
    for (int i = 0; i < opt.unmatched_hotels; ++i) {
      const int j = opt.shared_hotels + (zh ? i : opt.unmatched_hotels + i);
      hotels.push_back({(zh ? "ctrip-" : "ta-") + std::to_string(100 + j), shared_names[j], prices[j].first,
                        prices[j].second});
    }

    LanguageOutput lo;
    lo.vocabulary = make_vocabulary(lang, opt, rng);
    lo.training = make_sentences(lo.vocabulary, opt.training_sentences, opt.training_positive_share, opt, rng);
    lo.corpus = make_sentences(lo.vocabulary, opt.corpus_sentences, opt.positive_share, opt, rng);

    std::ostringstream reviews, conllu, truth;
    std::size_t next = 0;
    int review_no = 0;
    while (next < lo.corpus.size()) {
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(rng.between(1, 4)), lo.corpus.size() - next);
      const std::string rid = l + "-r" + std::to_string(++review_no);
      const auto& hotel = hotels[rng.below(hotels.size())];
      std::string body;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = lo.corpus[next + i];
        const std::string sid = rid + ":" + std::to_string(i);
        lo.corpus_ids.push_back(sid);
        body += s.text(lang);
        body += zh ? (rng.chance(0.2) ? "！" : "。") : (i + 1 < n ? ". " : ".");
        truth << sid << '\t' << sentiment_code(s.label) << '\n';
        std::vector<syntax::ParsedSentence> one = {to_parsed(s, lang, sid)};
        syntax::write_conllu(conllu, one);
      }
      next += n;
      nlohmann::json j;
      j["id"] = rid;
      j["hotel_id"] = hotel.id;
      j["hotel_name_en"] = hotel.name;
      j["date"] = detail::random_date(rng, !rng.chance(opt.out_of_window)).to_string();
      j["price_low_jpy"] = hotel.price_low;
      j["price_high_jpy"] = hotel.price_high;
      if (rng.chance(0.5)) j["lang"] = l;  // otherwise detected
      j["text"] = body;
      reviews << j.dump() << '\n';
    }

    std::ostringstream training;
    for (const auto& s : lo.training) training << sentiment_code(s.label) << '\t' << s.text(lang) << '\n';

    std::ostringstream planted;
    planted << "word\tpolarity\tkind\tdominant_noun\n";
    for (const auto& p : lo.vocabulary.planted) {
      planted << p.word << '\t' << sentiment_code(p.polarity) << '\t' << (p.adjective ? "adjective" : "verb")
              << '\t' << (p.adjective ? p.dominant_noun : "-") << '\n';
    }

    // Every word gets an attribute triple in quarters.
    static const std::vector<std::array<int, 3>> kTriples = {
        {4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {2, 1, 1}, {1, 2, 1}, {3, 1, 0}, {1, 3, 0}, {2, 2, 0}, {0, 2, 2}};
    std::vector<std::string> words;
    for (const auto& p : lo.vocabulary.planted) words.push_back(p.word);
    for (const auto* pool : {&lo.vocabulary.fillers, &lo.vocabulary.aspect_nouns, &lo.vocabulary.proper_nouns,
                             &lo.vocabulary.determiners}) {
      words.insert(words.end(), pool->begin(), pool->end());
    }
    std::sort(words.begin(), words.end());
    std::ostringstream lexicon;
    lexicon << "# keyword\thard\tsoft\tundefined\n";
    for (const auto& w : words) {
      const auto& t = kTriples[rng.below(kTriples.size())];
      lexicon << w << '\t' << text::format_fixed(t[0] / 4.0, 2) << '\t' << text::format_fixed(t[1] / 4.0, 2) << '\t'
              << text::format_fixed(t[2] / 4.0, 2) << '\n';
    }

    detail::write(dir / ("reviews_" + l + ".jsonl"), reviews.str());
    detail::write(dir / ("training_" + l + ".tsv"), training.str());
    detail::write(dir / ("parses_" + l + ".conllu"), conllu.str());
    detail::write(dir / ("truth_" + l + ".tsv"), truth.str());
    detail::write(dir / ("planted_" + l + ".tsv"), planted.str());
    detail::write(dir / ("lexicon_" + l + ".tsv"), lexicon.str());
    demo.languages.push_back(std::move(lo));
  }

  std::ostringstream conf;
  conf << "# synthetic demo corpus, generator seed " << opt.seed << "\n"
       << "seed = 42\n"
       << "out = out\n"
       << "date.start = 2014-07-01\n"
       << "date.end = 2017-07-31\n";
  for (const char* l : {"zh", "en"}) {
    conf << l << ".reviews = reviews_" << l << ".jsonl\n"
         << l << ".training = training_" << l << ".tsv\n"
         << l << ".conllu = parses_" << l << ".conllu\n"
         << l << ".lexicon = lexicon_" << l << ".tsv\n";
  }
  detail::write(dir / "demo.conf", conf.str());
  return demo;
}

// ---------------------------------------------------------------------------
// Ground-truth readers

inline std::vector<PlantedWord> read_planted(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::vector<PlantedWord> out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) continue;
    PlantedWord p;
    p.word = cols[0];
    p.polarity = sentiment_from_code(cols[1]);
    p.adjective = cols[2] == "adjective";
    if (p.adjective) p.dominant_noun = cols[3];
    out.push_back(std::move(p));
  }
  return out;
}

inline std::map<std::string, Sentiment> read_truth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::map<std::string, Sentiment> out;
  std::string line;
  while (std::getline(in, line)) {
    auto cols = text::split(line, '\t');
    if (cols.size() == 2) out[cols[0]] = sentiment_from_code(cols[1]);
  }
  return out;
}

}  // namespace review_miner::synthetic
