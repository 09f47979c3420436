#pragma once

// CoNLL-U reading and (modifier, noun) aspect-pair extraction from amod and
// nsubj arcs, filtered by part-of-speech tag policy.

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "review_miner/error.hpp"
#include "review_miner/text.hpp"
#include "review_miner/types.hpp"

namespace review_miner::syntax {

struct ParsedToken {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::string feats;
  int head = 0;  // 0 = root
  std::string deprel;
  std::string deps;
  std::string misc;

  bool operator==(const ParsedToken&) const = default;
};

struct ParsedSentence {
  std::string sent_id;  // "# sent_id = ..." or a 1-based ordinal
  std::string text;     // "# text = ..." when present
  std::vector<ParsedToken> tokens;

  const ParsedToken* find(int id) const {
    for (const auto& t : tokens) {
      if (t.id == id) return &t;
    }
    return nullptr;
  }
};

namespace detail {

inline ParsedToken parse_token_line(const std::vector<std::string>& cols, const std::string& source,
                                    std::size_t line_no) {
  ParsedToken t;
  auto id = text::parse_int<int>(cols[0]);
  if (!id || *id <= 0) throw ParseError(source, line_no, "invalid token id '" + cols[0] + "'");
  auto head = text::parse_int<int>(cols[6]);
  if (!head || *head < 0) throw ParseError(source, line_no, "non-integer head '" + cols[6] + "'");
  if (*head == *id) throw ParseError(source, line_no, "token is its own head");
  t.id = *id;
  t.form = cols[1];
  t.lemma = cols[2];
  t.upos = cols[3];
  t.xpos = cols[4];
  t.feats = cols[5];
  t.head = *head;
  t.deprel = cols[7];
  t.deps = cols[8];
  t.misc = cols[9];
  return t;
}

}  // namespace detail

inline std::vector<ParsedSentence> read_conllu(std::istream& in, const std::string& source) {
  std::vector<ParsedSentence> out;
  ParsedSentence current;
  std::set<int> seen_ids;
  bool open = false;
  auto close = [&] {
    if (open && !current.tokens.empty()) {
      if (current.sent_id.empty()) current.sent_id = std::to_string(out.size() + 1);
      out.push_back(std::move(current));
    }
    current = ParsedSentence{};
    seen_ids.clear();
    open = false;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) {
      close();
      continue;
    }
    open = true;
    if (line.front() == '#') {
      auto body = text::trim(std::string_view(line).substr(1));
      auto eq = body.find('=');
      if (eq != std::string_view::npos) {
        auto key = text::trim(body.substr(0, eq));
        auto value = std::string(text::trim(body.substr(eq + 1)));
        if (key == "sent_id") current.sent_id = value;
        if (key == "text") current.text = value;
      }
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(source, line_no,
                       "expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    }
    // multiword token ranges ("1-2") and empty nodes ("3.1") carry no arcs we use
    if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) continue;
    auto tok = detail::parse_token_line(cols, source, line_no);
    if (!seen_ids.insert(tok.id).second) {
      throw ParseError(source, line_no, "duplicate token id " + std::to_string(tok.id));
    }
    current.tokens.push_back(std::move(tok));
  }
  close();
  return out;
}

inline std::vector<ParsedSentence> read_conllu(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read CoNLL-U file: " + path);
  return read_conllu(in, path);
}

inline void write_conllu_token(std::ostream& out, const ParsedToken& t) {
  out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t' << t.xpos << '\t'
      << t.feats << '\t' << t.head << '\t' << t.deprel << '\t' << t.deps << '\t' << t.misc << '\n';
}

inline void write_conllu(std::ostream& out, const std::vector<ParsedSentence>& sentences) {
  for (const auto& s : sentences) {
    out << "# sent_id = " << s.sent_id << '\n';
    if (!s.text.empty()) out << "# text = " << s.text << '\n';
    for (const auto& t : s.tokens) write_conllu_token(out, t);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Tag policy

enum class TagClass { Adjective, Verb, Noun, Filtered, Other };

enum class TagSource { Xpos, Upos };

struct TagPolicy {
  std::set<std::string> adjective_tags;
  std::set<std::string> verb_tags;
  std::set<std::string> noun_tags;
  std::set<std::string> filter_tags;
  TagSource source = TagSource::Xpos;

  static TagPolicy defaults(Language language) {
    TagPolicy p;
    p.filter_tags = {"DT", "PN", "CD", "PU"};
    if (language == Language::Chinese) {
      p.adjective_tags = {"VA", "JJ"};
      p.verb_tags = {"VV"};
      p.noun_tags = {"NN"};
      p.filter_tags.insert({"DEV", "NR", "M", "SP", "IJ"});
    } else if (language == Language::English) {
      p.adjective_tags = {"JJ", "JJS", "JJR"};
      p.verb_tags = {"VB", "VBP", "VBN", "VBG"};
      p.noun_tags = {"NN", "NNS"};
      p.filter_tags.insert({"NNP", "PRP$", "WP"});
    } else {
      throw ValidationError("no tag policy for this language");
    }
    return p;
  }

  // Universal tags mapped onto the same classes, for treebanks without XPOS.
  static TagPolicy universal() {
    TagPolicy p;
    p.adjective_tags = {"ADJ"};
    p.verb_tags = {"VERB"};
    p.noun_tags = {"NOUN"};
    p.filter_tags = {"DET", "PRON", "NUM", "PUNCT", "PROPN", "INTJ", "PART"};
    p.source = TagSource::Upos;
    return p;
  }

  void validate() const {
    for (const auto* set : {&adjective_tags, &verb_tags, &noun_tags}) {
      for (const auto& tag : *set) {
        if (filter_tags.count(tag)) {
          throw ValidationError("tag '" + tag + "' is both a target and a filtered tag");
        }
      }
    }
  }

  const std::string& tag_of(const ParsedToken& t) const {
    return source == TagSource::Xpos ? t.xpos : t.upos;
  }

  TagClass classify(const ParsedToken& t) const {
    const auto& tag = tag_of(t);
    if (filter_tags.count(tag)) return TagClass::Filtered;
    if (adjective_tags.count(tag)) return TagClass::Adjective;
    if (verb_tags.count(tag)) return TagClass::Verb;
    if (noun_tags.count(tag)) return TagClass::Noun;
    return TagClass::Other;
  }
};

// ---------------------------------------------------------------------------
// Pair extraction

enum class Relation { Amod, Nsubj };

inline std::string_view relation_name(Relation r) { return r == Relation::Amod ? "amod" : "nsubj"; }

struct AspectPair {
  std::string modifier;
  std::string noun;
  Relation relation = Relation::Amod;
  TagClass modifier_class = TagClass::Adjective;  // Adjective or Verb
  std::string sentence_id;

  bool operator==(const AspectPair&) const = default;
};

// "nsubj:pass" -> "nsubj"
inline std::string_view base_relation(std::string_view deprel) {
  auto colon = deprel.find(':');
  return colon == std::string_view::npos ? deprel : deprel.substr(0, colon);
}

// English pairs are keyed by lemma, Chinese by surface form.
inline std::string pair_key(const ParsedToken& t, Language language) {
  if (language == Language::English) {
    if (!t.lemma.empty() && t.lemma != "_") return text::ascii_lower(t.lemma);
    return text::ascii_lower(t.form);
  }
  return t.form;
}

inline std::vector<AspectPair> extract_pairs(const ParsedSentence& sentence, const TagPolicy& policy,
                                             Language language) {
  std::vector<AspectPair> out;
  for (const auto& dep : sentence.tokens) {
    const auto rel = base_relation(dep.deprel);
    Relation relation;
    if (rel == "amod") {
      relation = Relation::Amod;
    } else if (rel == "nsubj") {
      relation = Relation::Nsubj;
    } else {
      continue;
    }
    if (dep.head == 0) continue;
    const ParsedToken* head = sentence.find(dep.head);
    if (!head) continue;
    const ParsedToken& modifier = relation == Relation::Amod ? dep : *head;
    const ParsedToken& noun = relation == Relation::Amod ? *head : dep;
    const auto mod_class = policy.classify(modifier);
    if (mod_class != TagClass::Adjective && mod_class != TagClass::Verb) continue;
    if (policy.classify(noun) != TagClass::Noun) continue;
    out.push_back({pair_key(modifier, language), pair_key(noun, language), relation, mod_class,
                   sentence.sent_id});
  }
  return out;
}

// modifier<TAB>noun<TAB>deprel<TAB>sentence_id. The modifier's tag class is
// not written.
inline void write_pairs_tsv(std::ostream& out, const std::vector<AspectPair>& pairs) {
  for (const auto& p : pairs) {
    out << text::tsv_escape(p.modifier) << '\t' << text::tsv_escape(p.noun) << '\t'
        << relation_name(p.relation) << '\t' << text::tsv_escape(p.sentence_id) << '\n';
  }
}

inline std::vector<AspectPair> read_pairs_tsv(std::istream& in, const std::string& source) {
  std::vector<AspectPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 4) throw ParseError(source, line_no, "expected 4 columns");
    AspectPair p;
    p.modifier = text::tsv_unescape(cols[0]);
    p.noun = text::tsv_unescape(cols[1]);
    if (cols[2] == "amod") {
      p.relation = Relation::Amod;
    } else if (cols[2] == "nsubj") {
      p.relation = Relation::Nsubj;
    } else {
      throw ParseError(source, line_no, "unknown relation '" + cols[2] + "'");
    }
    p.sentence_id = text::tsv_unescape(cols[3]);
    p.modifier_class = TagClass::Other;  // not part of the dump format
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace review_miner::syntax
