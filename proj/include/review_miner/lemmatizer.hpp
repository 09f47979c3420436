#pragma once

// Rule-based English lemmatizer: an exception table for irregular forms and
// words the suffix rules would damage, then plural / -ing / -ed stripping and
// comparative / superlative stripping restricted to known gradable adjectives.
// Rules are applied until a fixed point, so lemmatize(lemmatize(w)) ==
// lemmatize(w) holds by construction.

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "review_miner/error.hpp"
#include "review_miner/text.hpp"

namespace review_miner::textproc {

namespace detail {

// surface -> lemma. Entries mapping a word to itself protect it from the
// suffix rules.
inline const std::vector<std::pair<std::string_view, std::string_view>>& default_exceptions() {
  static const std::vector<std::pair<std::string_view, std::string_view>> table{
      // copula and auxiliaries
      {"am", "be"}, {"is", "be"}, {"are", "be"}, {"was", "be"}, {"were", "be"},
      {"been", "be"}, {"being", "be"}, {"'s", "be"}, {"has", "have"}, {"had", "have"},
      {"having", "have"}, {"does", "do"}, {"did", "do"}, {"done", "do"}, {"doing", "do"},
      // irregular comparison
      {"better", "good"}, {"best", "good"}, {"worse", "bad"}, {"worst", "bad"},
      {"more", "more"}, {"most", "most"}, {"less", "less"}, {"least", "least"},
      {"further", "far"}, {"farther", "far"}, {"furthest", "far"}, {"farthest", "far"},
      // irregular verbs
      {"went", "go"}, {"gone", "go"}, {"goes", "go"}, {"going", "go"},
      {"came", "come"}, {"coming", "come"}, {"saw", "see"}, {"seen", "see"}, {"seeing", "see"},
      {"took", "take"}, {"taken", "take"}, {"taking", "take"}, {"made", "make"},
      {"making", "make"}, {"got", "get"}, {"gotten", "get"}, {"getting", "get"},
      {"gave", "give"}, {"given", "give"}, {"giving", "give"}, {"found", "find"},
      {"told", "tell"}, {"said", "say"}, {"says", "say"}, {"paid", "pay"}, {"left", "leave"},
      {"leaving", "leave"}, {"felt", "feel"}, {"kept", "keep"}, {"slept", "sleep"},
      {"brought", "bring"}, {"bought", "buy"}, {"thought", "think"}, {"knew", "know"},
      {"known", "know"}, {"ate", "eat"}, {"eaten", "eat"}, {"drank", "drink"},
      {"drunk", "drink"}, {"ran", "run"}, {"began", "begin"}, {"begun", "begin"},
      {"chose", "choose"}, {"chosen", "choose"}, {"wrote", "write"}, {"written", "write"},
      {"spoke", "speak"}, {"spoken", "speak"}, {"stood", "stand"}, {"understood", "understand"},
      {"meant", "mean"}, {"met", "meet"}, {"sat", "sit"}, {"spent", "spend"}, {"sent", "send"},
      {"built", "build"}, {"lost", "lose"}, {"held", "hold"}, {"heard", "hear"},
      {"booked", "book"}, {"arrived", "arrive"}, {"arriving", "arrive"}, {"used", "use"},
      {"using", "use"}, {"liked", "like"}, {"liking", "like"}, {"loved", "love"},
      {"loving", "love"}, {"served", "serve"}, {"serving", "serve"}, {"provided", "provide"},
      {"providing", "provide"}, {"included", "include"}, {"including", "include"},
      {"closed", "close"}, {"closing", "close"}, {"hoped", "hope"}, {"changed", "change"},
      {"changing", "change"}, {"driving", "drive"}, {"drove", "drive"}, {"driven", "drive"},
      {"rode", "ride"}, {"ridden", "ride"}, {"hid", "hide"}, {"woke", "wake"}, {"shone", "shine"},
      {"stayed", "stay"}, {"staying", "stay"}, {"cleaned", "clean"}, {"cleaning", "clean"},
      {"children", "child"}, {"men", "man"}, {"women", "woman"}, {"feet", "foot"},
      {"teeth", "tooth"}, {"people", "people"}, {"mice", "mouse"},
      // words the suffix rules would damage
      {"this", "this"}, {"his", "his"}, {"its", "its"}, {"yes", "yes"}, {"bus", "bus"},
      {"always", "always"}, {"perhaps", "perhaps"}, {"sometimes", "sometimes"},
      {"towards", "towards"}, {"afterwards", "afterwards"}, {"besides", "besides"},
      {"whereas", "whereas"}, {"news", "news"}, {"series", "series"}, {"species", "species"},
      {"glasses", "glasses"}, {"clothes", "clothes"}, {"stairs", "stairs"},
      {"amenities", "amenity"}, {"facilities", "facility"},
      {"building", "building"}, {"shopping", "shopping"}, {"parking", "parking"},
      {"morning", "morning"}, {"evening", "evening"}, {"ceiling", "ceiling"},
      {"booking", "booking"}, {"wedding", "wedding"}, {"setting", "setting"},
      {"bedding", "bedding"}, {"lighting", "lighting"}, {"during", "during"},
      {"nothing", "nothing"}, {"something", "something"}, {"anything", "anything"},
      {"everything", "everything"}, {"thing", "thing"}, {"things", "thing"},
      {"amazing", "amazing"}, {"interesting", "interesting"}, {"disappointing", "disappointing"},
      {"annoying", "annoying"}, {"outstanding", "outstanding"}, {"charming", "charming"},
      {"relaxing", "relaxing"}, {"welcoming", "welcoming"}, {"boring", "boring"},
      {"dated", "dated"}, {"outdated", "outdated"}, {"tired", "tired"}, {"crowded", "crowded"},
      {"limited", "limited"}, {"located", "located"}, {"mixed", "mixed"},
      {"renovated", "renovated"}, {"need", "need"}, {"speed", "speed"}, {"feed", "feed"},
      {"indeed", "indeed"}, {"bed", "bed"}, {"red", "red"}, {"shed", "shed"},
      {"hundred", "hundred"}, {"sacred", "sacred"}, {"naked", "naked"},
      {"wicked", "wicked"}, {"ring", "ring"}, {"king", "king"}, {"spring", "spring"},
      {"string", "string"}, {"wing", "wing"}, {"buses", "bus"},
      {"unless", "unless"}, {"gas", "gas"},
      // -er / -est words that are not comparatives
      {"never", "never"}, {"water", "water"}, {"after", "after"}, {"other", "other"},
      {"over", "over"}, {"under", "under"}, {"dinner", "dinner"}, {"shower", "shower"},
      {"tower", "tower"}, {"corner", "corner"}, {"center", "center"}, {"number", "number"},
      {"paper", "paper"}, {"manager", "manager"}, {"counter", "counter"},
      {"guest", "guest"}, {"rest", "rest"}, {"west", "west"}, {"interest", "interest"},
      {"forest", "forest"}, {"request", "request"},
      // pronoun forms
      {"me", "i"}, {"my", "my"}, {"us", "we"}, {"our", "our"}, {"them", "they"},
  };
  return table;
}

// Base forms eligible for -er / -est stripping, keyed by the stem that
// remains after stripping (before any consonant undoubling / y-restoration).
inline const std::unordered_map<std::string_view, std::string_view>& gradable_stems() {
  static const std::unordered_map<std::string_view, std::string_view> stems{
      {"clean", "clean"}, {"cheap", "cheap"}, {"small", "small"}, {"larg", "large"},
      {"nic", "nice"}, {"bigg", "big"}, {"quiet", "quiet"}, {"clos", "close"},
      {"near", "near"}, {"new", "new"}, {"old", "old"}, {"great", "great"}, {"high", "high"},
      {"low", "low"}, {"fast", "fast"}, {"long", "long"}, {"short", "short"}, {"warm", "warm"},
      {"cold", "cold"}, {"cool", "cool"}, {"friendli", "friendly"}, {"busi", "busy"},
      {"easi", "easy"}, {"noisi", "noisy"}, {"dirti", "dirty"}, {"tidi", "tidy"},
      {"wid", "wide"}, {"saf", "safe"}, {"lat", "late"}, {"earli", "early"},
      {"hott", "hot"}, {"fresh", "fresh"}, {"bright", "bright"}, {"dark", "dark"},
      {"soft", "soft"}, {"hard", "hard"}, {"tight", "tight"}, {"narrow", "narrow"},
      {"tini", "tiny"}, {"pretti", "pretty"}, {"comfi", "comfy"},
      {"happi", "happy"}, {"kind", "kind"}, {"rud", "rude"}, {"smart", "smart"},
      {"strong", "strong"}, {"weak", "weak"}, {"thick", "thick"}, {"thin", "thin"},
      {"thinn", "thin"}, {"fin", "fine"}, {"pur", "pure"}, {"rich", "rich"}, {"poor", "poor"},
      {"slow", "slow"}, {"quick", "quick"}, {"loud", "loud"}, {"deep", "deep"},
      {"full", "full"}, {"light", "light"}, {"heavi", "heavy"}, {"young", "young"},
      {"tall", "tall"}, {"sweet", "sweet"},
      {"prici", "pricey"}, {"wet", "wet"}, {"wett", "wet"}, {"sunni", "sunny"},
      {"fanci", "fancy"}, {"cozi", "cozy"}, {"cosi", "cosy"}, {"ugli", "ugly"},
      {"lovel", "lovely"}, {"loveli", "lovely"}, {"smelli", "smelly"}, {"dusti", "dusty"},
  };
  return stems;
}

inline bool has_vowel(std::string_view s) {
  return s.find_first_of("aeiouy") != std::string_view::npos;
}

inline bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Porter-style tidy-up after removing -ed / -ing.
inline std::string repair_verb_stem(std::string stem) {
  if (text::ends_with(stem, "at") || text::ends_with(stem, "bl") || text::ends_with(stem, "iz")) {
    return stem + "e";
  }
  const auto n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

}  // namespace detail

class Lemmatizer {
 public:
  Lemmatizer() {
    for (const auto& [surface, lemma] : detail::default_exceptions()) {
      exceptions_[std::string(surface)] = std::string(lemma);
    }
  }

  // Loads `surface<TAB>lemma` rows; file entries override the bundled table.
  static Lemmatizer from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read lemma exception table: " + path);
    Lemmatizer lem;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (text::trim(line).empty() || line.front() == '#') continue;
      auto cols = text::split(line, '\t');
      if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
        throw ParseError(path, line_no, "expected surface<TAB>lemma");
      }
      lem.exceptions_[text::ascii_lower(cols[0])] = text::ascii_lower(cols[1]);
    }
    return lem;
  }

  const std::map<std::string, std::string>& exceptions() const { return exceptions_; }

  // Input is expected lowercase. Returns a non-empty lemma for non-empty input.
  std::string lemmatize(std::string_view word) const {
    std::string current(word);
    for (int step = 0; step < 8; ++step) {
      auto next = step_once(current);
      if (next == current) break;
      current = std::move(next);
    }
    return current;
  }

 private:
  std::string step_once(const std::string& w) const {
    if (auto it = exceptions_.find(w); it != exceptions_.end()) return it->second;
    const auto n = w.size();
    if (n <= 3) return w;

    // superlative / comparative, only for known gradable adjectives
    for (std::string_view suffix : {std::string_view("est"), std::string_view("er")}) {
      if (text::ends_with(w, suffix)) {
        const auto stem = std::string_view(w).substr(0, n - suffix.size());
        const auto& stems = detail::gradable_stems();
        if (auto it = stems.find(stem); it != stems.end()) return std::string(it->second);
      }
    }

    // plurals / third person
    if (text::ends_with(w, "ies") && n > 4) return w.substr(0, n - 3) + "y";
    if (text::ends_with(w, "sses") || text::ends_with(w, "xes") ||
        text::ends_with(w, "zes") || text::ends_with(w, "ches") || text::ends_with(w, "shes")) {
      return w.substr(0, n - 2);
    }
    if (w.back() == 's' && !text::ends_with(w, "ss") && !text::ends_with(w, "us") &&
        !text::ends_with(w, "is") && !text::ends_with(w, "'s")) {
      return w.substr(0, n - 1);
    }

    // -ing
    if (text::ends_with(w, "ing") && n >= 6) {
      auto stem = w.substr(0, n - 3);
      if (detail::has_vowel(stem)) return detail::repair_verb_stem(std::move(stem));
    }
    // -ied, -ed
    if (text::ends_with(w, "ied") && n > 4) return w.substr(0, n - 3) + "y";
    if (text::ends_with(w, "ed") && !text::ends_with(w, "eed") && n >= 5) {
      auto stem = w.substr(0, n - 2);
      if (detail::has_vowel(stem)) return detail::repair_verb_stem(std::move(stem));
    }
    return w;
  }

  std::map<std::string, std::string> exceptions_;
};

}  // namespace review_miner::textproc
