#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace review_miner {

enum class Language { Chinese, English, Other };

enum class Sentiment { Positive, Negative };

inline std::string_view language_code(Language lang) {
  switch (lang) {
    case Language::Chinese: return "zh";
    case Language::English: return "en";
    case Language::Other: return "other";
  }
  return "other";
}

inline Language language_from_code(std::string_view code) {
  if (code == "zh") return Language::Chinese;
  if (code == "en") return Language::English;
  if (code == "other") return Language::Other;
  throw std::invalid_argument("unknown language code: " + std::string(code));
}

inline std::string_view sentiment_code(Sentiment s) {
  return s == Sentiment::Positive ? "pos" : "neg";
}

inline Sentiment sentiment_from_code(std::string_view code) {
  if (code == "pos") return Sentiment::Positive;
  if (code == "neg") return Sentiment::Negative;
  throw std::invalid_argument("unknown sentiment label: " + std::string(code));
}

}  // namespace review_miner
