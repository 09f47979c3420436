#pragma once

// Soft-margin linear SVC over keyword-count features.
//
// Training minimises  1/2 |w|^2 + C * sum_i max(0, 1 - y_i (w.x_i + b))
// by dual coordinate descent (one closed-form box-constrained update per
// sample, samples visited in a seeded random order each epoch). The bias is
// an extra constant feature of value 1 and is therefore regularised too.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "review_miner/error.hpp"
#include "review_miner/keywords.hpp"
#include "review_miner/random.hpp"
#include "review_miner/text.hpp"
#include "review_miner/textproc.hpp"
#include "review_miner/types.hpp"

namespace review_miner::classifier {

// ---------------------------------------------------------------------------
// Features

struct FeatureVector {
  std::size_t dimension = 0;
  // (ordinal, count), ordinals strictly increasing, counts > 0
  std::vector<std::pair<std::uint32_t, double>> entries;

  double dot(std::span<const double> w) const {
    double s = 0.0;
    for (const auto& [j, v] : entries) s += w[j] * v;
    return s;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.second * e.second;
    return s;
  }

  // Dense view, mainly for tests and diagnostics.
  std::vector<double> dense() const {
    std::vector<double> out(dimension, 0.0);
    for (const auto& [j, v] : entries) out[j] = v;
    return out;
  }

  static FeatureVector from_dense(std::span<const double> values) {
    FeatureVector fv;
    fv.dimension = values.size();
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] != 0.0) fv.entries.emplace_back(static_cast<std::uint32_t>(j), values[j]);
    }
    return fv;
  }
};

// Lemma -> feature ordinal(s) for one keyword set.
class FeatureIndex {
 public:
  explicit FeatureIndex(const keywords::KeywordSet& set) {
    const auto order = set.feature_order();
    dimension_ = order.size();
    for (std::size_t j = 0; j < order.size(); ++j) {
      index_[order[j]].push_back(static_cast<std::uint32_t>(j));
    }
  }

  std::size_t dimension() const { return dimension_; }

  FeatureVector vectorize(std::span<const textproc::Token> tokens) const {
    std::map<std::uint32_t, double> counts;
    for (const auto& tok : tokens) {
      auto it = index_.find(tok.lemma);
      if (it == index_.end()) continue;
      for (auto j : it->second) counts[j] += 1.0;
    }
    FeatureVector fv;
    fv.dimension = dimension_;
    fv.entries.assign(counts.begin(), counts.end());
    return fv;
  }

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<std::uint32_t>> index_;
};

inline FeatureVector vectorize(std::span<const textproc::Token> tokens,
                               const keywords::KeywordSet& set) {
  return FeatureIndex(set).vectorize(tokens);
}

// ---------------------------------------------------------------------------
// Optimiser

struct LinearSvm {
  std::vector<double> weights;
  double bias = 0.0;

  double decision(const FeatureVector& x) const { return x.dot(weights) + bias; }
};

struct TrainOptions {
  double tolerance = 1e-6;  // on the largest projected-gradient magnitude in an epoch
  int max_epochs = 10000;
};

struct TrainTrace {
  std::vector<double> dual_objective;  // after each epoch, maximisation form
  int epochs = 0;
  bool converged = false;
  double final_violation = 0.0;
};

inline double primal_objective(const LinearSvm& m, std::span<const FeatureVector> samples,
                               std::span<const int> labels, double C) {
  double reg = m.bias * m.bias;
  for (double w : m.weights) reg += w * w;
  double loss = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    loss += std::max(0.0, 1.0 - labels[i] * m.decision(samples[i]));
  }
  return 0.5 * reg + C * loss;
}

namespace detail {

inline void validate_training_input(std::span<const FeatureVector> samples,
                                    std::span<const int> labels, double C) {
  if (samples.size() != labels.size()) throw ValidationError("sample/label count mismatch");
  if (!(C > 0.0) || !std::isfinite(C)) throw ValidationError("C must be a positive finite number");
  bool has_pos = false;
  bool has_neg = false;
  const std::size_t dim = samples.empty() ? 0 : samples.front().dimension;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (labels[i] == 1) {
      has_pos = true;
    } else if (labels[i] == -1) {
      has_neg = true;
    } else {
      throw ValidationError("labels must be +1 or -1");
    }
    if (samples[i].dimension != dim) throw ValidationError("inconsistent feature dimensions");
    for (const auto& [j, v] : samples[i].entries) {
      if (!std::isfinite(v)) throw DataError("non-finite feature value");
      if (j >= dim) throw ValidationError("feature ordinal out of range");
    }
  }
  if (!has_pos || !has_neg) throw DataError("training data must contain both classes");
}

}  // namespace detail

// Dual coordinate descent. `alpha` holds the starting dual point (empty for
// zero; otherwise clipped into [0, C]) and receives the solution, which lets
// a C sweep over one training set warm-start each solve from the last.
inline LinearSvm train_linear_svm_dual(std::span<const FeatureVector> samples, std::span<const int> labels,
                                       double C, std::uint64_t seed, const TrainOptions& options,
                                       TrainTrace* trace, std::vector<double>& alpha) {
  detail::validate_training_input(samples, labels, C);
  const std::size_t n = samples.size();
  const std::size_t dim = samples.front().dimension;

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  double alpha_sum = 0.0;
  if (alpha.size() != n) alpha.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = std::clamp(alpha[i], 0.0, C);
    if (alpha[i] == 0.0) continue;
    const double step = alpha[i] * labels[i];
    for (const auto& [j, v] : samples[i].entries) w[j] += step * v;
    b += step;
    alpha_sum += alpha[i];
  }
  std::vector<double> qii(n);
  for (std::size_t i = 0; i < n; ++i) qii[i] = samples[i].squared_norm() + 1.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  // Shrinking: a variable sitting at a bound whose gradient points further
  // out than anything seen in the previous pass is set aside. Convergence is
  // only declared after a full pass over every variable.
  Rng rng(seed);
  std::size_t active = n;
  double pg_max_old = std::numeric_limits<double>::infinity();
  double pg_min_old = -std::numeric_limits<double>::infinity();
  TrainTrace local;
  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order.data(), active));
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    double max_violation = 0.0;
    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t i = order[s];
      const double y = labels[i];
      const double g = y * (samples[i].dot(w) + b) - 1.0;
      double pg = 0.0;
      if (alpha[i] <= 0.0) {
        if (g > pg_max_old) {
          std::swap(order[s--], order[--active]);
          continue;
        }
        pg = std::min(g, 0.0);
      } else if (alpha[i] >= C) {
        if (g < pg_min_old) {
          std::swap(order[s--], order[--active]);
          continue;
        }
        pg = std::max(g, 0.0);
      } else {
        pg = g;
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      max_violation = std::max(max_violation, std::abs(pg));
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qii[i], 0.0, C);
      const double step = (alpha[i] - old) * y;
      if (step == 0.0) continue;
      for (const auto& [j, v] : samples[i].entries) w[j] += step * v;
      b += step;
      alpha_sum += alpha[i] - old;
    }
    local.epochs = epoch;
    local.final_violation = max_violation;
    if (trace) {
      double norm = b * b;
      for (double x : w) norm += x * x;
      local.dual_objective.push_back(alpha_sum - 0.5 * norm);
    }
    if (max_violation < options.tolerance) {
      if (active == n) {
        local.converged = true;
        break;
      }
      active = n;
      pg_max_old = std::numeric_limits<double>::infinity();
      pg_min_old = -std::numeric_limits<double>::infinity();
      continue;
    }
    pg_max_old = pg_max <= 0.0 ? std::numeric_limits<double>::infinity() : pg_max;
    pg_min_old = pg_min >= 0.0 ? -std::numeric_limits<double>::infinity() : pg_min;
  }
  if (trace) *trace = std::move(local);
  return {std::move(w), b};
}

inline LinearSvm train_linear_svm(std::span<const FeatureVector> samples, std::span<const int> labels,
                                  double C, std::uint64_t seed, const TrainOptions& options = {},
                                  TrainTrace* trace = nullptr) {
  std::vector<double> alpha;
  return train_linear_svm_dual(samples, labels, C, seed, options, trace, alpha);
}

// ---------------------------------------------------------------------------
// Model

struct SvcModel {
  std::vector<double> weights;
  double bias = 0.0;
  keywords::KeywordSet keyword_set;
  double C = 1.0;
  std::uint64_t training_seed = 0;
  Language language = Language::Other;

  std::size_t dimension() const { return weights.size(); }
  double decision(const FeatureVector& x) const { return x.dot(weights) + bias; }
};

// labels: +1 positive, -1 negative
inline SvcModel train_svc(std::span<const FeatureVector> samples, std::span<const int> labels,
                          double C, std::uint64_t seed, keywords::KeywordSet keyword_set = {},
                          Language language = Language::Other, const TrainOptions& options = {}) {
  auto svm = train_linear_svm(samples, labels, C, seed, options);
  SvcModel model;
  model.weights = std::move(svm.weights);
  model.bias = svm.bias;
  model.keyword_set = std::move(keyword_set);
  model.C = C;
  model.training_seed = seed;
  model.language = language;
  return model;
}

inline int label_value(Sentiment s) { return s == Sentiment::Positive ? 1 : -1; }

inline Sentiment predict(const SvcModel& model, const FeatureVector& x) {
  if (x.dimension != model.dimension()) {
    throw ValidationError("feature dimension " + std::to_string(x.dimension) +
                          " does not match model dimension " + std::to_string(model.dimension()));
  }
  return model.decision(x) >= 0.0 ? Sentiment::Positive : Sentiment::Negative;
}

// ---------------------------------------------------------------------------
// Scoring

struct Confusion {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;
};

inline Confusion confusion(std::span<const Sentiment> predictions, std::span<const Sentiment> golds) {
  if (predictions.size() != golds.size()) throw ValidationError("prediction/gold length mismatch");
  Confusion c;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const bool p = predictions[i] == Sentiment::Positive;
    const bool g = golds[i] == Sentiment::Positive;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

// F1 of the Positive class. 2PR/(P+R) is evaluated as 2TP/(2TP+FP+FN), which
// is the same rational but rounds once. A sample with no positive gold and
// no positive prediction scores 0.
inline double f1_score(std::span<const Sentiment> predictions, std::span<const Sentiment> golds) {
  if (golds.empty()) throw ValidationError("f1_score needs at least one sample");
  const auto c = confusion(predictions, golds);
  if (c.tp == 0) return 0.0;
  return static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
}

// ---------------------------------------------------------------------------
// Cross-validation

struct CvResult {
  double mean_f1 = 0.0;
  double std_f1 = 0.0;  // population
  int k = 0;
  std::vector<double> per_fold_f1;
};

inline CvResult summarize_folds(std::vector<double> per_fold) {
  CvResult r;
  r.k = static_cast<int>(per_fold.size());
  if (per_fold.empty()) return r;
  double sum = 0.0;
  for (double f : per_fold) sum += f;
  r.mean_f1 = sum / static_cast<double>(per_fold.size());
  double sq = 0.0;
  for (double f : per_fold) sq += (f - r.mean_f1) * (f - r.mean_f1);
  r.std_f1 = std::sqrt(sq / static_cast<double>(per_fold.size()));
  r.per_fold_f1 = std::move(per_fold);
  return r;
}

// Fold number for every sample. Each class is shuffled independently and
// dealt round-robin, so every fold keeps the corpus class ratio.
inline std::vector<int> stratified_folds(std::span<const Sentiment> labels, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("k must be at least 2");
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Sentiment::Positive ? pos : neg).push_back(i);
  }
  if (pos.size() < static_cast<std::size_t>(k) || neg.size() < static_cast<std::size_t>(k)) {
    throw DataError("class too small to stratify into " + std::to_string(k) + " folds (" +
                    std::to_string(pos.size()) + " positive, " + std::to_string(neg.size()) +
                    " negative)");
  }
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(pos));
  rng.shuffle(std::span<std::size_t>(neg));
  std::vector<int> fold(labels.size(), 0);
  for (std::size_t r = 0; r < pos.size(); ++r) fold[pos[r]] = static_cast<int>(r % k);
  const std::size_t offset = pos.size() % k;
  for (std::size_t r = 0; r < neg.size(); ++r) fold[neg[r]] = static_cast<int>((offset + r) % k);
  return fold;
}

// Runs the per-fold pipeline (keyword selection on the training split, SVC
// training, F1 on the held-out split). Fold assignment and per-fold entropy
// tables are computed once; fold scores are memoised on the fold's feature
// list and C, because many (alpha, alpha') pairs select identical keywords.
// Successive C values on the same fold and feature list warm-start from the
// previous dual solution; every solve still runs to the full tolerance.
class CrossValidator {
 public:
  CrossValidator(std::span<const textproc::LabeledSentence> labeled, int k, std::uint64_t seed,
                 TrainOptions options = {})
      : labeled_(labeled), k_(k), seed_(seed), options_(options) {
    std::vector<Sentiment> labels;
    labels.reserve(labeled.size());
    for (const auto& s : labeled) labels.push_back(s.label);
    fold_of_ = stratified_folds(labels, k, seed);
    folds_.resize(k);
    for (int f = 0; f < k; ++f) {
      auto& fold = folds_[f];
      std::vector<textproc::LabeledSentence> train;
      for (std::size_t i = 0; i < labeled.size(); ++i) {
        if (fold_of_[i] == f) {
          fold.test.push_back(i);
        } else {
          fold.train.push_back(i);
          train.push_back(labeled[i]);
        }
      }
      fold.entropy = keywords::entropy_table(textproc::term_class_counts(train));
    }
  }

  int k() const { return k_; }
  const std::vector<int>& fold_assignment() const { return fold_of_; }

  keywords::KeywordSet fold_keywords(int fold, double alpha, double alpha_prime) const {
    return keywords::select_keywords(folds_[fold].entropy, alpha, alpha_prime);
  }

  CvResult evaluate(double alpha, double alpha_prime, double C) {
    std::vector<double> scores;
    scores.reserve(k_);
    for (int f = 0; f < k_; ++f) scores.push_back(fold_score(f, alpha, alpha_prime, C));
    return summarize_folds(std::move(scores));
  }

 private:
  struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    keywords::EntropyTable entropy;
    struct SetState {
      std::map<double, double> score_by_c;
      std::vector<double> alpha;  // last dual solution
    };
    std::map<std::vector<std::string>, SetState> memo;
  };

  double fold_score(int f, double alpha, double alpha_prime, double C) {
    auto& fold = folds_[f];
    const auto set = keywords::select_keywords(fold.entropy, alpha, alpha_prime);
    auto& state = fold.memo[set.feature_order()];
    if (auto it = state.score_by_c.find(C); it != state.score_by_c.end()) return it->second;

    const FeatureIndex index(set);
    std::vector<FeatureVector> xs;
    std::vector<int> ys;
    xs.reserve(fold.train.size());
    for (auto i : fold.train) {
      xs.push_back(index.vectorize(labeled_[i].tokens));
      ys.push_back(label_value(labeled_[i].label));
    }
    SvcModel model;
    auto svm = train_linear_svm_dual(xs, ys, C, seed_, options_, nullptr, state.alpha);
    model.weights = std::move(svm.weights);
    model.bias = svm.bias;
    std::vector<Sentiment> predicted;
    std::vector<Sentiment> gold;
    for (auto i : fold.test) {
      predicted.push_back(predict(model, index.vectorize(labeled_[i].tokens)));
      gold.push_back(labeled_[i].label);
    }
    const double score = f1_score(predicted, gold);
    state.score_by_c.emplace(C, score);
    return score;
  }

  std::span<const textproc::LabeledSentence> labeled_;
  int k_;
  std::uint64_t seed_;
  TrainOptions options_;
  std::vector<int> fold_of_;
  std::vector<Fold> folds_;
};

inline CvResult cross_validate(std::span<const textproc::LabeledSentence> labeled, double alpha,
                               double alpha_prime, double C, int k, std::uint64_t seed) {
  CrossValidator cv(labeled, k, seed);
  return cv.evaluate(alpha, alpha_prime, C);
}

// ---------------------------------------------------------------------------
// Grid search

struct GridCell {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  double C = 0.0;
  // Keyword counts when selecting on the whole labelled set at (alpha, alpha').
  std::size_t positive_keywords = 0;
  std::size_t negative_keywords = 0;
  CvResult cv;

  std::size_t total_keywords() const { return positive_keywords + negative_keywords; }
};

struct GridSearchResult {
  std::vector<GridCell> cells;  // alpha-major, then alpha', then C
  std::size_t best_index = 0;

  const GridCell& best() const { return cells.at(best_index); }
};

// Higher mean F1 wins; ties go to fewer keywords, then smaller C, alpha, alpha'.
inline bool better_cell(const GridCell& a, const GridCell& b) {
  if (a.cv.mean_f1 != b.cv.mean_f1) return a.cv.mean_f1 > b.cv.mean_f1;
  return std::make_tuple(a.total_keywords(), a.C, a.alpha, a.alpha_prime) <
         std::make_tuple(b.total_keywords(), b.C, b.alpha, b.alpha_prime);
}

inline std::size_t pick_best(std::span<const GridCell> cells) {
  if (cells.empty()) throw ValidationError("empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (better_cell(cells[i], cells[best])) best = i;
  }
  return best;
}

inline GridSearchResult grid_search(std::span<const textproc::LabeledSentence> labeled,
                                    std::span<const double> alpha_grid,
                                    std::span<const double> alpha_prime_grid,
                                    std::span<const double> c_grid, int k, std::uint64_t seed) {
  if (alpha_grid.empty() || alpha_prime_grid.empty() || c_grid.empty()) {
    throw ValidationError("grid search needs non-empty alpha, alpha' and C grids");
  }
  CrossValidator cv(labeled, k, seed);
  const auto full = keywords::entropy_table(textproc::term_class_counts(labeled));
  GridSearchResult result;
  for (double a : alpha_grid) {
    for (double ap : alpha_prime_grid) {
      const auto set = keywords::select_keywords(full, a, ap);
      for (double c : c_grid) {
        GridCell cell;
        cell.alpha = a;
        cell.alpha_prime = ap;
        cell.C = c;
        cell.positive_keywords = set.positive.size();
        cell.negative_keywords = set.negative.size();
        cell.cv = cv.evaluate(a, ap, c);
        result.cells.push_back(std::move(cell));
      }
    }
  }
  result.best_index = pick_best(result.cells);
  return result;
}

// Selects keywords on all labelled data at (alpha, alpha') and trains there.
inline SvcModel train_final_model(std::span<const textproc::LabeledSentence> labeled, double alpha,
                                  double alpha_prime, double C, std::uint64_t seed,
                                  Language language) {
  const auto table = keywords::entropy_table(textproc::term_class_counts(labeled));
  auto set = keywords::select_keywords(table, alpha, alpha_prime);
  const FeatureIndex index(set);
  std::vector<FeatureVector> xs;
  std::vector<int> ys;
  for (const auto& s : labeled) {
    xs.push_back(index.vectorize(s.tokens));
    ys.push_back(label_value(s.label));
  }
  return train_svc(xs, ys, C, seed, std::move(set), language);
}

// ---------------------------------------------------------------------------
// Files

// Training data: label(pos|neg)<TAB>sentence text
inline std::vector<textproc::LabeledSentence> read_training_tsv(std::istream& in,
                                                                const std::string& source,
                                                                Language language,
                                                                const textproc::Lemmatizer& lem) {
  std::vector<textproc::LabeledSentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(source, line_no, "expected label<TAB>sentence");
    const auto label = line.substr(0, tab);
    textproc::LabeledSentence s;
    if (label == "pos") {
      s.label = Sentiment::Positive;
    } else if (label == "neg") {
      s.label = Sentiment::Negative;
    } else {
      throw ParseError(source, line_no, "label must be pos or neg, got '" + label + "'");
    }
    s.tokens = textproc::tokenize(std::string_view(line).substr(tab + 1), language, lem);
    out.push_back(std::move(s));
  }
  if (out.empty()) throw DataError(source + ": no training sentences");
  return out;
}

inline std::vector<textproc::LabeledSentence> read_training_tsv(const std::string& path,
                                                                Language language,
                                                                const textproc::Lemmatizer& lem) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read training file: " + path);
  return read_training_tsv(in, path, language, lem);
}

inline constexpr std::string_view kModelMagic = "review-miner-svc 1";

inline void write_model(std::ostream& out, const SvcModel& m) {
  const auto order = m.keyword_set.feature_order();
  out << kModelMagic << '\n'
      << "language\t" << language_code(m.language) << '\n'
      << "dimension\t" << m.dimension() << '\n'
      << "C\t" << text::format_roundtrip(m.C) << '\n'
      << "seed\t" << m.training_seed << '\n'
      << "alpha\t" << text::format_roundtrip(m.keyword_set.alpha) << '\n'
      << "alpha_prime\t" << text::format_roundtrip(m.keyword_set.alpha_prime) << '\n'
      << "positive_keywords\t" << m.keyword_set.positive.size() << '\n';
  for (std::size_t j = 0; j < m.weights.size(); ++j) {
    out << j << '\t' << text::tsv_escape(order.at(j)) << '\t' << text::format_roundtrip(m.weights[j])
        << '\n';
  }
  out << "bias\t" << text::format_roundtrip(m.bias) << '\n';
}

inline SvcModel read_model(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::string {
    if (!std::getline(in, line)) throw DataError(source + ": truncated model file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto field = [&](std::string_view key) -> std::string {
    auto l = next();
    auto cols = text::split(l, '\t');
    if (cols.size() != 2 || cols[0] != key) {
      throw ParseError(source, line_no, "expected '" + std::string(key) + "'");
    }
    return cols[1];
  };
  auto number = [&](std::string_view key) {
    auto v = text::parse_double(field(key));
    if (!v) throw ParseError(source, line_no, "bad number for " + std::string(key));
    return *v;
  };
  if (next() != kModelMagic) throw ParseError(source, line_no, "not a model file");
  SvcModel m;
  try {
    m.language = language_from_code(field("language"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, line_no, e.what());
  }
  auto dim = text::parse_int<std::size_t>(field("dimension"));
  if (!dim) throw ParseError(source, line_no, "bad dimension");
  m.C = number("C");
  auto seed = text::parse_int<std::uint64_t>(field("seed"));
  if (!seed) throw ParseError(source, line_no, "bad seed");
  m.training_seed = *seed;
  m.keyword_set.alpha = number("alpha");
  m.keyword_set.alpha_prime = number("alpha_prime");
  auto npos = text::parse_int<std::size_t>(field("positive_keywords"));
  if (!npos || *npos > *dim) throw ParseError(source, line_no, "bad positive_keywords");
  m.weights.resize(*dim);
  for (std::size_t j = 0; j < *dim; ++j) {
    auto cols = text::split(next(), '\t');
    if (cols.size() != 3 || text::parse_int<std::size_t>(cols[0]) != j) {
      throw ParseError(source, line_no, "expected feature row " + std::to_string(j));
    }
    auto w = text::parse_double(cols[2]);
    if (!w || !std::isfinite(*w)) throw ParseError(source, line_no, "bad weight");
    m.weights[j] = *w;
    auto term = text::tsv_unescape(cols[1]);
    (j < *npos ? m.keyword_set.positive : m.keyword_set.negative).push_back(std::move(term));
  }
  m.bias = number("bias");
  return m;
}

inline void write_grid_tsv(std::ostream& out, const GridSearchResult& grid) {
  out << "alpha\talpha_prime\tC\tpositive_keywords\tnegative_keywords\tf1_mean\tf1_std\tper_fold_f1\n";
  for (const auto& c : grid.cells) {
    out << text::format_roundtrip(c.alpha) << '\t' << text::format_roundtrip(c.alpha_prime) << '\t'
        << text::format_roundtrip(c.C) << '\t' << c.positive_keywords << '\t'
        << c.negative_keywords << '\t' << text::format_roundtrip(c.cv.mean_f1) << '\t'
        << text::format_roundtrip(c.cv.std_f1) << '\t';
    for (std::size_t f = 0; f < c.cv.per_fold_f1.size(); ++f) {
      if (f) out << ',';
      out << text::format_roundtrip(c.cv.per_fold_f1[f]);
    }
    out << '\n';
  }
}

inline GridSearchResult read_grid_tsv(std::istream& in, const std::string& source) {
  GridSearchResult grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 8) throw ParseError(source, line_no, "expected 8 columns");
    GridCell c;
    auto a = text::parse_double(cols[0]);
    auto ap = text::parse_double(cols[1]);
    auto cc = text::parse_double(cols[2]);
    auto np = text::parse_int<std::size_t>(cols[3]);
    auto nn = text::parse_int<std::size_t>(cols[4]);
    if (!a || !ap || !cc || !np || !nn) throw ParseError(source, line_no, "bad grid row");
    c.alpha = *a;
    c.alpha_prime = *ap;
    c.C = *cc;
    c.positive_keywords = *np;
    c.negative_keywords = *nn;
    std::vector<double> folds;
    for (const auto& f : text::split(cols[7], ',')) {
      auto v = text::parse_double(f);
      if (!v) throw ParseError(source, line_no, "bad fold score");
      folds.push_back(*v);
    }
    c.cv = summarize_folds(std::move(folds));
    grid.cells.push_back(std::move(c));
  }
  grid.best_index = pick_best(grid.cells);
  return grid;
}

}  // namespace review_miner::classifier
