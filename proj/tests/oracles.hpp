#pragma once

// Independent reference implementations used as test oracles. None of these
// call into the library's own entropy or solver code.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace oracle {

// H = log2(T) - (1/T) * sum n log2 n, evaluated in long double.
inline double entropy(const std::vector<int>& doc_counts) {
  long double total = 0;
  for (int n : doc_counts) total += n;
  if (total <= 0) return 0.0;
  long double acc = 0;
  for (int n : doc_counts) {
    if (n > 0) acc += static_cast<long double>(n) * std::log2(static_cast<long double>(n));
  }
  const long double h = std::log2(total) - acc / total;
  return h < 0 ? 0.0 : static_cast<double>(h);
}

struct ToyDoc {
  std::vector<std::string> words;
  bool positive = true;
};

struct OracleKeywords {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  std::map<std::string, std::pair<double, double>> entropies;  // term -> (H_pos, H_neg)
};

// Rescans the raw documents for every term instead of building count tables.
inline OracleKeywords keywords(const std::vector<ToyDoc>& docs, double alpha, double alpha_prime) {
  std::map<std::string, int> seen;
  for (const auto& d : docs) {
    for (const auto& w : d.words) seen[w] = 1;
  }
  OracleKeywords out;
  for (const auto& [term, unused] : seen) {
    std::vector<int> pos, neg;
    for (const auto& d : docs) {
      const int n = static_cast<int>(std::count(d.words.begin(), d.words.end(), term));
      if (n == 0) continue;
      (d.positive ? pos : neg).push_back(n);
    }
    const double hp = entropy(pos);
    const double hn = entropy(neg);
    out.entropies[term] = {hp, hn};
    if (hp > 0 && hp > alpha * hn) out.positive.push_back(term);
    if (hn > 0 && hn > alpha_prime * hp) out.negative.push_back(term);
  }
  return out;
}

// Soft-margin primal with the bias folded into the weight vector:
// 0.5 |w|^2 + C * sum max(0, 1 - y (w.x))
inline double primal(const std::vector<double>& w, const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& ys, double C) {
  double reg = 0;
  for (double v : w) reg += v * v;
  double loss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = 0;
    for (std::size_t j = 0; j < w.size(); ++j) f += w[j] * xs[i][j];
    loss += std::max(0.0, 1.0 - ys[i] * f);
  }
  return 0.5 * reg + C * loss;
}

struct SubgradientResult {
  std::vector<double> w;  // last component is the bias
  double objective = 0;
};

// Projected subgradient descent with step 1/t (the objective is 1-strongly
// convex), projection onto |w| <= sqrt(2 C N) which contains the minimiser,
// and the best iterate kept. Inputs are raw feature rows; a constant 1 is
// appended internally.
inline SubgradientResult subgradient_svm(const std::vector<std::vector<double>>& raw,
                                         const std::vector<int>& ys, double C, int iterations) {
  std::vector<std::vector<double>> xs = raw;
  for (auto& x : xs) x.push_back(1.0);
  const std::size_t d = xs.front().size();
  const double radius = std::sqrt(2.0 * C * static_cast<double>(xs.size()));
  std::vector<double> w(d, 0.0), g(d);
  SubgradientResult best{w, primal(w, xs, ys, C)};
  for (int t = 1; t <= iterations; ++t) {
    g = w;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double f = 0;
      for (std::size_t j = 0; j < d; ++j) f += w[j] * xs[i][j];
      if (ys[i] * f < 1.0) {
        for (std::size_t j = 0; j < d; ++j) g[j] -= C * ys[i] * xs[i][j];
      }
    }
    const double step = 1.0 / t;
    double norm = 0;
    for (std::size_t j = 0; j < d; ++j) {
      w[j] -= step * g[j];
      norm += w[j] * w[j];
    }
    norm = std::sqrt(norm);
    if (norm > radius) {
      for (double& v : w) v *= radius / norm;
    }
    const double obj = primal(w, xs, ys, C);
    if (obj < best.objective) best = {w, obj};
  }
  return best;
}

}  // namespace oracle
