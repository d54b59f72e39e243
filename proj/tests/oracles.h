// Copyright 2026 The fcmtune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Reference implementations used by the tests. They share no code with the
// library beyond the sequence types.

#ifndef FCMTUNE_TESTS_ORACLES_H_
#define FCMTUNE_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fcmtune/alphabet.h"
#include "fcmtune/rng.h"

namespace fcmtune::testing {

inline SymbolSequence RandomSequence(Rng &rng, size_t r, size_t length) {
  static const std::string kLabels = "ABCDEFGHIJKLMNOP";
  std::vector<Symbol> data(length);
  for (auto &s : data) s = static_cast<Symbol>(rng.NextBelow(r));
  return SymbolSequence(Alphabet(kLabels.substr(0, std::max<size_t>(r, 2))),
                        data);
}

// Empirical entropy (nats) of a table of counts summing to n.
inline double EntropyOf(const std::map<std::string, double> &counts, double n) {
  double h = 0.0;
  for (const auto &[key, c] : counts) h -= (c / n) * std::log(c / n);
  return h;
}

// Conditional mutual information I(first; last | interior) of the empirical
// distribution of length-(h+1) windows, as H(first,interior) +
// H(interior,last) - H(window) - H(interior).
inline double BruteForceCmi(const SymbolSequence &seq, int h) {
  const std::string text = RenderSequence(seq);
  std::map<std::string, double> window, left, right, middle;
  const size_t n = text.size() - h;
  for (size_t t = 0; t < n; ++t) {
    const std::string w = text.substr(t, h + 1);
    window[w] += 1;
    left[w.substr(0, h)] += 1;
    right[w.substr(1, h)] += 1;
    middle[w.substr(1, h - 1)] += 1;
  }
  const double nn = static_cast<double>(n);
  return EntropyOf(left, nn) + EntropyOf(right, nn) - EntropyOf(window, nn) -
         EntropyOf(middle, nn);
}

// Pair counts c[a][b] = #{t >= h : y_t = a, y_{t-h} = b}.
inline std::vector<std::vector<double>> PairCounts(const SymbolSequence &seq,
                                                   int h) {
  std::vector<std::vector<double>> c(seq.r(), std::vector<double>(seq.r(), 0));
  for (size_t t = h; t < seq.size(); ++t) c[seq[t]][seq[t - h]] += 1;
  return c;
}

inline std::vector<double> SymbolFrequencies(const SymbolSequence &seq) {
  std::vector<double> p(seq.r(), 0.0);
  for (size_t t = 0; t < seq.size(); ++t) p[seq[t]] += 1;
  for (auto &v : p) v /= static_cast<double>(seq.size());
  return p;
}

inline double NaiveCramersV(const SymbolSequence &seq, int h) {
  const auto c = PairCounts(seq, h);
  const auto p = SymbolFrequencies(seq);
  const double n = static_cast<double>(seq.size() - h);
  double present = 0;
  for (double v : p) present += v > 0;
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    for (size_t j = 0; j < p.size(); ++j) {
      if (p[i] == 0 || p[j] == 0) continue;
      const double expected = p[i] * p[j];
      sum += std::pow(c[i][j] / n - expected, 2) / expected;
    }
  }
  return std::sqrt(sum / (present - 1));
}

inline double NaiveCohensKappa(const SymbolSequence &seq, int h) {
  const auto c = PairCounts(seq, h);
  const auto p = SymbolFrequencies(seq);
  const double n = static_cast<double>(seq.size() - h);
  double diag = 0.0, chance = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    diag += c[i][i] / n;
    chance += p[i] * p[i];
  }
  return (diag - chance) / (1.0 - chance);
}

// Dirichlet-multinomial log marginal by explicit log-gamma, in long double.
inline long double LgammaLogMarginal(const std::vector<uint32_t> &row,
                                     long double alpha) {
  const long double r = static_cast<long double>(row.size());
  long double n = 0;
  long double v = 0;
  for (uint32_t c : row) {
    n += c;
    v += std::lgamma(c + alpha) - std::lgamma(alpha);
  }
  return v + std::lgamma(r * alpha) - std::lgamma(n + r * alpha);
}

// Probability of the row's symbols revealed one at a time under Lidstone
// prediction, in canonical order (all of symbol 0, then symbol 1, ...).
inline double SequentialLidstoneLog(const std::vector<uint32_t> &row,
                                    double alpha) {
  const double r = static_cast<double>(row.size());
  std::vector<double> seen(row.size(), 0.0);
  double total = 0.0, log_p = 0.0;
  for (size_t s = 0; s < row.size(); ++s) {
    for (uint32_t i = 0; i < row[s]; ++i) {
      log_p += std::log((seen[s] + alpha) / (total + r * alpha));
      seen[s] += 1;
      total += 1;
    }
  }
  return log_p;
}

}  // namespace fcmtune::testing

#endif  // FCMTUNE_TESTS_ORACLES_H_
