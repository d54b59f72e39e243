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
// Empirical-Bayes estimation of the Lidstone smoothing factor.
//
// Each context's count vector n = (n_1..n_r), N = sum n_s, is treated as a
// multinomial draw whose parameters follow a symmetric Dirichlet(alpha)
// prior. Integrating the parameters out gives the Dirichlet-multinomial
// marginal (multinomial coefficient omitted, it does not depend on alpha):
//
//   p(n | alpha) = Gamma(r alpha) / Gamma(N + r alpha)
//                  * prod_s Gamma(n_s + alpha) / Gamma(alpha)
//
// and alpha* maximizes l(alpha) = sum over contexts of log p(n | alpha).
//
// Gamma ratios are evaluated as rising factorials,
//   log Gamma(x + n) - log Gamma(x) = sum_{j<n} log(x + j),
// written as n log x + sum log1p(j / x) so that l stays accurate when alpha
// is huge and the lgamma difference would cancel catastrophically. The
// derivative uses the matching identity psi(x + n) - psi(x) = sum 1/(x + j).

#ifndef FCMTUNE_ALPHA_ML_H_
#define FCMTUNE_ALPHA_ML_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fcmtune/fcm.h"

namespace fcmtune {

inline constexpr double kAlphaLowerBound = 1e-6;
inline constexpr double kAlphaUpperBound = 1e12;

// log p(row | alpha). alpha must be > 0.
double DmLogMarginal(std::span<const uint32_t> row, double alpha);

// Count vectors of the contexts seen at least once, for a fixed order.
class CountMatrix {
 public:
  explicit CountMatrix(size_t r) : r_(r) {}
  // Rows of `counts` (every stored context has total >= 1).
  static CountMatrix FromCounts(const ContextCounts &counts);

  // Appends a row; all-zero rows are dropped.
  void AddRow(std::span<const uint32_t> row);

  size_t r() const { return r_; }
  size_t num_rows() const { return totals_.size(); }
  std::span<const uint32_t> row(size_t g) const {
    return {cells_.data() + g * r_, r_};
  }
  uint64_t total(size_t g) const { return totals_[g]; }

 private:
  size_t r_;
  std::vector<uint32_t> cells_;
  std::vector<uint64_t> totals_;
};

// l(alpha) and its derivatives evaluated through count histograms: l only
// depends on how often each cell value and each row total occurs. Rows with
// total 1 contribute the constant log(1/r).
class DmLikelihood {
 public:
  explicit DmLikelihood(const CountMatrix &counts);

  double LogLikelihood(double alpha) const;
  // dl/dalpha.
  double Derivative(double alpha) const;
  // d2l/dalpha2.
  double SecondDerivative(double alpha) const;

  // True when every row has total <= 1, so l does not depend on alpha.
  bool flat() const { return informative_rows_ == 0; }
  size_t num_rows() const { return rows_; }

 private:
  struct Bin {
    uint64_t value;
    uint64_t multiplicity;
  };
  double r_;
  size_t rows_ = 0;
  size_t informative_rows_ = 0;
  double constant_ = 0.0;
  // Cell values >= 2 (values 0 and 1 contribute nothing) and totals of rows
  // with total >= 2.
  std::vector<Bin> cell_bins_;
  std::vector<Bin> total_bins_;
};

struct AlphaFit {
  double alpha_star = 1.0;
  double log_likelihood = 0.0;
  bool converged = false;
  bool hit_bound = false;
  // l is constant in alpha (no context seen twice); alpha_star is 1.
  bool degenerate = false;
  int iterations = 0;
};

// Maximizes l over alpha in [kAlphaLowerBound, kAlphaUpperBound]: a coarse
// log-spaced scan brackets the maximum, then Newton steps on log(alpha)
// refine it, with bisection on the sign of the derivative whenever a step
// leaves the bracket. Stops when alpha changes by less than 1e-8 relative
// or after 200 iterations. Throws if `counts` has no rows.
AlphaFit FitAlpha(const CountMatrix &counts);

// FitAlpha on the counts of `seq` at order k.
AlphaFit FitAlpha(const SymbolSequence &seq, int k);

}  // namespace fcmtune

#endif  // FCMTUNE_ALPHA_ML_H_
