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

#include "fcmtune/alpha_ml.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace fcmtune {

namespace {

constexpr int kScanPoints = 100;
constexpr int kMaxIterations = 200;
constexpr double kRelativeTolerance = 1e-8;

// sum_{j=1}^{n-1} log1p(j / x), i.e. log Gamma(x + n) - log Gamma(x) -
// n log x.
double LogRisingExcess(uint64_t n, double x) {
  double s = 0.0;
  for (uint64_t j = 1; j < n; ++j) s += std::log1p(j / x);
  return s;
}

}  // namespace

double DmLogMarginal(std::span<const uint32_t> row, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("Dirichlet-multinomial marginal needs alpha > 0");
  }
  const double r = static_cast<double>(row.size());
  uint64_t total = 0;
  double cells = 0.0;
  for (uint32_t n : row) {
    total += n;
    cells += LogRisingExcess(n, alpha);
  }
  return -static_cast<double>(total) * std::log(r) -
         LogRisingExcess(total, r * alpha) + cells;
}

CountMatrix CountMatrix::FromCounts(const ContextCounts &counts) {
  CountMatrix m(counts.r());
  for (size_t row = 0; row < counts.num_rows(); ++row) {
    m.AddRow(counts.row_counts(row));
  }
  return m;
}

void CountMatrix::AddRow(std::span<const uint32_t> row) {
  if (row.size() != r_) {
    throw InvalidArgument("count row length differs from alphabet size");
  }
  uint64_t total = 0;
  for (uint32_t n : row) total += n;
  if (total == 0) return;
  cells_.insert(cells_.end(), row.begin(), row.end());
  totals_.push_back(total);
}

DmLikelihood::DmLikelihood(const CountMatrix &counts)
    : r_(static_cast<double>(counts.r())), rows_(counts.num_rows()) {
  std::map<uint64_t, uint64_t> cells, totals;
  uint64_t mass = 0;
  for (size_t g = 0; g < counts.num_rows(); ++g) {
    const uint64_t total = counts.total(g);
    mass += total;
    if (total < 2) continue;
    ++informative_rows_;
    ++totals[total];
    for (uint32_t n : counts.row(g)) {
      if (n >= 2) ++cells[n];
    }
  }
  constant_ = -static_cast<double>(mass) * std::log(r_);
  for (auto [v, m] : cells) cell_bins_.push_back({v, m});
  for (auto [v, m] : totals) total_bins_.push_back({v, m});
}

namespace {

// sum over bins of multiplicity * sum_{j=1}^{value-1} term(j), with bins
// sorted by value.
template <typename Term>
double BinnedSum(const auto &bins, Term term) {
  double result = 0.0;
  double running = 0.0;
  uint64_t j = 1;
  for (const auto &bin : bins) {
    for (; j < bin.value; ++j) running += term(static_cast<double>(j));
    result += running * static_cast<double>(bin.multiplicity);
  }
  return result;
}

}  // namespace

double DmLikelihood::LogLikelihood(double alpha) const {
  const double x = r_ * alpha;
  const double cells =
      BinnedSum(cell_bins_, [alpha](double j) { return std::log1p(j / alpha); });
  const double totals =
      BinnedSum(total_bins_, [x](double j) { return std::log1p(j / x); });
  return constant_ + cells - totals;
}

double DmLikelihood::Derivative(double alpha) const {
  const double x = r_ * alpha;
  const double cells = BinnedSum(
      cell_bins_, [alpha](double j) { return j / (alpha * (alpha + j)); });
  const double totals =
      BinnedSum(total_bins_, [x](double j) { return j / (x * (x + j)); });
  return r_ * totals - cells;
}

double DmLikelihood::SecondDerivative(double alpha) const {
  const double x = r_ * alpha;
  auto term = [](double z, double j) {
    const double d = z * (z + j);
    return j * (2.0 * z + j) / (d * d);
  };
  const double cells =
      BinnedSum(cell_bins_, [&](double j) { return term(alpha, j); });
  const double totals =
      BinnedSum(total_bins_, [&](double j) { return term(x, j); });
  return cells - r_ * r_ * totals;
}

AlphaFit FitAlpha(const CountMatrix &counts) {
  if (counts.num_rows() == 0) {
    throw InvalidArgument("cannot fit alpha without any observed context");
  }
  const DmLikelihood lik(counts);
  AlphaFit fit;
  if (lik.flat()) {
    fit.alpha_star = 1.0;
    fit.log_likelihood = lik.LogLikelihood(1.0);
    fit.converged = true;
    fit.degenerate = true;
    return fit;
  }

  const double lo = std::log(kAlphaLowerBound);
  const double hi = std::log(kAlphaUpperBound);
  auto grid_u = [&](int i) {
    return i == kScanPoints - 1 ? hi : lo + (hi - lo) * i / (kScanPoints - 1);
  };
  // Slope of l with respect to u = log(alpha).
  auto slope = [&](double u) {
    const double a = std::exp(u);
    return a * lik.Derivative(a);
  };

  int best = 0;
  double best_value = -INFINITY;
  for (int i = 0; i < kScanPoints; ++i) {
    const double v = lik.LogLikelihood(std::exp(grid_u(i)));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  auto finish_at_bound = [&](double alpha) {
    fit.alpha_star = alpha;
    fit.log_likelihood = lik.LogLikelihood(alpha);
    fit.converged = true;
    fit.hit_bound = true;
    return fit;
  };
  if (best == 0 && slope(lo) <= 0.0) return finish_at_bound(kAlphaLowerBound);
  if (best == kScanPoints - 1 && slope(hi) >= 0.0) {
    return finish_at_bound(kAlphaUpperBound);
  }

  double a = grid_u(std::max(best - 1, 0));
  double b = grid_u(std::min(best + 1, kScanPoints - 1));
  double u = grid_u(best);
  for (int it = 1; it <= kMaxIterations; ++it) {
    fit.iterations = it;
    const double alpha = std::exp(u);
    const double d1 = lik.Derivative(alpha);
    const double g = alpha * d1;
    if (g > 0.0) {
      a = u;
    } else if (g < 0.0) {
      b = u;
    } else {
      fit.converged = true;
      break;
    }
    const double gp = alpha * d1 + alpha * alpha * lik.SecondDerivative(alpha);
    double next = gp < 0.0 ? u - g / gp : NAN;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double step = next - u;
    u = next;
    // |delta alpha| / alpha = |expm1(step)|.
    if (std::fabs(std::expm1(step)) < kRelativeTolerance ||
        std::fabs(std::expm1(b - a)) < kRelativeTolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.alpha_star = std::exp(u);
  fit.log_likelihood = lik.LogLikelihood(fit.alpha_star);
  if (fit.log_likelihood < best_value) {
    // The bracket walked away from the scanned maximum; keep the scan point.
    fit.alpha_star = std::exp(grid_u(best));
    fit.log_likelihood = best_value;
    fit.converged = false;
  }
  fit.hit_bound = fit.alpha_star <= std::nextafter(kAlphaLowerBound, INFINITY) ||
                  fit.alpha_star >= std::nextafter(kAlphaUpperBound, 0.0);
  return fit;
}

AlphaFit FitAlpha(const SymbolSequence &seq, int k) {
  return FitAlpha(CountMatrix::FromCounts(BuildCounts(seq, k)));
}

}  // namespace fcmtune
