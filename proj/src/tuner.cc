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

#include "fcmtune/tuner.h"

#include <algorithm>
#include <cmath>

#include "fcmtune/parallel.h"

namespace fcmtune {

const char *SelectionMethodName(SelectionMethod m) {
  return m == SelectionMethod::kTwoStep ? "two_step" : "grid_search";
}

SelectionResult TwoStepSelect(const SymbolSequence &seq, int max_lag) {
  SelectionResult result;
  result.method = SelectionMethod::kTwoStep;
  result.profile = ComputeProfile(seq, Measure::kPami, max_lag);
  const int k_star = SelectK(*result.profile);
  result.alpha_fit = FitAlpha(seq, k_star);
  result.params = {k_star, result.alpha_fit->alpha_star};
  result.bitrate = Bitrate(seq, result.params);
  result.evaluations = 1;
  return result;
}

SearchGrid SearchGrid::Default(int k_max, int alpha_steps) {
  if (k_max < 1) throw InvalidArgument("grid k_max must be >= 1");
  if (alpha_steps < 2) throw InvalidArgument("grid needs >= 2 alpha steps");
  SearchGrid grid;
  for (int k = 1; k <= k_max; ++k) grid.k_values.push_back(k);
  for (int i = 0; i < alpha_steps; ++i) {
    grid.alpha_values.push_back(static_cast<double>(i) / (alpha_steps - 1));
  }
  return grid;
}

SelectionResult GridSearch(const SymbolSequence &seq, const SearchGrid &grid,
                           int threads) {
  if (grid.k_values.empty() || grid.alpha_values.empty()) {
    throw InvalidArgument("grid search needs non-empty k and alpha grids");
  }
  if (seq.empty()) throw InvalidArgument("grid search on an empty sequence");
  std::vector<int> ks = grid.k_values;
  std::vector<double> alphas = grid.alpha_values;
  std::sort(ks.begin(), ks.end());
  std::sort(alphas.begin(), alphas.end());
  for (int k : ks) HyperParams{k, 0.0}.Validate();
  for (double a : alphas) HyperParams{0, a}.Validate();

  // One replay per order; every alpha is then evaluated from the events.
  std::vector<std::vector<BitrateResult>> table(ks.size());
  ParallelFor(ks.size(), threads, [&](size_t i) {
    const PredictionEvents events(seq, ks[i]);
    table[i].reserve(alphas.size());
    for (double a : alphas) table[i].push_back(events.Evaluate(a));
  });

  SelectionResult result;
  result.method = SelectionMethod::kGridSearch;
  bool have = false;
  for (size_t i = 0; i < ks.size(); ++i) {
    for (size_t j = 0; j < alphas.size(); ++j) {
      const BitrateResult &b = table[i][j];
      if (!have || b.bits_per_symbol < result.bitrate.bits_per_symbol) {
        result.params = {ks[i], alphas[j]};
        result.bitrate = b;
        have = true;
      }
    }
  }
  result.evaluations = grid.size();
  return result;
}

Comparison Compare(const SymbolSequence &seq,
                   const std::optional<HyperParams> &truth, int max_lag,
                   const std::optional<SearchGrid> &grid, int threads) {
  Comparison c;
  c.truth = truth;
  if (truth) c.true_bitrate = Bitrate(seq, *truth);
  c.two_step = TwoStepSelect(seq, max_lag);
  if (grid) c.grid = GridSearch(seq, *grid, threads);
  c.k_match = truth && truth->k == c.two_step.params.k;
  return c;
}

}  // namespace fcmtune
