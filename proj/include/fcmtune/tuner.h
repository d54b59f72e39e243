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
// Hyperparameter selection for finite-context models.
//
// TwoStepSelect picks k* as the lag of maximum pami and then alpha* by
// maximum marginal likelihood at k*; the model is evaluated once.
// GridSearch evaluates the bitrate of every (k, alpha) grid point and keeps
// the cheapest one.

#ifndef FCMTUNE_TUNER_H_
#define FCMTUNE_TUNER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "fcmtune/alpha_ml.h"
#include "fcmtune/dependence.h"
#include "fcmtune/fcm.h"

namespace fcmtune {

enum class SelectionMethod { kTwoStep, kGridSearch };

const char *SelectionMethodName(SelectionMethod m);

struct SelectionResult {
  SelectionMethod method = SelectionMethod::kTwoStep;
  HyperParams params;
  BitrateResult bitrate;
  std::optional<DependenceProfile> profile;
  std::optional<AlphaFit> alpha_fit;
  // Number of bitrate evaluations (compressor runs) performed.
  uint64_t evaluations = 0;
};

SelectionResult TwoStepSelect(const SymbolSequence &seq,
                              int max_lag = kDefaultMaxLag);

struct SearchGrid {
  std::vector<int> k_values;
  std::vector<double> alpha_values;

  // k in {1..k_max}, alpha in {0, 1/(steps-1), ..., 1}. The defaults give
  // the 10 x 101 = 1,010 point grid.
  static SearchGrid Default(int k_max = 10, int alpha_steps = 101);
  size_t size() const { return k_values.size() * alpha_values.size(); }
};

// Argmin of the bitrate over the grid; ties go to the smaller k, then the
// smaller alpha, so the result does not depend on the grid order. Orders are
// evaluated on up to `threads` threads; the result is identical for any
// thread count.
SelectionResult GridSearch(const SymbolSequence &seq, const SearchGrid &grid,
                           int threads = 1);

struct Comparison {
  std::optional<HyperParams> truth;
  // Bitrate under the generating parameters, when known.
  std::optional<BitrateResult> true_bitrate;
  SelectionResult two_step;
  std::optional<SelectionResult> grid;
  // two_step.params.k == truth->k.
  bool k_match = false;
};

Comparison Compare(const SymbolSequence &seq,
                   const std::optional<HyperParams> &truth,
                   int max_lag = kDefaultMaxLag,
                   const std::optional<SearchGrid> &grid = SearchGrid::Default(),
                   int threads = 1);

}  // namespace fcmtune

#endif  // FCMTUNE_TUNER_H_
