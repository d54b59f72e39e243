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
// Serial dependence measures of categorical sequences, and the
// maximum-pami rule for choosing a context order.
//
// All estimators are plug-in (relative frequency) estimators:
//
//   p_i       = #{t : Y_t = i} / T
//   p_ij(h)   = #{t : Y_t = i, Y_{t-h} = j} / (T - h)
//   V(h)      = sqrt( sum_{ij} (p_ij(h) - p_i p_j)^2 / (p_i p_j) / (r' - 1) )
//   kappa(h)  = sum_i (p_ii(h) - p_i^2) / (1 - sum_i p_i^2)
//   pami(h)   = I(Y_t ; Y_{t+h} | Y_{t+1}, ..., Y_{t+h-1})
//
// where r' counts the symbols with p_i > 0 and cells with p_i p_j = 0 are
// skipped. pami is the plug-in conditional mutual information (natural log)
// of the empirical distribution of the T - h windows of length h + 1.

#ifndef FCMTUNE_DEPENDENCE_H_
#define FCMTUNE_DEPENDENCE_H_

#include <string>
#include <string_view>
#include <vector>

#include "fcmtune/alphabet.h"

namespace fcmtune {

enum class Measure { kPami, kCramersV, kCohensKappa };

const char *MeasureName(Measure m);
// Accepts "pami", "cramers", "cramers_v", "kappa", "cohens_kappa".
Measure ParseMeasure(std::string_view name);

inline constexpr int kDefaultMaxLag = 10;

// Relative frequency of each symbol. Throws on an empty sequence.
std::vector<double> Marginals(const SymbolSequence &seq);

struct LaggedJoint {
  int h = 0;
  size_t r = 0;
  // joint[i * r + j] = p_ij(h), the frequency of (Y_t = i, Y_{t-h} = j).
  std::vector<double> joint;
  // Marginals of the whole sequence.
  std::vector<double> marginals;

  double at(size_t i, size_t j) const { return joint[i * r + j]; }
};

// Requires 1 <= h < T.
LaggedJoint ComputeLaggedJoint(const SymbolSequence &seq, int h);

struct MeasureValue {
  double value = 0.0;
  // Constant sequence: Cramer's V is reported as 0 and Cohen's kappa as NaN.
  bool degenerate = false;
};

MeasureValue CramersV(const SymbolSequence &seq, int h);
MeasureValue CohensKappa(const SymbolSequence &seq, int h);
// Requires 1 <= h < T and r^(h+1) < 2^64. Always >= 0.
double Pami(const SymbolSequence &seq, int h);

struct DependenceProfile {
  Measure measure = Measure::kPami;
  // values[h - 1] is the measure at lag h, h = 1..max_lag().
  std::vector<double> values;
  std::vector<bool> degenerate;

  int max_lag() const { return static_cast<int>(values.size()); }
};

// Requires 1 <= max_lag < T.
DependenceProfile ComputeProfile(const SymbolSequence &seq, Measure measure,
                                 int max_lag = kDefaultMaxLag);

// Smallest lag attaining the maximum finite value. Throws if the profile is
// empty or has no finite value.
int SelectK(const DependenceProfile &profile);

}  // namespace fcmtune

#endif  // FCMTUNE_DEPENDENCE_H_
