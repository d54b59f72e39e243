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

#include "fcmtune/dependence.h"

#include <cmath>
#include <limits>

#include "fcmtune/key_index.h"

namespace fcmtune {

const char *MeasureName(Measure m) {
  switch (m) {
    case Measure::kPami:
      return "pami";
    case Measure::kCramersV:
      return "cramers_v";
    case Measure::kCohensKappa:
      return "cohens_kappa";
  }
  return "unknown";
}

Measure ParseMeasure(std::string_view name) {
  if (name == "pami") return Measure::kPami;
  if (name == "cramers" || name == "cramers_v") return Measure::kCramersV;
  if (name == "kappa" || name == "cohens_kappa") return Measure::kCohensKappa;
  throw InvalidArgument("unknown dependence measure '" + std::string(name) +
                        "'");
}

namespace {

void CheckLag(const SymbolSequence &seq, int h) {
  if (h < 1) throw InvalidArgument("lag must be >= 1");
  if (static_cast<size_t>(h) >= seq.size()) {
    throw InvalidArgument("lag " + std::to_string(h) +
                          " must be smaller than the sequence length " +
                          std::to_string(seq.size()));
  }
}

// Occurrence counts of u64 keys, in first-appearance order.
class KeyCounter {
 public:
  explicit KeyCounter(size_t expected) : index_(expected) {}

  void Add(uint64_t key) {
    const uint32_t id = index_.FindOrInsert(key);
    if (id == counts_.size()) {
      counts_.push_back(0);
      keys_.push_back(key);
    }
    ++counts_[id];
  }
  // Distinct keys in first-appearance order, with their counts.
  const std::vector<uint64_t> &keys() const { return keys_; }
  const std::vector<uint64_t> &counts() const { return counts_; }
  uint64_t Count(uint64_t key) const { return counts_[index_.Find(key)]; }

 private:
  KeyIndex index_;
  std::vector<uint64_t> keys_;
  std::vector<uint64_t> counts_;
};

}  // namespace

std::vector<double> Marginals(const SymbolSequence &seq) {
  if (seq.empty()) throw InvalidArgument("marginals of an empty sequence");
  std::vector<uint64_t> counts(seq.r(), 0);
  for (Symbol s : seq.data()) ++counts[s];
  std::vector<double> p(seq.r());
  for (size_t i = 0; i < p.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / seq.size();
  }
  return p;
}

LaggedJoint ComputeLaggedJoint(const SymbolSequence &seq, int h) {
  CheckLag(seq, h);
  const size_t r = seq.r();
  std::vector<uint64_t> counts(r * r, 0);
  auto y = seq.data();
  for (size_t t = h; t < y.size(); ++t) ++counts[y[t] * r + y[t - h]];
  LaggedJoint out;
  out.h = h;
  out.r = r;
  out.joint.resize(r * r);
  const double n = static_cast<double>(y.size() - h);
  for (size_t c = 0; c < counts.size(); ++c) out.joint[c] = counts[c] / n;
  out.marginals = Marginals(seq);
  return out;
}

MeasureValue CramersV(const SymbolSequence &seq, int h) {
  const LaggedJoint lj = ComputeLaggedJoint(seq, h);
  const auto &p = lj.marginals;
  size_t r_eff = 0;
  for (double pi : p) r_eff += pi > 0.0;
  if (r_eff < 2) return {0.0, true};
  double chi = 0.0;
  for (size_t i = 0; i < lj.r; ++i) {
    for (size_t j = 0; j < lj.r; ++j) {
      const double e = p[i] * p[j];
      if (e <= 0.0) continue;
      const double d = lj.at(i, j) - e;
      chi += d * d / e;
    }
  }
  return {std::sqrt(chi / static_cast<double>(r_eff - 1)), false};
}

MeasureValue CohensKappa(const SymbolSequence &seq, int h) {
  const LaggedJoint lj = ComputeLaggedJoint(seq, h);
  double agree = 0.0;
  double chance = 0.0;
  for (size_t i = 0; i < lj.r; ++i) {
    const double pi2 = lj.marginals[i] * lj.marginals[i];
    agree += lj.at(i, i) - pi2;
    chance += pi2;
  }
  const double denom = 1.0 - chance;
  if (denom <= 0.0) {
    return {std::numeric_limits<double>::quiet_NaN(), true};
  }
  return {agree / denom, false};
}

double Pami(const SymbolSequence &seq, int h) {
  CheckLag(seq, h);
  const uint64_t r = seq.r();
  // Window key: base-r number with Y_t most significant, Y_{t+h} least.
  uint64_t pow_h = 1;  // r^h
  for (int i = 0; i < h; ++i) {
    if (pow_h > std::numeric_limits<uint64_t>::max() / (r * r * r)) {
      throw InvalidArgument("lag " + std::to_string(h) +
                            " is too large for alphabet size " +
                            std::to_string(r));
    }
    pow_h *= r;
  }
  const uint64_t pow_mid = pow_h / r;  // r^(h-1)
  auto y = seq.data();
  const size_t n = y.size() - h;

  KeyCounter windows(n), lefts(n), rights(n), mids(n);
  uint64_t key = 0;
  for (int i = 0; i < h; ++i) key = key * r + y[i];
  for (size_t t = 0; t < n; ++t) {
    key = (key * r + y[t + h]) % (pow_h * r);
    windows.Add(key);
    lefts.Add(key / r);
    rights.Add(key % pow_h);
    mids.Add((key / r) % pow_mid);
  }

  const double total = static_cast<double>(n);
  double sum = 0.0;
  for (size_t i = 0; i < windows.keys().size(); ++i) {
    const uint64_t w = windows.keys()[i];
    const double cw = static_cast<double>(windows.counts()[i]);
    const double cm =
        h == 1 ? total : static_cast<double>(mids.Count((w / r) % pow_mid));
    const double cl = static_cast<double>(lefts.Count(w / r));
    const double cr = static_cast<double>(rights.Count(w % pow_h));
    sum += cw / total * std::log(cw * cm / (cl * cr));
  }
  return sum > 0.0 ? sum : 0.0;
}

DependenceProfile ComputeProfile(const SymbolSequence &seq, Measure measure,
                                 int max_lag) {
  if (max_lag < 1) throw InvalidArgument("max lag must be >= 1");
  if (static_cast<size_t>(max_lag) >= seq.size()) {
    throw InvalidArgument("max lag " + std::to_string(max_lag) +
                          " must be smaller than the sequence length " +
                          std::to_string(seq.size()));
  }
  DependenceProfile profile;
  profile.measure = measure;
  profile.values.resize(max_lag);
  profile.degenerate.assign(max_lag, false);
  for (int h = 1; h <= max_lag; ++h) {
    MeasureValue v;
    switch (measure) {
      case Measure::kPami:
        v.value = Pami(seq, h);
        break;
      case Measure::kCramersV:
        v = CramersV(seq, h);
        break;
      case Measure::kCohensKappa:
        v = CohensKappa(seq, h);
        break;
    }
    profile.values[h - 1] = v.value;
    profile.degenerate[h - 1] = v.degenerate;
  }
  return profile;
}

int SelectK(const DependenceProfile &profile) {
  if (profile.values.empty()) throw InvalidArgument("empty profile");
  int best = 0;
  for (int i = 0; i < profile.max_lag(); ++i) {
    const double v = profile.values[i];
    if (!std::isfinite(v)) continue;
    if (best == 0 || v > profile.values[best - 1]) best = i + 1;
  }
  if (best == 0) {
    throw Error(ErrorCode::kNumeric, "profile has no finite value");
  }
  return best;
}

}  // namespace fcmtune
