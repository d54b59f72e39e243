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

#include "fcmtune/fcm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fcmtune/rng.h"

namespace fcmtune {

void HyperParams::Validate() const {
  if (k < 0) throw InvalidArgument("context order k must be >= 0");
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InvalidArgument("smoothing alpha must be finite and >= 0");
  }
}

double LidstoneProb(std::span<const uint32_t> counts, Symbol s, double alpha,
                    size_t r) {
  if (!counts.empty() && counts.size() != r) {
    throw InvalidArgument("count vector length differs from alphabet size");
  }
  if (s >= r) throw InvalidArgument("symbol index out of range");
  if (alpha < 0.0) throw InvalidArgument("alpha must be >= 0");
  uint64_t total = 0;
  for (uint32_t c : counts) total += c;
  const double n = counts.empty() ? 0.0 : counts[s];
  const double denom = static_cast<double>(total) + r * alpha;
  if (denom == 0.0) {
    throw Error(ErrorCode::kNumeric,
                "Lidstone estimate undefined: alpha = 0 and context unseen");
  }
  return (n + alpha) / denom;
}

ContextCoder::ContextCoder(size_t r, int k) : r_(r), k_(k), modulus_(1) {
  if (k < 0) throw InvalidArgument("context order k must be >= 0");
  if (r < 2) throw InvalidArgument("alphabet size must be >= 2");
  // Shift() computes key * r with key < r^k, so r^(k+1) must fit.
  constexpr uint64_t kMax = std::numeric_limits<uint64_t>::max();
  for (int i = 0; i <= k; ++i) {
    if (modulus_ > kMax / r) {
      throw InvalidArgument("context order " + std::to_string(k) +
                            " is too large for alphabet size " +
                            std::to_string(r));
    }
    if (i < k) modulus_ *= r;
  }
}

uint64_t ContextCoder::Encode(std::span<const Symbol> window) const {
  uint64_t key = 0;
  for (Symbol s : window) key = key * r_ + s;
  return key;
}

std::vector<Symbol> ContextCoder::Decode(uint64_t key) const {
  std::vector<Symbol> out(k_);
  for (int i = k_ - 1; i >= 0; --i) {
    out[i] = static_cast<Symbol>(key % r_);
    key /= r_;
  }
  return out;
}

ContextCounts::ContextCounts(Alphabet alphabet, int k)
    : alphabet_(std::move(alphabet)), coder_(alphabet_.size(), k) {}

std::span<const uint32_t> ContextCounts::Lookup(uint64_t key) const {
  const uint32_t row = index_.Find(key);
  if (row == KeyIndex::kNotFound) return {};
  return row_counts(row);
}

void ContextCounts::Increment(uint64_t key, Symbol s) {
  const uint32_t row = index_.FindOrInsert(key);
  if (row == keys_.size()) {
    keys_.push_back(key);
    counts_.resize(counts_.size() + r(), 0);
    totals_.push_back(0);
  }
  ++counts_[row * r() + s];
  ++totals_[row];
  ++mass_;
}

ContextCounts BuildCounts(const SymbolSequence &seq, int k) {
  ContextCounts counts(seq.alphabet(), k);
  const size_t n = seq.size();
  if (n < static_cast<size_t>(k)) {
    counts.set_short_sequence(true);
    return counts;
  }
  const auto &coder = counts.coder();
  uint64_t key = coder.Encode(seq.data().first(k));
  for (size_t t = k; t < n; ++t) {
    counts.Increment(key, seq[t]);
    key = coder.Shift(key, seq[t]);
  }
  return counts;
}

AdaptiveModel::AdaptiveModel(const Alphabet &alphabet, int k)
    : counts_(alphabet, k) {
  if (k == 0) row_ = counts_.FindRow(0);
}

void AdaptiveModel::Update(Symbol s) {
  if (!bootstrapping()) counts_.Increment(key_, s);
  key_ = counts_.coder().Shift(key_, s);
  ++seen_;
  row_ = bootstrapping() ? KeyIndex::kNotFound : counts_.FindRow(key_);
}

SymbolSequence Generate(const HyperParams &params, size_t length,
                        uint64_t seed, const Alphabet &alphabet) {
  params.Validate();
  if (length < 1) throw InvalidArgument("generated length must be >= 1");
  if (params.alpha <= 0.0) {
    throw InvalidArgument(
        "generation requires alpha > 0; the first visit to a context has no "
        "distribution when alpha = 0");
  }
  const size_t r = alphabet.size();
  const double alpha = params.alpha;
  Rng rng(seed);
  AdaptiveModel model(alphabet, params.k);
  std::vector<Symbol> data;
  data.reserve(length);
  for (size_t t = 0; t < length; ++t) {
    Symbol s;
    auto counts = model.current();
    if (model.bootstrapping() || counts.empty()) {
      s = static_cast<Symbol>(rng.NextBelow(r));
    } else {
      const double mass =
          static_cast<double>(model.current_total()) + r * alpha;
      const double u = rng.NextDouble() * mass;
      double cum = 0.0;
      s = static_cast<Symbol>(r - 1);
      for (size_t a = 0; a < r; ++a) {
        cum += counts[a] + alpha;
        if (u < cum) {
          s = static_cast<Symbol>(a);
          break;
        }
      }
    }
    data.push_back(s);
    model.Update(s);
  }
  return SymbolSequence(alphabet, std::move(data));
}

double EventBits(uint64_t n, uint64_t total, double alpha, size_t r,
                 bool *floored) {
  *floored = false;
  if (total == 0) return std::log2(static_cast<double>(r));
  if (alpha == 0.0 && n == 0) {
    *floored = true;
    return -std::log2(kZeroProbabilityFloor);
  }
  const double p = (static_cast<double>(n) + alpha) /
                   (static_cast<double>(total) + r * alpha);
  return -std::log2(p);
}

BitrateResult Bitrate(const SymbolSequence &seq, const HyperParams &params) {
  params.Validate();
  if (seq.empty()) throw InvalidArgument("bitrate needs a non-empty sequence");
  const size_t r = seq.r();
  AdaptiveModel model(seq.alphabet(), params.k);
  BitrateResult result;
  const double uniform_bits = std::log2(static_cast<double>(r));
  for (Symbol s : seq.data()) {
    if (model.bootstrapping()) {
      result.total_bits += uniform_bits;
    } else {
      auto counts = model.current();
      const uint64_t n = counts.empty() ? 0 : counts[s];
      bool floored;
      result.total_bits +=
          EventBits(n, model.current_total(), params.alpha, r, &floored);
      result.floored_events += floored;
    }
    model.Update(s);
  }
  result.symbols_coded = seq.size();
  result.bits_per_symbol = result.total_bits / result.symbols_coded;
  return result;
}

PredictionEvents::PredictionEvents(const SymbolSequence &seq, int k)
    : k_(k), r_(seq.r()), length_(seq.size()), bootstrap_(0) {
  if (seq.size() > UINT32_MAX) {
    throw InvalidArgument("sequence too long for prediction event tables");
  }
  AdaptiveModel model(seq.alphabet(), k);
  KeyIndex index;
  for (Symbol s : seq.data()) {
    if (model.bootstrapping()) {
      ++bootstrap_;
    } else {
      auto counts = model.current();
      const uint32_t n = counts.empty() ? 0 : counts[s];
      const auto total = static_cast<uint32_t>(model.current_total());
      const uint32_t id =
          index.FindOrInsert((static_cast<uint64_t>(total) << 32) | n);
      if (id == events_.size()) events_.push_back({n, total, 0});
      ++events_[id].multiplicity;
    }
    model.Update(s);
  }
  std::sort(events_.begin(), events_.end(), [](const Event &a, const Event &b) {
    return a.total != b.total ? a.total < b.total : a.n < b.n;
  });
}

BitrateResult PredictionEvents::Evaluate(double alpha) const {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InvalidArgument("smoothing alpha must be finite and >= 0");
  }
  if (length_ == 0) throw InvalidArgument("bitrate needs a non-empty sequence");
  BitrateResult result;
  result.total_bits = bootstrap_ * std::log2(static_cast<double>(r_));
  for (const Event &e : events_) {
    bool floored;
    const double bits = EventBits(e.n, e.total, alpha, r_, &floored);
    result.total_bits += bits * static_cast<double>(e.multiplicity);
    if (floored) result.floored_events += e.multiplicity;
  }
  result.symbols_coded = length_;
  result.bits_per_symbol = result.total_bits / length_;
  return result;
}

}  // namespace fcmtune
