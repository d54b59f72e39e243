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
// Order-k finite-context models with Lidstone (additive) smoothing.
//
// A model with hyperparameters (k, alpha) predicts the next symbol s from
// the counts n_a accumulated for the current length-k context:
//
//   P(s | context) = (n_s + alpha) / (sum_a n_a + r * alpha)
//
// The model is adaptive: counts start at zero and are updated after every
// symbol, so the same replay drives sequence generation, the theoretical
// bitrate and the range coder. The first k positions of a sequence have no
// full context and are treated as uniform.

#ifndef FCMTUNE_FCM_H_
#define FCMTUNE_FCM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fcmtune/alphabet.h"
#include "fcmtune/key_index.h"

namespace fcmtune {

struct HyperParams {
  int k = 0;
  double alpha = 1.0;

  // alpha == 0 is the unsmoothed relative-frequency model.
  bool no_smoothing() const { return alpha == 0.0; }
  // Throws InvalidArgument when k < 0 or alpha is negative or not finite.
  void Validate() const;

  bool operator==(const HyperParams &) const = default;
};

// Probability assigned when an unsmoothed model sees a symbol with zero
// count in a context it has visited before.
inline constexpr double kZeroProbabilityFloor = 0x1.0p-32;

// Lidstone estimate of symbol `s` given the count vector of a context.
// An empty `counts` span stands for the all-zero vector of length r.
// Throws Error(kNumeric) for alpha == 0 with all-zero counts.
double LidstoneProb(std::span<const uint32_t> counts, Symbol s, double alpha,
                    size_t r);

// Encodes length-k contexts as base-r integers, most significant symbol
// first. Throws InvalidArgument if r^(k+1) does not fit in 64 bits.
class ContextCoder {
 public:
  ContextCoder(size_t r, int k);

  int k() const { return k_; }
  size_t r() const { return r_; }
  // r^k, the number of distinct contexts.
  uint64_t num_contexts() const { return modulus_; }
  // Key of the context obtained by appending `s` to the context `key`.
  uint64_t Shift(uint64_t key, Symbol s) const {
    return (key * r_ + s) % modulus_;
  }
  // Key of window[0..k).
  uint64_t Encode(std::span<const Symbol> window) const;
  std::vector<Symbol> Decode(uint64_t key) const;

 private:
  size_t r_;
  int k_;
  uint64_t modulus_;
};

// Per-context symbol counts for a fixed order k. Contexts are stored
// sparsely; contexts that were never seen are all-zero.
class ContextCounts {
 public:
  ContextCounts(Alphabet alphabet, int k);

  int k() const { return coder_.k(); }
  size_t r() const { return coder_.r(); }
  const Alphabet &alphabet() const { return alphabet_; }
  const ContextCoder &coder() const { return coder_; }

  // Number of distinct contexts stored.
  size_t num_rows() const { return keys_.size(); }
  uint64_t row_key(size_t row) const { return keys_[row]; }
  std::span<const uint32_t> row_counts(size_t row) const {
    return {counts_.data() + row * r(), r()};
  }
  uint64_t row_total(size_t row) const { return totals_[row]; }

  // Counts of the context `key`; empty span if the context was never seen.
  std::span<const uint32_t> Lookup(uint64_t key) const;
  // Row id of `key`, or KeyIndex::kNotFound.
  uint32_t FindRow(uint64_t key) const { return index_.Find(key); }

  void Increment(uint64_t key, Symbol s);

  // Sum of all counts.
  uint64_t total_mass() const { return mass_; }

  // Set by BuildCounts when the sequence was shorter than k.
  bool short_sequence() const { return short_sequence_; }
  void set_short_sequence(bool v) { short_sequence_ = v; }

 private:
  Alphabet alphabet_;
  ContextCoder coder_;
  KeyIndex index_;
  std::vector<uint64_t> keys_;
  std::vector<uint32_t> counts_;
  std::vector<uint64_t> totals_;
  uint64_t mass_ = 0;
  bool short_sequence_ = false;
};

// Counts every transition context -> symbol at positions t = k..T-1.
// The total mass is exactly T - k (zero with short_sequence() set if T < k).
ContextCounts BuildCounts(const SymbolSequence &seq, int k);

// Replays a sequence through an adaptive order-k model. Callers query the
// counts of the current context, then call Update with the symbol that
// actually occurred.
class AdaptiveModel {
 public:
  AdaptiveModel(const Alphabet &alphabet, int k);

  // True while fewer than k symbols have been seen.
  bool bootstrapping() const { return seen_ < static_cast<uint64_t>(k()); }
  // Counts of the current context; empty if it is unseen or bootstrapping.
  std::span<const uint32_t> current() const {
    if (row_ == KeyIndex::kNotFound) return {};
    return counts_.row_counts(row_);
  }
  uint64_t current_total() const {
    return row_ == KeyIndex::kNotFound ? 0 : counts_.row_total(row_);
  }

  void Update(Symbol s);

  int k() const { return counts_.k(); }
  size_t r() const { return counts_.r(); }
  const ContextCounts &counts() const { return counts_; }

 private:
  ContextCounts counts_;
  uint64_t key_ = 0;
  uint64_t seen_ = 0;
  uint32_t row_ = KeyIndex::kNotFound;
};

// Draws a sequence of length T from the adaptive model: the first min(k, T)
// symbols are uniform, every later symbol is sampled (inverse CDF in index
// order) from the Lidstone distribution of the counts accumulated so far.
// Deterministic in (params, T, seed). alpha must be > 0.
SymbolSequence Generate(const HyperParams &params, size_t length,
                        uint64_t seed,
                        const Alphabet &alphabet = Alphabet::Default());

struct BitrateResult {
  double bits_per_symbol = 0.0;
  double total_bits = 0.0;
  uint64_t symbols_coded = 0;
  // Zero-probability events that were charged -log2(kZeroProbabilityFloor).
  uint64_t floored_events = 0;
};

// Code length in bits of one prediction. `n` is the count of the observed
// symbol, `total` the context total. Uniform when total == 0; alpha == 0
// with n == 0 < total is floored (and reported through `floored`).
double EventBits(uint64_t n, uint64_t total, double alpha, size_t r,
                 bool *floored);

// Average adaptive code length of `seq` under `params`, in bits per symbol.
// Positions t < k cost log2(r) each. Requires T >= 1.
BitrateResult Bitrate(const SymbolSequence &seq, const HyperParams &params);

// The multiset of (count of observed symbol, context total) pairs met while
// replaying a sequence at order k. It does not depend on alpha, so one
// replay yields the bitrate of every alpha.
class PredictionEvents {
 public:
  PredictionEvents(const SymbolSequence &seq, int k);

  int k() const { return k_; }
  size_t r() const { return r_; }
  uint64_t length() const { return length_; }
  size_t num_distinct() const { return events_.size(); }

  // Equal to Bitrate(seq, {k, alpha}) up to floating-point summation order.
  BitrateResult Evaluate(double alpha) const;

 private:
  struct Event {
    uint32_t n;
    uint32_t total;
    uint64_t multiplicity;
  };
  int k_;
  size_t r_;
  uint64_t length_;
  uint64_t bootstrap_;
  std::vector<Event> events_;
};

}  // namespace fcmtune

#endif  // FCMTUNE_FCM_H_
