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
// Range coder driven by the adaptive finite-context model.
//
// Container layout (all integers little-endian):
//
//   offset  size  field
//   0       4     magic "FCM1"
//   4       1     version (1)
//   5       1     k
//   6       8     alpha, IEEE-754 binary64 bit pattern
//   14      1     alphabet size r
//   15      r     alphabet labels
//   15+r    8     sequence length T
//   23+r    ...   range-coded payload (empty when T = 0)

#ifndef FCMTUNE_CODEC_H_
#define FCMTUNE_CODEC_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcmtune/fcm.h"

namespace fcmtune {

inline constexpr char kContainerMagic[4] = {'F', 'C', 'M', '1'};
inline constexpr uint8_t kContainerVersion = 1;
// Target total of the integer frequency table of every coding step.
inline constexpr uint32_t kFrequencyScale = 1u << 16;

struct CompressedContainer {
  HyperParams params;
  Alphabet alphabet = Alphabet::Default();
  uint64_t length = 0;
  std::string payload;

  size_t header_bytes() const { return 23 + alphabet.size(); }
  std::string Serialize() const;
  // Throws Error(kFormat) on bad magic, unknown version or a short header.
  static CompressedContainer Parse(std::string_view bytes);
};

// Integer frequencies of one coding step:
//   freq_s = max(1, round(kFrequencyScale * (n_s + alpha) / (N + r alpha)))
// `counts` empty means the all-zero context.
void CodingFrequencies(std::span<const uint32_t> counts, double alpha, size_t r,
                       std::vector<uint32_t> *freqs);

// Called with (position, frequency table) before each symbol is coded.
using FrequencyObserver =
    std::function<void(uint64_t, std::span<const uint32_t>)>;

// Requires alpha > 0; unsmoothed models must substitute a small epsilon.
CompressedContainer Compress(const SymbolSequence &seq,
                             const HyperParams &params,
                             const FrequencyObserver &observer = nullptr);

// Throws Error(kFormat) on a truncated or overlong payload.
SymbolSequence Decompress(const CompressedContainer &container,
                          const FrequencyObserver &observer = nullptr);

}  // namespace fcmtune

#endif  // FCMTUNE_CODEC_H_
