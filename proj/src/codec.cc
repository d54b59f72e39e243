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

#include "fcmtune/codec.h"

#include <bit>
#include <cmath>
#include <cstring>

namespace fcmtune {

namespace {

constexpr uint32_t kTop = 1u << 24;

// Carry-propagating range encoder: 33-bit low, 32-bit range, bytewise
// renormalization. Pending 0xFF bytes are held in (cache_, cache_size_) until
// a carry either resolves them or not.
class RangeEncoder {
 public:
  explicit RangeEncoder(std::string *out) : out_(out) {}

  void Encode(uint32_t cum, uint32_t freq, uint32_t total) {
    const uint32_t step = range_ / total;
    low_ += static_cast<uint64_t>(step) * cum;
    range_ = step * freq;
    while (range_ < kTop) {
      range_ <<= 8;
      ShiftLow();
    }
  }

  void Finish() {
    for (int i = 0; i < 5; ++i) ShiftLow();
  }

 private:
  void ShiftLow() {
    if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
      const auto carry = static_cast<uint8_t>(low_ >> 32);
      uint8_t pending = cache_;
      do {
        out_->push_back(static_cast<char>(static_cast<uint8_t>(pending + carry)));
        pending = 0xFF;
      } while (--cache_size_ != 0);
      cache_ = static_cast<uint8_t>(low_ >> 24);
    }
    ++cache_size_;
    low_ = (low_ & 0x00FFFFFFu) << 8;
  }

  std::string *out_;
  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::string_view in) : in_(in) {
    for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | NextByte();
  }

  uint32_t Target(uint32_t total) {
    step_ = range_ / total;
    const uint32_t v = code_ / step_;
    return v < total ? v : total - 1;
  }

  void Consume(uint32_t cum, uint32_t freq) {
    code_ -= step_ * cum;
    range_ = step_ * freq;
    while (range_ < kTop) {
      code_ = (code_ << 8) | NextByte();
      range_ <<= 8;
    }
  }

  size_t consumed() const { return pos_; }

 private:
  uint8_t NextByte() {
    if (pos_ >= in_.size()) throw Error(ErrorCode::kFormat, "truncated payload");
    return static_cast<uint8_t>(in_[pos_++]);
  }

  std::string_view in_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t step_ = 1;
};

void PutLe(std::string *out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out->push_back(static_cast<char>(v >> (8 * i)));
}

uint64_t GetLe(std::string_view in, size_t offset, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<uint64_t>(static_cast<uint8_t>(in[offset + i])) << (8 * i);
  }
  return v;
}

void CheckCodable(const HyperParams &params) {
  params.Validate();
  if (!(params.alpha > 0.0)) {
    throw InvalidArgument(
        "the range coder needs alpha > 0; pass a small epsilon such as 2^-32 "
        "instead of 0");
  }
  if (params.k > 255) throw InvalidArgument("container stores k in one byte");
}

}  // namespace

void CodingFrequencies(std::span<const uint32_t> counts, double alpha, size_t r,
                       std::vector<uint32_t> *freqs) {
  freqs->resize(r);
  uint64_t total = 0;
  for (uint32_t c : counts) total += c;
  const double denom = static_cast<double>(total) + r * alpha;
  for (size_t s = 0; s < r; ++s) {
    const double n = counts.empty() ? 0.0 : counts[s];
    const double f = std::round(kFrequencyScale * ((n + alpha) / denom));
    (*freqs)[s] = f < 1.0 ? 1u : static_cast<uint32_t>(f);
  }
}

std::string CompressedContainer::Serialize() const {
  std::string out(kContainerMagic, 4);
  out.push_back(static_cast<char>(kContainerVersion));
  out.push_back(static_cast<char>(params.k));
  PutLe(&out, std::bit_cast<uint64_t>(params.alpha), 8);
  out.push_back(static_cast<char>(alphabet.size()));
  out += alphabet.symbols();
  PutLe(&out, length, 8);
  out += payload;
  return out;
}

CompressedContainer CompressedContainer::Parse(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kContainerMagic, 4) != 0) {
    throw Error(ErrorCode::kFormat, "bad magic");
  }
  if (bytes.size() < 15) throw Error(ErrorCode::kFormat, "truncated header");
  const auto version = static_cast<uint8_t>(bytes[4]);
  if (version != kContainerVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported container version " + std::to_string(version));
  }
  CompressedContainer c;
  c.params.k = static_cast<uint8_t>(bytes[5]);
  c.params.alpha = std::bit_cast<double>(GetLe(bytes, 6, 8));
  const size_t r = static_cast<uint8_t>(bytes[14]);
  if (bytes.size() < 23 + r) throw Error(ErrorCode::kFormat, "truncated header");
  try {
    c.alphabet = Alphabet(bytes.substr(15, r));
  } catch (const Error &e) {
    throw Error(ErrorCode::kFormat, std::string("bad alphabet: ") + e.what());
  }
  c.length = GetLe(bytes, 15 + r, 8);
  c.payload = std::string(bytes.substr(23 + r));
  return c;
}

CompressedContainer Compress(const SymbolSequence &seq,
                             const HyperParams &params,
                             const FrequencyObserver &observer) {
  CheckCodable(params);
  CompressedContainer c;
  c.params = params;
  c.alphabet = seq.alphabet();
  c.length = seq.size();
  if (seq.empty()) return c;

  const size_t r = seq.r();
  AdaptiveModel model(seq.alphabet(), params.k);
  RangeEncoder enc(&c.payload);
  std::vector<uint32_t> freqs;
  for (uint64_t t = 0; t < seq.size(); ++t) {
    CodingFrequencies(model.current(), params.alpha, r, &freqs);
    if (observer) observer(t, freqs);
    const Symbol s = seq[t];
    uint32_t cum = 0;
    uint32_t total = 0;
    for (size_t a = 0; a < r; ++a) {
      if (a == s) cum = total;
      total += freqs[a];
    }
    enc.Encode(cum, freqs[s], total);
    model.Update(s);
  }
  enc.Finish();
  return c;
}

SymbolSequence Decompress(const CompressedContainer &container,
                          const FrequencyObserver &observer) {
  CheckCodable(container.params);
  const Alphabet &alphabet = container.alphabet;
  if (container.length == 0) {
    if (!container.payload.empty()) {
      throw Error(ErrorCode::kFormat, "trailing bytes after payload");
    }
    return SymbolSequence(alphabet);
  }
  const size_t r = alphabet.size();
  AdaptiveModel model(alphabet, container.params.k);
  RangeDecoder dec(container.payload);
  std::vector<uint32_t> freqs;
  std::vector<Symbol> data;
  data.reserve(container.length);
  for (uint64_t t = 0; t < container.length; ++t) {
    CodingFrequencies(model.current(), container.params.alpha, r, &freqs);
    if (observer) observer(t, freqs);
    uint32_t total = 0;
    for (uint32_t f : freqs) total += f;
    const uint32_t target = dec.Target(total);
    uint32_t cum = 0;
    size_t s = 0;
    while (cum + freqs[s] <= target) cum += freqs[s++];
    dec.Consume(cum, freqs[s]);
    data.push_back(static_cast<Symbol>(s));
    model.Update(static_cast<Symbol>(s));
  }
  if (dec.consumed() != container.payload.size()) {
    throw Error(ErrorCode::kFormat, "trailing bytes after payload");
  }
  return SymbolSequence(alphabet, std::move(data));
}

}  // namespace fcmtune
