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
// Alphabets, index-encoded symbol sequences and plain-text sequence files.

#ifndef FCMTUNE_ALPHABET_H_
#define FCMTUNE_ALPHABET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcmtune/error.h"

namespace fcmtune {

using Symbol = uint8_t;

// Ordered set of distinct single-byte symbol labels. Cardinality is in
// [2, 255] so that a symbol index always fits in one byte and the codec
// header can store the size in a u8.
class Alphabet {
 public:
  static constexpr size_t kMaxSize = 255;

  // Throws InvalidArgument on duplicates or a size outside [2, 255].
  explicit Alphabet(std::string_view symbols);

  // {A,B,C,D}, the four-symbol default.
  static Alphabet Default();
  // {A,C,G,T}.
  static Alphabet Dna();
  // Resolves a CLI spelling: "default", "ABCD", "dna", "ACGT" or any literal
  // list of distinct characters.
  static Alphabet FromFlag(std::string_view flag);

  size_t size() const { return symbols_.size(); }
  const std::string &symbols() const { return symbols_; }
  char label(Symbol index) const { return symbols_[index]; }

  // Index of `c`, or nullopt if `c` is not part of the alphabet.
  std::optional<Symbol> Index(char c) const {
    int v = index_[static_cast<unsigned char>(c)];
    if (v < 0) return std::nullopt;
    return static_cast<Symbol>(v);
  }

  bool operator==(const Alphabet &other) const {
    return symbols_ == other.symbols_;
  }

 private:
  std::string symbols_;
  std::array<int16_t, 256> index_;
};

// Index-encoded sequence over an alphabet. Every element is < alphabet.size().
class SymbolSequence {
 public:
  explicit SymbolSequence(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  // Throws InvalidArgument if any index is out of range.
  SymbolSequence(Alphabet alphabet, std::vector<Symbol> data);

  const Alphabet &alphabet() const { return alphabet_; }
  size_t r() const { return alphabet_.size(); }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::span<const Symbol> data() const { return data_; }
  Symbol operator[](size_t t) const { return data_[t]; }

  bool operator==(const SymbolSequence &other) const {
    return alphabet_ == other.alphabet_ && data_ == other.data_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> data_;
};

// Parses `text` over `alphabet`. Spaces, tabs, CR and LF are skipped; any
// other character outside the alphabet raises ParseError with its offset.
// When `alphabet` is nullopt the alphabet is inferred from the distinct
// characters in order of first appearance.
SymbolSequence ParseSequence(std::string_view text,
                             const std::optional<Alphabet> &alphabet);

std::string RenderSequence(const SymbolSequence &seq);

SymbolSequence ReadSequenceFile(const std::filesystem::path &path,
                                const std::optional<Alphabet> &alphabet);
void WriteSequenceFile(const std::filesystem::path &path,
                       const SymbolSequence &seq);

std::string ReadFileBytes(const std::filesystem::path &path);
void WriteFileBytes(const std::filesystem::path &path, std::string_view bytes);

}  // namespace fcmtune

#endif  // FCMTUNE_ALPHABET_H_
