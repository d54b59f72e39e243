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

#include "fcmtune/alphabet.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fcmtune {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kFormat:
      return "format_error";
    case ErrorCode::kIo:
      return "io_error";
    case ErrorCode::kNumeric:
      return "numeric_error";
  }
  return "unknown";
}

namespace {

std::string DescribeChar(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  if (std::isprint(u)) return std::string("'") + c + "'";
  std::ostringstream os;
  os << "byte 0x" << std::hex << static_cast<int>(u);
  return os.str();
}

bool IsIgnorable(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

}  // namespace

ParseError::ParseError(char c, size_t offset)
    : Error(ErrorCode::kParse, "character " + DescribeChar(c) +
                                   " at offset " + std::to_string(offset) +
                                   " is not in the alphabet"),
      character_(c),
      offset_(offset) {}

Alphabet::Alphabet(std::string_view symbols) : symbols_(symbols) {
  if (symbols_.size() < 2 || symbols_.size() > kMaxSize) {
    throw InvalidArgument("alphabet must have between 2 and 255 symbols, got " +
                          std::to_string(symbols_.size()));
  }
  index_.fill(-1);
  for (size_t i = 0; i < symbols_.size(); ++i) {
    char c = symbols_[i];
    if (IsIgnorable(c)) {
      throw InvalidArgument("whitespace cannot be an alphabet symbol");
    }
    auto &slot = index_[static_cast<unsigned char>(c)];
    if (slot >= 0) {
      throw InvalidArgument("duplicate alphabet symbol " + DescribeChar(c));
    }
    slot = static_cast<int16_t>(i);
  }
}

Alphabet Alphabet::Default() { return Alphabet("ABCD"); }

Alphabet Alphabet::Dna() { return Alphabet("ACGT"); }

Alphabet Alphabet::FromFlag(std::string_view flag) {
  if (flag == "default") return Default();
  if (flag == "dna" || flag == "DNA") return Dna();
  return Alphabet(flag);
}

SymbolSequence::SymbolSequence(Alphabet alphabet, std::vector<Symbol> data)
    : alphabet_(std::move(alphabet)), data_(std::move(data)) {
  const size_t r = alphabet_.size();
  for (size_t t = 0; t < data_.size(); ++t) {
    if (data_[t] >= r) {
      throw InvalidArgument("symbol index " + std::to_string(data_[t]) +
                            " at position " + std::to_string(t) +
                            " exceeds alphabet size " + std::to_string(r));
    }
  }
}

SymbolSequence ParseSequence(std::string_view text,
                             const std::optional<Alphabet> &alphabet) {
  std::string symbols;
  if (alphabet) {
    symbols = alphabet->symbols();
  } else {
    std::array<bool, 256> seen{};
    for (char c : text) {
      if (IsIgnorable(c)) continue;
      auto &s = seen[static_cast<unsigned char>(c)];
      if (!s) {
        s = true;
        symbols.push_back(c);
      }
    }
    // A sequence with fewer than two distinct symbols still needs a valid
    // alphabet; pad with the default labels.
    for (char c : Alphabet::Default().symbols()) {
      if (symbols.size() >= 2) break;
      if (symbols.find(c) == std::string::npos) symbols.push_back(c);
    }
  }
  Alphabet abc(symbols);
  std::vector<Symbol> data;
  data.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (IsIgnorable(c)) continue;
    auto idx = abc.Index(c);
    if (!idx) throw ParseError(c, i);
    data.push_back(*idx);
  }
  return SymbolSequence(std::move(abc), std::move(data));
}

std::string RenderSequence(const SymbolSequence &seq) {
  std::string out;
  out.reserve(seq.size());
  for (Symbol s : seq.data()) out.push_back(seq.alphabet().label(s));
  return out;
}

std::string ReadFileBytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path &path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

SymbolSequence ReadSequenceFile(const std::filesystem::path &path,
                                const std::optional<Alphabet> &alphabet) {
  return ParseSequence(ReadFileBytes(path), alphabet);
}

void WriteSequenceFile(const std::filesystem::path &path,
                       const SymbolSequence &seq) {
  std::string text = RenderSequence(seq);
  text.push_back('\n');
  WriteFileBytes(path, text);
}

}  // namespace fcmtune
