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
#include <vector>

#include <gtest/gtest.h>

#include "fcmtune/error.h"
#include "fcmtune/rng.h"
#include "oracles.h"

namespace fcmtune {
namespace {

SymbolSequence RoundTrip(const SymbolSequence &s, const HyperParams &p) {
  const std::string bytes = Compress(s, p).Serialize();
  return Decompress(CompressedContainer::Parse(bytes));
}

TEST(CodecTest, RoundTripRandomSequences) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t r = 2 + rng.NextBelow(6);
    const size_t length = rng.NextBelow(3000);
    const int k = static_cast<int>(rng.NextBelow(7));
    const double alpha = std::exp(-7.0 + 9.0 * rng.NextDouble());
    const SymbolSequence s =
        trial % 2 && length > 0
            ? Generate({k, alpha}, length, rng.NextU64(),
                       Alphabet(std::string("ABCDEFG").substr(0, r)))
            : testing::RandomSequence(rng, r, length);
    EXPECT_EQ(RoundTrip(s, {k, alpha}), s) << "trial " << trial;
  }
}

TEST(CodecTest, EdgeCases) {
  const Alphabet abc = Alphabet::Default();
  const SymbolSequence empty(abc);
  const CompressedContainer c = Compress(empty, {3, 0.5});
  EXPECT_TRUE(c.payload.empty());
  EXPECT_EQ(c.Serialize().size(), c.header_bytes());
  EXPECT_EQ(RoundTrip(empty, {3, 0.5}), empty);
  const SymbolSequence shorter = ParseSequence("CAB", abc);
  EXPECT_EQ(RoundTrip(shorter, {5, 0.5}), shorter);
  const SymbolSequence one = ParseSequence("D", abc);
  EXPECT_EQ(RoundTrip(one, {0, 1.0}), one);
  const SymbolSequence constant(abc, std::vector<Symbol>(5000, 2));
  EXPECT_EQ(RoundTrip(constant, {2, 2e-9}), constant);
}

TEST(CodecTest, RejectsNonPositiveAlpha) {
  const SymbolSequence s = ParseSequence("ABCD", Alphabet::Default());
  try {
    Compress(s, {1, 0.0});
    FAIL() << "expected rejection";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("epsilon"), std::string::npos);
  }
  EXPECT_THROW(Compress(s, {256, 1.0}), Error);
}

TEST(CodecTest, HeaderLayout) {
  const SymbolSequence s = ParseSequence("ACGTTA", Alphabet::Dna());
  const std::string b = Compress(s, {3, 0.25}).Serialize();
  ASSERT_GE(b.size(), 27u);
  EXPECT_EQ(b.substr(0, 4), "FCM1");
  EXPECT_EQ(static_cast<uint8_t>(b[4]), 1);
  EXPECT_EQ(static_cast<uint8_t>(b[5]), 3);
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= uint64_t{static_cast<uint8_t>(b[6 + i])} << (8 * i);
  EXPECT_EQ(std::bit_cast<double>(bits), 0.25);
  EXPECT_EQ(static_cast<uint8_t>(b[14]), 4);
  EXPECT_EQ(b.substr(15, 4), "ACGT");
  uint64_t length = 0;
  for (int i = 0; i < 8; ++i) length |= uint64_t{static_cast<uint8_t>(b[19 + i])} << (8 * i);
  EXPECT_EQ(length, 6u);
}

TEST(CodecTest, StructuredRejections) {
  const SymbolSequence s = Generate({2, 0.5}, 2000, 3);
  const std::string good = Compress(s, {2, 0.5}).Serialize();

  std::string bad = good;
  bad[0] = 'X';
  try {
    CompressedContainer::Parse(bad);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()), "bad magic");
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
  }

  bad = good;
  bad[4] = 9;
  EXPECT_THROW(CompressedContainer::Parse(bad), Error);
  EXPECT_THROW(CompressedContainer::Parse(good.substr(0, 10)), Error);
  EXPECT_THROW(CompressedContainer::Parse(good.substr(0, 20)), Error);

  // Truncation anywhere in the payload is an error, never a partial result.
  const size_t header = 23 + 4;
  for (size_t cut = header; cut < good.size(); cut += 37) {
    EXPECT_THROW(Decompress(CompressedContainer::Parse(good.substr(0, cut))), Error)
        << "cut " << cut;
  }
  EXPECT_THROW(Decompress(CompressedContainer::Parse(good + "zz")), Error);
}

TEST(CodecTest, EncoderAndDecoderTablesInLockstep) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = static_cast<int>(rng.NextBelow(5));
    const double alpha = 0.01 + rng.NextDouble();
    const SymbolSequence s = Generate({k, alpha}, 3000, rng.NextU64());
    std::vector<std::vector<uint32_t>> enc, dec;
    const CompressedContainer c = Compress(
        s, {k, alpha}, [&](uint64_t t, std::span<const uint32_t> f) {
          EXPECT_EQ(t, enc.size());
          enc.emplace_back(f.begin(), f.end());
        });
    Decompress(c, [&](uint64_t, std::span<const uint32_t> f) {
      dec.emplace_back(f.begin(), f.end());
    });
    EXPECT_EQ(enc, dec);
    EXPECT_EQ(enc.size(), s.size());
  }
}

TEST(CodecTest, FrequenciesFollowPredictiveProbability) {
  std::vector<uint32_t> f;
  CodingFrequencies(std::vector<uint32_t>{3, 0, 0, 0}, 1.0, 4, &f);
  EXPECT_EQ(f, (std::vector<uint32_t>{37449, 9362, 9362, 9362}));
  CodingFrequencies({}, 0.5, 4, &f);
  EXPECT_EQ(f, (std::vector<uint32_t>(4, 16384)));
  CodingFrequencies(std::vector<uint32_t>{100000, 0, 0, 0}, 1e-6, 4, &f);
  EXPECT_EQ(f[1], 1u);
}

TEST(CodecTest, PayloadTracksTheoreticalBitrate) {
  Rng rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const int k = 1 + static_cast<int>(rng.NextBelow(6));
    const double alpha = 0.01 + 0.99 * rng.NextDouble();
    const SymbolSequence s = Generate({k, alpha}, 20000, rng.NextU64());
    const CompressedContainer c = Compress(s, {k, alpha});
    const double coded = 8.0 * c.payload.size() / s.size();
    const double h = Bitrate(s, {k, alpha}).bits_per_symbol;
    EXPECT_NEAR(coded, h, 0.02) << "k=" << k << " alpha=" << alpha;
    // Size bound: T H_T + (32 + 8 header) bits + T 2^-10 quantization slack.
    EXPECT_LE(8.0 * c.payload.size(),
              s.size() * h + 32 + 8.0 * c.header_bytes() + s.size() / 1024.0);
  }
}

}  // namespace
}  // namespace fcmtune
