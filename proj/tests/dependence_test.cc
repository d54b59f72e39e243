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
#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fcmtune/error.h"
#include "fcmtune/fcm.h"
#include "fcmtune/rng.h"
#include "oracles.h"

namespace fcmtune {
namespace {

SymbolSequence Seq(std::string_view text) {
  return ParseSequence(text, Alphabet::Default());
}

TEST(MarginalsTest, DirectCounts) {
  EXPECT_EQ(Marginals(Seq("ABAB")), (std::vector<double>{0.5, 0.5, 0, 0}));
  EXPECT_EQ(Marginals(Seq("AAAA")), (std::vector<double>{1, 0, 0, 0}));
  EXPECT_THROW(Marginals(SymbolSequence(Alphabet::Default())), Error);
}

TEST(MarginalsTest, RandomAgainstCountingOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const SymbolSequence s = testing::RandomSequence(rng, 4, 10);
    const std::string text = RenderSequence(s);
    const auto p = Marginals(s);
    for (size_t i = 0; i < 4; ++i) {
      const auto n = std::count(text.begin(), text.end(), "ABCD"[i]);
      EXPECT_DOUBLE_EQ(p[i], n / 10.0);
    }
  }
}

TEST(LaggedJointTest, HandEnumeratedPairs) {
  const LaggedJoint lj = ComputeLaggedJoint(Seq("ABAB"), 1);
  EXPECT_DOUBLE_EQ(lj.at(1, 0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(lj.at(0, 1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(lj.at(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(ComputeLaggedJoint(Seq("AAAA"), 1).at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(ComputeLaggedJoint(Seq("AAAA"), 3).at(0, 0), 1.0);
  EXPECT_THROW(ComputeLaggedJoint(Seq("AAAA"), 4), Error);
  EXPECT_THROW(ComputeLaggedJoint(Seq("AAAA"), 0), Error);
}

TEST(LaggedJointTest, SumsAndShiftedMarginals) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t length = 2 + rng.NextBelow(100);
    const SymbolSequence s = testing::RandomSequence(rng, 4, length);
    const int h = 1 + static_cast<int>(rng.NextBelow(length - 1));
    const LaggedJoint lj = ComputeLaggedJoint(s, h);
    double total = 0.0;
    for (double v : lj.joint) {
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    const double n = static_cast<double>(length - h);
    for (size_t i = 0; i < 4; ++i) {
      double row = 0.0, col = 0.0;
      for (size_t j = 0; j < 4; ++j) {
        row += lj.at(i, j);
        col += lj.at(j, i);
      }
      double late = 0.0, early = 0.0;
      for (size_t t = h; t < length; ++t) late += s[t] == i;
      for (size_t t = 0; t + h < length; ++t) early += s[t] == i;
      EXPECT_NEAR(row, late / n, 1e-12);
      EXPECT_NEAR(col, early / n, 1e-12);
    }
  }
}

TEST(CramersVTest, AlternatingPatternApproachesOne) {
  std::string text;
  for (int i = 0; i < 5000; ++i) text += "AB";
  const MeasureValue v = CramersV(Seq(text), 1);
  EXPECT_FALSE(v.degenerate);
  EXPECT_NEAR(v.value, 1.0, 1e-3);
}

TEST(CramersVTest, ConstantSequenceIsDegenerate) {
  const MeasureValue v = CramersV(Seq("AAAAAA"), 2);
  EXPECT_TRUE(v.degenerate);
  EXPECT_EQ(v.value, 0.0);
}

TEST(CramersVTest, FixedStringMatchesOracle) {
  const SymbolSequence s = Seq("ABCADBBCAADC");
  for (int h = 1; h <= 5; ++h) {
    EXPECT_NEAR(CramersV(s, h).value, testing::NaiveCramersV(s, h), 1e-12);
  }
}

TEST(CramersVTest, IidSmall) {
  const SymbolSequence s = Generate({0, 1e9}, 100000, 3);
  for (int h = 1; h <= 5; ++h) EXPECT_LT(CramersV(s, h).value, 0.02);
}

TEST(CohensKappaTest, AlternatingIsMinusOne) {
  EXPECT_DOUBLE_EQ(CohensKappa(Seq("ABABAB"), 1).value, -1.0);
}

TEST(CohensKappaTest, BlocksArePositive) {
  const SymbolSequence s = Seq("AAAABBBBCCCCDDDD");
  const MeasureValue v = CohensKappa(s, 1);
  EXPECT_GT(v.value, 0.0);
  EXPECT_NEAR(v.value, testing::NaiveCohensKappa(s, 1), 1e-12);
}

TEST(CohensKappaTest, ConstantSequenceIsDegenerate) {
  const MeasureValue v = CohensKappa(Seq("BBBB"), 1);
  EXPECT_TRUE(v.degenerate);
  EXPECT_TRUE(std::isnan(v.value));
}

TEST(CohensKappaTest, IidNearZero) {
  const SymbolSequence s = Generate({0, 1e9}, 100000, 4);
  for (int h = 1; h <= 5; ++h) EXPECT_NEAR(CohensKappa(s, h).value, 0.0, 0.01);
}

TEST(AssociationTest, RandomInputsMatchNaiveRecomputation) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t r = 2 + rng.NextBelow(5);
    const size_t length = 2 + rng.NextBelow(200);
    const SymbolSequence s = testing::RandomSequence(rng, r, length);
    const int h = 1 + static_cast<int>(rng.NextBelow(std::min<size_t>(length - 1, 12)));
    const MeasureValue v = CramersV(s, h);
    if (!v.degenerate) {
      EXPECT_NEAR(v.value, testing::NaiveCramersV(s, h), 1e-12);
    }
    const MeasureValue kappa = CohensKappa(s, h);
    if (!kappa.degenerate) {
      EXPECT_NEAR(kappa.value, testing::NaiveCohensKappa(s, h), 1e-12);
    }
  }
}

TEST(PamiTest, FixedStringMatchesEnumeration) {
  const SymbolSequence s = Seq("ABCABDACBA");
  for (int h = 1; h <= 4; ++h) {
    EXPECT_NEAR(Pami(s, h), testing::BruteForceCmi(s, h), 1e-12) << "h=" << h;
  }
}

TEST(PamiTest, RandomShortSequencesMatchEnumeration) {
  Rng rng(6);
  for (int trial = 0; trial < 3000; ++trial) {
    const size_t r = 2 + rng.NextBelow(3);
    const size_t length = 2 + rng.NextBelow(49);
    const SymbolSequence s = testing::RandomSequence(rng, r, length);
    for (int h = 1; h <= 4 && static_cast<size_t>(h) < length; ++h) {
      const double v = Pami(s, h);
      EXPECT_GE(v, 0.0);
      EXPECT_NEAR(v, testing::BruteForceCmi(s, h), 1e-12);
    }
  }
}

// Plug-in CMI of independent symbols stays near its first-order bias
// (r-1)^2 r^(h-1) / 2N.
TEST(PamiTest, IndependentSymbolsNearZero) {
  const SymbolSequence s = Generate({0, 1e9}, 100000, 8);
  for (int h = 1; h <= 6; ++h) {
    const double bias = 9.0 * std::pow(4.0, h - 1) / (2.0 * (s.size() - h));
    EXPECT_LT(Pami(s, h), 1.5 * bias + 0.003) << "h=" << h;
  }
}

TEST(PamiTest, RejectsBadLag) {
  EXPECT_THROW(Pami(Seq("ABC"), 3), Error);
  EXPECT_THROW(Pami(Seq("ABC"), 0), Error);
}

TEST(PamiTest, ArgmaxInvariantToLogBase) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const SymbolSequence s =
        Generate({1 + static_cast<int>(rng.NextBelow(5)), 0.2 + rng.NextDouble()},
                 3000, rng.NextU64());
    DependenceProfile p = ComputeProfile(s, Measure::kPami, 8);
    const int k = SelectK(p);
    for (auto &v : p.values) v /= std::log(2.0);
    EXPECT_EQ(SelectK(p), k);
  }
}

TEST(ProfileTest, LengthAndPerLagValues) {
  const SymbolSequence s = Generate({2, 0.5}, 2000, 10);
  for (Measure m : {Measure::kPami, Measure::kCramersV, Measure::kCohensKappa}) {
    const DependenceProfile p = ComputeProfile(s, m, 7);
    ASSERT_EQ(p.max_lag(), 7);
    ASSERT_EQ(p.degenerate.size(), 7u);
    for (int h = 1; h <= 7; ++h) {
      const double direct = m == Measure::kPami       ? Pami(s, h)
                            : m == Measure::kCramersV ? CramersV(s, h).value
                                                      : CohensKappa(s, h).value;
      EXPECT_EQ(p.values[h - 1], direct);
    }
  }
  EXPECT_THROW(ComputeProfile(Seq("ABCD"), Measure::kPami, 4), Error);
}

TEST(ProfileTest, KappaOfIidNearZero) {
  const SymbolSequence s = Generate({0, 1e9}, 50000, 12);
  for (double v : ComputeProfile(s, Measure::kCohensKappa, 10).values) {
    EXPECT_NEAR(v, 0.0, 0.02);
  }
}

// The generating order is the most frequent peak over replicas.
void ExpectPeakAt(int k, double alpha) {
  std::map<int, int> peaks;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const SymbolSequence s = Generate({k, alpha}, 100000, DeriveSeed(100, seed));
    ++peaks[SelectK(ComputeProfile(s, Measure::kPami, 10))];
  }
  for (const auto &[lag, count] : peaks) {
    if (lag != k) EXPECT_LT(count, peaks[k]) << "k=" << k << " alpha=" << alpha;
  }
}

TEST(ProfileTest, PamiPeaksAtGeneratingOrder) {
  ExpectPeakAt(3, 0.96);
  ExpectPeakAt(8, 0.22);
}

TEST(SelectKTest, ArgmaxAndTieBreak) {
  DependenceProfile p;
  p.values = {0.1, 0.4, 0.2};
  EXPECT_EQ(SelectK(p), 2);
  p.values = {0.4, 0.4, 0.2};
  EXPECT_EQ(SelectK(p), 1);
  p.values = {std::numeric_limits<double>::quiet_NaN(), 0.3};
  EXPECT_EQ(SelectK(p), 2);
  p.values = {std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(SelectK(p), Error);
  p.values = {};
  EXPECT_THROW(SelectK(p), Error);
}

TEST(MeasureNameTest, ParseRoundTrip) {
  for (Measure m : {Measure::kPami, Measure::kCramersV, Measure::kCohensKappa}) {
    EXPECT_EQ(ParseMeasure(MeasureName(m)), m);
  }
  EXPECT_EQ(ParseMeasure("cramers"), Measure::kCramersV);
  EXPECT_EQ(ParseMeasure("kappa"), Measure::kCohensKappa);
  EXPECT_THROW(ParseMeasure("spearman"), Error);
}

}  // namespace
}  // namespace fcmtune
