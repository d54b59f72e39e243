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

#include "fcmtune/simharness.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fcmtune/error.h"

namespace fcmtune {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("fcmtune_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> Lines(const fs::path &path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

ExperimentConfig SmallPipeline() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kPipeline;
  c.k_values = {1, 2, 3};
  c.alpha_values = {0.0, 0.25, 0.5, 1.0};
  c.lengths = {300, 2000};
  c.replicas = 12;
  c.max_lag = 5;
  c.grid_k_max = 4;
  c.grid_alpha_steps = 11;
  return c;
}

TEST(StatsTest, PearsonKnownValues) {
  const std::vector<double> a = {0.1, 0.5, 0.2, 0.9};
  std::vector<double> neg(a.size());
  for (size_t i = 0; i < a.size(); ++i) neg[i] = -a[i];
  EXPECT_NEAR(*PearsonR(a, a), 1.0, 1e-15);
  EXPECT_NEAR(*PearsonR(neg, a), -1.0, 1e-15);
  // Two-pass oracle for z = (1,2,4), a = (0,1,3): means 7/3 and 4/3.
  const std::vector<double> z = {1, 2, 4}, b = {0, 1, 3};
  double szz = 0, sbb = 0, szb = 0;
  for (int i = 0; i < 3; ++i) {
    szz += (z[i] - 7.0 / 3) * (z[i] - 7.0 / 3);
    sbb += (b[i] - 4.0 / 3) * (b[i] - 4.0 / 3);
    szb += (z[i] - 7.0 / 3) * (b[i] - 4.0 / 3);
  }
  EXPECT_NEAR(*PearsonR(z, b), szb / std::sqrt(szz * sbb), 1e-15);
  EXPECT_FALSE(PearsonR(std::vector<double>{1, 1, 1}, b).has_value());
  EXPECT_THROW(PearsonR(std::vector<double>{1}, std::vector<double>{1}), Error);
  EXPECT_THROW(PearsonR(z, a), Error);
}

TEST(StatsTest, Bias) {
  const std::vector<double> a = {0.1, 0.5, 0.2};
  std::vector<double> shifted = a;
  for (auto &v : shifted) v += 0.5;
  EXPECT_EQ(Bias(a, a), 0.0);
  EXPECT_NEAR(Bias(shifted, a), 0.5, 1e-15);
  EXPECT_THROW(Bias(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST(StatsTest, FiveNumberSummary) {
  const FiveNumber f = FiveNumberSummary({5, 1, 4, 2, 3});
  EXPECT_EQ(f.min, 1);
  EXPECT_EQ(f.q1, 2);
  EXPECT_EQ(f.median, 3);
  EXPECT_EQ(f.q3, 4);
  EXPECT_EQ(f.max, 5);
  EXPECT_DOUBLE_EQ(FiveNumberSummary({1, 2, 3, 4}).median, 2.5);
  EXPECT_THROW(FiveNumberSummary({}), Error);
}

TEST(ConfigTest, Presets) {
  const auto e1 = ExperimentConfig::Preset(ExperimentKind::kProfiles, "desk");
  EXPECT_EQ(e1.replicas, 10);
  EXPECT_EQ(e1.lengths, std::vector<uint64_t>{20000});
  EXPECT_EQ(e1.alpha_values, (std::vector<double>{0, 0.1, 0.5, 0.8, 1}));
  const auto p1 = ExperimentConfig::Preset(ExperimentKind::kProfiles, "paper");
  EXPECT_EQ(p1.k_values.size() * p1.alpha_values.size(), 2010u);
  EXPECT_EQ(p1.replicas, 100);
  const auto e2 = ExperimentConfig::Preset(ExperimentKind::kPipeline, "desk");
  EXPECT_EQ(e2.replicas, 200);
  EXPECT_EQ(e2.lengths, (std::vector<uint64_t>{1000, 10000, 100000}));
  EXPECT_EQ(e2.k_values.size() * e2.alpha_values.size(), 2010u);
  EXPECT_EQ(ExperimentConfig::Preset(ExperimentKind::kPipeline, "paper").replicas, 1000);
  EXPECT_THROW(ExperimentConfig::Preset(ExperimentKind::kPipeline, "huge"), Error);
  e2.Validate();
}

TEST(ConfigTest, ValidationRejectsBadValues) {
  ExperimentConfig c = SmallPipeline();
  c.replicas = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = SmallPipeline();
  c.alpha_values.push_back(-1);
  EXPECT_THROW(c.Validate(), Error);
  c = SmallPipeline();
  c.lengths = {5};
  EXPECT_THROW(c.Validate(), Error);
  c = SmallPipeline();
  c.k_values = {0};
  EXPECT_THROW(c.Validate(), Error);
}

TEST(ConfigTest, JsonRoundTripAndUnknownKeys) {
  const ExperimentConfig c = SmallPipeline();
  const ExperimentConfig back = ConfigFromJson(ConfigToJson(c), ExperimentConfig{});
  EXPECT_EQ(back.k_values, c.k_values);
  EXPECT_EQ(back.alpha_values, c.alpha_values);
  EXPECT_EQ(back.lengths, c.lengths);
  EXPECT_EQ(back.replicas, c.replicas);
  EXPECT_EQ(back.seed, c.seed);
  const ExperimentConfig partial = ConfigFromJson(R"({"replicas": 3})", c);
  EXPECT_EQ(partial.replicas, 3);
  EXPECT_EQ(partial.lengths, c.lengths);
  EXPECT_THROW(ConfigFromJson(R"({"replica": 3})", c), Error);
  EXPECT_THROW(ConfigFromJson("not json", c), Error);
}

TEST(PipelineTest, MassConservationAndPercentages) {
  const ExperimentReport report = RunPipeline(SmallPipeline());
  ASSERT_EQ(report.records.size(), 24u);
  ASSERT_EQ(report.summaries.size(), 2u);
  for (const LengthSummary &s : report.summaries) {
    uint64_t mass = 0, trace = 0;
    for (int i = 0; i < s.confusion.k_max; ++i) {
      for (int j = 0; j < s.confusion.k_max; ++j) mass += s.confusion.cells[i][j];
      trace += s.confusion.cells[i][i];
    }
    EXPECT_EQ(mass, s.replicas_ok);
    EXPECT_EQ(s.replicas_ok + s.replicas_failed, 12u);
    EXPECT_DOUBLE_EQ(s.confusion.accuracy, static_cast<double>(trace) / mass);
    const AlphaStats &a = s.alpha_stats;
    EXPECT_LE(a.pct_gt5_given_k, a.pct_gt1_given_k);
    EXPECT_LE(a.pct_gt5_given_kstar, a.pct_gt1_given_kstar);
    for (double p : {a.pct_gt1_given_k, a.pct_gt5_given_kstar}) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 100.0);
    }
  }
  for (const ReplicaRecord &r : report.records) {
    EXPECT_TRUE(r.ok()) << r.error;
    EXPECT_EQ(r.evaluations_two_step, 1u);
    EXPECT_EQ(r.evaluations_grid, 44u);
    EXPECT_EQ(r.pami.size(), 5u);
  }
}

TEST(PipelineTest, PairsReusedAcrossLengthsUnlessRedrawn) {
  ExperimentConfig c = SmallPipeline();
  const ExperimentReport shared = RunPipeline(c);
  for (int i = 0; i < c.replicas; ++i) {
    EXPECT_EQ(shared.records[i].k, shared.records[c.replicas + i].k);
    EXPECT_EQ(shared.records[i].alpha, shared.records[c.replicas + i].alpha);
  }
  c.redraw_pairs_per_length = true;
  const ExperimentReport redrawn = RunPipeline(c);
  bool differs = false;
  for (int i = 0; i < c.replicas; ++i) {
    differs |= redrawn.records[i].k != redrawn.records[c.replicas + i].k ||
               redrawn.records[i].alpha != redrawn.records[c.replicas + i].alpha;
  }
  EXPECT_TRUE(differs);
}

TEST(PipelineTest, IndependentOfThreadCount) {
  ExperimentConfig c = SmallPipeline();
  c.threads = 1;
  const std::string one = ReportToJson(RunPipeline(c));
  c.threads = 4;
  EXPECT_EQ(ReportToJson(RunPipeline(c)), one);
}

TEST(PipelineTest, ReplicaReplay) {
  const ExperimentConfig c = SmallPipeline();
  const ExperimentReport report = RunPipeline(c);
  const ReplicaRecord &r = report.records[15];
  const ReplicaRecord again = RunPipelineReplica(c, r.length, r.replica, r.k, r.alpha);
  EXPECT_EQ(again.seed, r.seed);
  EXPECT_EQ(again.k_star, r.k_star);
  EXPECT_EQ(again.bps_gs, r.bps_gs);
}

TEST(PipelineTest, FailuresAreRecordedNotThrown) {
  // A length shorter than max_lag makes the profile step fail.
  const ReplicaRecord r = RunPipelineReplica(SmallPipeline(), 3, 0, 1, 0.5);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.error.empty());
  EXPECT_NE(r.seed, 0u);
}

TEST(ReportTest, JsonReingestsWithoutRecomputation) {
  const ExperimentReport report = RunPipeline(SmallPipeline());
  const std::string json = ReportToJson(report);
  const ExperimentReport back = ReportFromJson(json);
  EXPECT_EQ(ReportToJson(back), json);
  EXPECT_EQ(RenderSummary(back), RenderSummary(report));
}

TEST(ReportTest, FilesAndSchemas) {
  const ExperimentReport report = RunPipeline(SmallPipeline());
  const fs::path dir = TempDir("report");
  WriteReport(report, dir);
  for (const char *name : {"confusion_T300.csv", "confusion_T2000.csv", "alpha_stats.csv",
                           "dispersion.csv", "report.json", "summary.txt",
                           "profiles/pami_T300.csv", "profiles/pami_T2000.csv"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  const auto confusion = Lines(dir / "confusion_T300.csv");
  const int k_max = report.summaries[0].confusion.k_max;
  EXPECT_EQ(k_max, 5);
  ASSERT_EQ(confusion.size(), static_cast<size_t>(k_max + 1));
  EXPECT_EQ(confusion[0], "k,kstar_1,kstar_2,kstar_3,kstar_4,kstar_5");
  EXPECT_EQ(Lines(dir / "dispersion.csv").size(), 25u);
  EXPECT_EQ(Lines(dir / "alpha_stats.csv").size(), 3u);
  const std::string summary = RenderSummary(report);
  for (const char *row : {"r(a*|k*, a)", "r(a*|k, a)", "Bias a*|k*", "Bias a*|k",
                          "% (a*|k*) > 1", "% (a*|k) > 1", "% (a*|k*) > 5", "% (a*|k) > 5"}) {
    EXPECT_NE(summary.find(row), std::string::npos) << row;
  }
  fs::remove_all(dir);
}

TEST(ReportTest, WriteFailureNamesPath) {
  const ExperimentReport report = RunPipeline(SmallPipeline());
  try {
    WriteReport(report, "/proc/fcmtune_cannot_write_here");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/proc/fcmtune_cannot_write_here"), std::string::npos);
  }
}

TEST(ProfilesTest, SmallRunArchive) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kProfiles;
  c.k_values = {1, 3};
  c.alpha_values = {0.0, 0.5};
  c.lengths = {3000};
  c.replicas = 3;
  c.max_lag = 6;
  const ProfileArchive archive = RunProfiles(c);
  ASSERT_EQ(archive.cells.size(), 4u);
  for (const ProfileCell &cell : archive.cells) {
    for (const auto &measure : cell.profiles) {
      ASSERT_EQ(measure.size(), 3u);
      for (const auto &profile : measure) EXPECT_EQ(profile.size(), 6u);
    }
    for (const auto &e : cell.errors) EXPECT_TRUE(e.empty()) << e;
  }
  const fs::path dir = TempDir("profiles");
  WriteProfileArchive(archive, dir);
  EXPECT_TRUE(fs::exists(dir / "profiles" / "T3000_k3_a0.500.csv"));
  EXPECT_TRUE(fs::exists(dir / "profiles" / "T3000_k1_a0.000.csv"));
  const auto summary = Lines(dir / "profiles" / "summary.csv");
  EXPECT_EQ(summary.size(), 1u + 4 * 3 * 6);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "summary.txt"));

  c.threads = 3;
  const fs::path dir2 = TempDir("profiles2");
  WriteProfileArchive(RunProfiles(c), dir2);
  EXPECT_EQ(Lines(dir / "profiles" / "summary.csv"), Lines(dir2 / "profiles" / "summary.csv"));
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

}  // namespace
}  // namespace fcmtune
