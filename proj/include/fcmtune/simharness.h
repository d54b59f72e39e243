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
// Simulation experiments on sequences drawn from known (k, alpha) models.
//
// exp1 ("profiles") generates `replicas` sequences for every (k, alpha, T)
// cell and records the pami, Cramer's V and Cohen's kappa profiles.
//
// exp2 ("pipeline") draws `replicas` (k, alpha) pairs uniformly with
// replacement from the (k_values x alpha_values) lattice, generates one
// sequence per pair and length, and runs the two-step selection, alpha fits
// at k* and at the true k, and the grid-search baseline on each.
//
// Every sequence is seeded from (seed, length, replica), so results do not
// depend on thread count or scheduling.

#ifndef FCMTUNE_SIMHARNESS_H_
#define FCMTUNE_SIMHARNESS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcmtune/dependence.h"
#include "fcmtune/fcm.h"

namespace fcmtune {

// ---------------------------------------------------------------------------
// Statistics.

// Product-moment correlation; nullopt when a vector is constant. Throws if
// the lengths differ or are < 2.
std::optional<double> PearsonR(std::span<const double> z,
                               std::span<const double> a);
// mean(z - a). Throws if the lengths differ or are 0.
double Bias(std::span<const double> z, std::span<const double> a);

struct FiveNumber {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};
// Quartiles by linear interpolation between order statistics.
FiveNumber FiveNumberSummary(std::vector<double> values);

// ---------------------------------------------------------------------------
// Configuration.

enum class ExperimentKind { kProfiles, kPipeline };

const char *ExperimentName(ExperimentKind kind);
// "exp1" / "profiles" or "exp2" / "pipeline".
ExperimentKind ParseExperiment(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kPipeline;
  std::string alphabet = "ABCD";
  std::vector<int> k_values;
  std::vector<double> alpha_values;
  std::vector<uint64_t> lengths;
  // exp1: sequences per (k, alpha, T) cell; exp2: number of pair draws.
  int replicas = 1;
  uint64_t seed = 42;
  int max_lag = kDefaultMaxLag;
  // Generation cannot use alpha = 0; lattice points below this value are
  // generated with it instead (the recorded true alpha is unchanged).
  double generation_alpha_floor = 1e-6;
  // exp2: redraw the (k, alpha) pairs for every length instead of reusing
  // one set of draws.
  bool redraw_pairs_per_length = false;
  // exp2 grid search.
  bool grid_search = true;
  int grid_k_max = 10;
  int grid_alpha_steps = 101;
  // Worker threads; not part of the results.
  int threads = 1;

  // "desk" or "paper".
  static ExperimentConfig Preset(ExperimentKind kind, std::string_view preset);
  // Throws InvalidArgument on values outside the model's valid ranges.
  void Validate() const;
};

// ---------------------------------------------------------------------------
// exp1.

struct ProfileCell {
  uint64_t length = 0;
  int k = 0;
  double alpha = 0;
  // [measure][replica][lag - 1]
  std::array<std::vector<std::vector<double>>, 3> profiles;
  // select_k of each replica's pami profile.
  std::vector<int> k_star;
  std::vector<std::string> errors;
};

struct ProfileArchive {
  ExperimentConfig config;
  std::vector<ProfileCell> cells;
};

ProfileArchive RunProfiles(const ExperimentConfig &config);
void WriteProfileArchive(const ProfileArchive &archive,
                         const std::filesystem::path &dir);

// ---------------------------------------------------------------------------
// exp2.

struct ReplicaRecord {
  uint64_t length = 0;
  int replica = 0;
  uint64_t seed = 0;
  int k = 0;
  double alpha = 0;
  int k_star = 0;
  double alpha_star_kstar = 0;
  bool hit_bound_kstar = false;
  double alpha_star_k = 0;
  bool hit_bound_k = false;
  double bps = 0;       // generating (k, alpha)
  double bps_star = 0;  // (k*, alpha*)
  double bps_gs = 0;    // grid-search optimum
  int k_gs = 0;
  double alpha_gs = 0;
  uint64_t evaluations_two_step = 0;
  uint64_t evaluations_grid = 0;
  uint64_t floored_events = 0;  // grid optimum and generating pair
  std::vector<double> pami;
  std::string error;  // non-empty when the replica failed

  bool ok() const { return error.empty(); }
  bool k_match() const { return k == k_star; }
};

struct ConfusionMatrix {
  int k_max = 0;
  // cells[k - 1][k_star - 1]
  std::vector<std::vector<uint64_t>> cells;
  uint64_t total = 0;
  double accuracy = 0;
};

struct AlphaStats {
  std::optional<double> pearson_r_given_kstar;
  std::optional<double> pearson_r_given_k;
  double bias_given_kstar = 0;
  double bias_given_k = 0;
  double pct_gt1_given_kstar = 0;
  double pct_gt1_given_k = 0;
  double pct_gt5_given_kstar = 0;
  double pct_gt5_given_k = 0;
};

struct LengthSummary {
  uint64_t length = 0;
  uint64_t replicas_ok = 0;
  uint64_t replicas_failed = 0;
  ConfusionMatrix confusion;
  AlphaStats alpha_stats;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReplicaRecord> records;  // ordered by (length, replica)
  std::vector<LengthSummary> summaries;
};

// Runs one replica of exp2; used by RunPipeline and for replaying failures.
ReplicaRecord RunPipelineReplica(const ExperimentConfig &config,
                                 uint64_t length, int replica, int k,
                                 double alpha);
ExperimentReport RunPipeline(const ExperimentConfig &config);
// Rebuilds the per-length summaries from the records.
void Summarize(ExperimentReport *report);

std::string ReportToJson(const ExperimentReport &report);
ExperimentReport ReportFromJson(std::string_view json);
std::string ConfigToJson(const ExperimentConfig &config);
ExperimentConfig ConfigFromJson(std::string_view json,
                                const ExperimentConfig &defaults);

// Writes confusion_T<T>.csv, alpha_stats.csv, dispersion.csv,
// profiles/pami_T<T>.csv, report.json and summary.txt into `dir`.
void WriteReport(const ExperimentReport &report,
                 const std::filesystem::path &dir);
// The Table-1-style text block plus confusion matrices.
std::string RenderSummary(const ExperimentReport &report);

}  // namespace fcmtune

#endif  // FCMTUNE_SIMHARNESS_H_
