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

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "fcmtune/alpha_ml.h"
#include "fcmtune/parallel.h"
#include "fcmtune/rng.h"
#include "fcmtune/tuner.h"

namespace fcmtune {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Statistics.

std::optional<double> PearsonR(std::span<const double> z,
                               std::span<const double> a) {
  if (z.size() != a.size()) throw InvalidArgument("vector lengths differ");
  if (z.size() < 2) throw InvalidArgument("correlation needs >= 2 points");
  const double n = static_cast<double>(z.size());
  const double mz = std::accumulate(z.begin(), z.end(), 0.0) / n;
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double szz = 0, saa = 0, sza = 0;
  for (size_t i = 0; i < z.size(); ++i) {
    const double dz = z[i] - mz;
    const double da = a[i] - ma;
    szz += dz * dz;
    saa += da * da;
    sza += dz * da;
  }
  if (!(szz > 0.0) || !(saa > 0.0)) return std::nullopt;
  const double r = sza / (std::sqrt(szz) * std::sqrt(saa));
  return std::clamp(r, -1.0, 1.0);
}

double Bias(std::span<const double> z, std::span<const double> a) {
  if (z.size() != a.size()) throw InvalidArgument("vector lengths differ");
  if (z.empty()) throw InvalidArgument("bias of empty vectors");
  double s = 0.0;
  for (size_t i = 0; i < z.size(); ++i) s += z[i] - a[i];
  return s / static_cast<double>(z.size());
}

FiveNumber FiveNumberSummary(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("summary of an empty sample");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * (values.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - lo) * (values[hi] - values[lo]);
  };
  return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75),
          values.back()};
}

// ---------------------------------------------------------------------------
// Configuration.

const char *ExperimentName(ExperimentKind kind) {
  return kind == ExperimentKind::kProfiles ? "exp1" : "exp2";
}

ExperimentKind ParseExperiment(std::string_view name) {
  if (name == "exp1" || name == "profiles") return ExperimentKind::kProfiles;
  if (name == "exp2" || name == "pipeline") return ExperimentKind::kPipeline;
  throw InvalidArgument("unknown experiment '" + std::string(name) + "'");
}

namespace {

std::vector<double> AlphaLattice(int points) {
  std::vector<double> v;
  for (int i = 0; i < points; ++i) v.push_back(static_cast<double>(i) / (points - 1));
  return v;
}

std::vector<int> KRange(int lo, int hi) {
  std::vector<int> v;
  for (int k = lo; k <= hi; ++k) v.push_back(k);
  return v;
}

// Shortest representation that parses back to the same double.
std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string OptNum(const std::optional<double> &v) {
  return v ? Num(*v) : "NA";
}

std::string AlphaTag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", alpha);
  return buf;
}

double GenerationAlpha(const ExperimentConfig &config, double alpha) {
  return std::max(alpha, config.generation_alpha_floor);
}

void EnsureDir(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create directory " + dir.string() + ": " + ec.message());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::Preset(ExperimentKind kind,
                                          std::string_view preset) {
  const bool paper = preset == "paper";
  if (!paper && preset != "desk") {
    throw InvalidArgument("unknown preset '" + std::string(preset) +
                          "' (expected desk or paper)");
  }
  ExperimentConfig c;
  c.experiment = kind;
  c.k_values = KRange(1, 10);
  if (kind == ExperimentKind::kProfiles) {
    c.alpha_values = paper ? AlphaLattice(201)
                           : std::vector<double>{0.0, 0.1, 0.5, 0.8, 1.0};
    c.lengths = {paper ? 100000u : 20000u};
    c.replicas = paper ? 100 : 10;
  } else {
    c.alpha_values = AlphaLattice(201);
    c.lengths = {1000, 10000, 100000};
    c.replicas = paper ? 1000 : 200;
  }
  return c;
}

void ExperimentConfig::Validate() const {
  Alphabet abc(alphabet);
  if (k_values.empty() || alpha_values.empty() || lengths.empty()) {
    throw InvalidArgument("k_values, alpha_values and lengths must be non-empty");
  }
  for (int k : k_values) {
    if (k < 1 || k > 255) throw InvalidArgument("k values must lie in [1, 255]");
    ContextCoder(abc.size(), k);
  }
  for (double a : alpha_values) HyperParams{1, a}.Validate();
  if (!(generation_alpha_floor > 0.0)) {
    throw InvalidArgument("generation_alpha_floor must be > 0");
  }
  if (replicas < 1) throw InvalidArgument("replicas must be >= 1");
  if (max_lag < 1) throw InvalidArgument("max_lag must be >= 1");
  for (uint64_t t : lengths) {
    if (t <= static_cast<uint64_t>(max_lag)) {
      throw InvalidArgument("every length must exceed max_lag");
    }
  }
  if (grid_k_max < 1 || grid_alpha_steps < 2) {
    throw InvalidArgument("grid needs k_max >= 1 and alpha_steps >= 2");
  }
}

// ---------------------------------------------------------------------------
// exp1.

ProfileArchive RunProfiles(const ExperimentConfig &config) {
  config.Validate();
  const Alphabet abc(config.alphabet);
  ProfileArchive archive;
  archive.config = config;
  for (uint64_t t : config.lengths) {
    for (int k : config.k_values) {
      for (double a : config.alpha_values) {
        ProfileCell cell;
        cell.length = t;
        cell.k = k;
        cell.alpha = a;
        for (auto &m : cell.profiles) m.resize(config.replicas);
        cell.k_star.assign(config.replicas, 0);
        cell.errors.resize(config.replicas);
        archive.cells.push_back(std::move(cell));
      }
    }
  }
  const size_t replicas = config.replicas;
  ParallelFor(archive.cells.size() * replicas, config.threads, [&](size_t job) {
    const size_t c = job / replicas;
    const size_t rep = job % replicas;
    ProfileCell &cell = archive.cells[c];
    try {
      const uint64_t seed = DeriveSeed(DeriveSeed(config.seed, c), rep);
      const SymbolSequence seq =
          Generate({cell.k, GenerationAlpha(config, cell.alpha)}, cell.length,
                   seed, abc);
      const Measure measures[3] = {Measure::kPami, Measure::kCramersV,
                                   Measure::kCohensKappa};
      for (int m = 0; m < 3; ++m) {
        const DependenceProfile p =
            ComputeProfile(seq, measures[m], config.max_lag);
        cell.profiles[m][rep] = p.values;
        if (m == 0) cell.k_star[rep] = SelectK(p);
      }
    } catch (const std::exception &e) {
      cell.errors[rep] = e.what();
    }
  });
  return archive;
}

void WriteProfileArchive(const ProfileArchive &archive,
                         const std::filesystem::path &dir) {
  const auto &config = archive.config;
  EnsureDir(dir / "profiles");
  const Measure measures[3] = {Measure::kPami, Measure::kCramersV,
                               Measure::kCohensKappa};
  std::ostringstream summary_csv;
  summary_csv << "T,k,alpha,measure,lag,min,q1,median,q3,max\n";
  json cells = json::array();
  std::ostringstream text;
  text << "exp1: pami argmax accuracy per (T, k, alpha) cell\n";
  text << "T,k,alpha,replicas_ok,kstar_equals_k\n";
  for (const ProfileCell &cell : archive.cells) {
    std::ostringstream csv;
    csv << "replica,measure,lag,value\n";
    for (int m = 0; m < 3; ++m) {
      for (int rep = 0; rep < config.replicas; ++rep) {
        if (!cell.errors[rep].empty()) continue;
        const auto &values = cell.profiles[m][rep];
        for (size_t h = 0; h < values.size(); ++h) {
          csv << rep << ',' << MeasureName(measures[m]) << ',' << h + 1 << ','
              << Num(values[h]) << '\n';
        }
      }
      for (int h = 1; h <= config.max_lag; ++h) {
        std::vector<double> at_lag;
        for (int rep = 0; rep < config.replicas; ++rep) {
          if (cell.errors[rep].empty()) {
            at_lag.push_back(cell.profiles[m][rep][h - 1]);
          }
        }
        if (at_lag.empty()) continue;
        const FiveNumber f = FiveNumberSummary(at_lag);
        summary_csv << cell.length << ',' << cell.k << ',' << Num(cell.alpha)
                    << ',' << MeasureName(measures[m]) << ',' << h << ','
                    << Num(f.min) << ',' << Num(f.q1) << ',' << Num(f.median)
                    << ',' << Num(f.q3) << ',' << Num(f.max) << '\n';
      }
    }
    WriteFileBytes(dir / "profiles" /
                       ("T" + std::to_string(cell.length) + "_k" +
                        std::to_string(cell.k) + "_a" + AlphaTag(cell.alpha) +
                        ".csv"),
                   csv.str());
    int ok = 0, hits = 0;
    json errors = json::array();
    for (int rep = 0; rep < config.replicas; ++rep) {
      if (!cell.errors[rep].empty()) {
        errors.push_back({{"replica", rep},
                          {"seed", DeriveSeed(DeriveSeed(config.seed,
                                                         &cell - archive.cells.data()),
                                              rep)},
                          {"error", cell.errors[rep]}});
        continue;
      }
      ++ok;
      hits += cell.k_star[rep] == cell.k;
    }
    text << cell.length << ',' << cell.k << ',' << AlphaTag(cell.alpha) << ','
         << ok << ',' << hits << '\n';
    cells.push_back({{"T", cell.length},
                     {"k", cell.k},
                     {"alpha", cell.alpha},
                     {"replicas_ok", ok},
                     {"kstar_equals_k", hits},
                     {"k_star", cell.k_star},
                     {"errors", errors}});
  }
  WriteFileBytes(dir / "profiles" / "summary.csv", summary_csv.str());
  json report = {{"experiment", "exp1"},
                 {"config", json::parse(ConfigToJson(config))},
                 {"cells", cells}};
  WriteFileBytes(dir / "report.json", report.dump(2) + "\n");
  WriteFileBytes(dir / "summary.txt", text.str());
}

// ---------------------------------------------------------------------------
// exp2.

ReplicaRecord RunPipelineReplica(const ExperimentConfig &config,
                                 uint64_t length, int replica, int k,
                                 double alpha) {
  ReplicaRecord rec;
  rec.length = length;
  rec.replica = replica;
  rec.seed = DeriveSeed(DeriveSeed(config.seed, length), replica);
  rec.k = k;
  rec.alpha = alpha;
  try {
    const HyperParams truth{k, GenerationAlpha(config, alpha)};
    const SymbolSequence seq =
        Generate(truth, length, rec.seed, Alphabet(config.alphabet));
    std::optional<SearchGrid> grid;
    if (config.grid_search) {
      grid = SearchGrid::Default(config.grid_k_max, config.grid_alpha_steps);
    }
    const Comparison cmp = Compare(seq, truth, config.max_lag, grid, 1);
    rec.k_star = cmp.two_step.params.k;
    rec.alpha_star_kstar = cmp.two_step.alpha_fit->alpha_star;
    rec.hit_bound_kstar = cmp.two_step.alpha_fit->hit_bound;
    rec.pami = cmp.two_step.profile->values;
    rec.bps_star = cmp.two_step.bitrate.bits_per_symbol;
    rec.evaluations_two_step = cmp.two_step.evaluations;
    rec.bps = cmp.true_bitrate->bits_per_symbol;
    rec.floored_events = cmp.true_bitrate->floored_events;
    if (cmp.grid) {
      rec.bps_gs = cmp.grid->bitrate.bits_per_symbol;
      rec.k_gs = cmp.grid->params.k;
      rec.alpha_gs = cmp.grid->params.alpha;
      rec.evaluations_grid = cmp.grid->evaluations;
      rec.floored_events += cmp.grid->bitrate.floored_events;
    }
    const AlphaFit at_k = FitAlpha(seq, k);
    rec.alpha_star_k = at_k.alpha_star;
    rec.hit_bound_k = at_k.hit_bound;
  } catch (const std::exception &e) {
    rec.error = e.what();
    if (rec.error.empty()) rec.error = "unknown error";
  }
  return rec;
}

ExperimentReport RunPipeline(const ExperimentConfig &config) {
  config.Validate();
  ExperimentReport report;
  report.config = config;

  // (k, alpha) draws per length; shared across lengths unless redrawn.
  auto draw_pairs = [&](uint64_t stream) {
    Rng rng(DeriveSeed(config.seed, stream));
    std::vector<std::pair<int, double>> pairs;
    for (int i = 0; i < config.replicas; ++i) {
      const int k = config.k_values[rng.NextBelow(config.k_values.size())];
      const double a =
          config.alpha_values[rng.NextBelow(config.alpha_values.size())];
      pairs.emplace_back(k, a);
    }
    return pairs;
  };
  constexpr uint64_t kPairStream = 0x70616972;  // "pair"
  const auto shared = draw_pairs(kPairStream);

  for (uint64_t t : config.lengths) {
    const auto pairs =
        config.redraw_pairs_per_length ? draw_pairs(kPairStream ^ t) : shared;
    for (int i = 0; i < config.replicas; ++i) {
      ReplicaRecord rec;
      rec.length = t;
      rec.replica = i;
      rec.k = pairs[i].first;
      rec.alpha = pairs[i].second;
      report.records.push_back(rec);
    }
  }
  ParallelFor(report.records.size(), config.threads, [&](size_t i) {
    const ReplicaRecord &slot = report.records[i];
    report.records[i] = RunPipelineReplica(config, slot.length, slot.replica,
                                           slot.k, slot.alpha);
  });
  Summarize(&report);
  return report;
}

void Summarize(ExperimentReport *report) {
  const auto &config = report->config;
  int k_max = config.max_lag;
  for (int k : config.k_values) k_max = std::max(k_max, k);
  for (const auto &rec : report->records) {
    k_max = std::max({k_max, rec.k, rec.k_star});
  }
  report->summaries.clear();
  for (uint64_t t : config.lengths) {
    LengthSummary s;
    s.length = t;
    s.confusion.k_max = k_max;
    s.confusion.cells.assign(k_max, std::vector<uint64_t>(k_max, 0));
    std::vector<double> truth, given_kstar, given_k;
    uint64_t hits = 0;
    for (const auto &rec : report->records) {
      if (rec.length != t) continue;
      if (!rec.ok()) {
        ++s.replicas_failed;
        continue;
      }
      ++s.replicas_ok;
      ++s.confusion.cells[rec.k - 1][rec.k_star - 1];
      hits += rec.k_match();
      truth.push_back(rec.alpha);
      given_kstar.push_back(rec.alpha_star_kstar);
      given_k.push_back(rec.alpha_star_k);
    }
    s.confusion.total = s.replicas_ok;
    if (s.replicas_ok > 0) {
      s.confusion.accuracy = static_cast<double>(hits) / s.replicas_ok;
      AlphaStats &st = s.alpha_stats;
      if (truth.size() >= 2) {
        st.pearson_r_given_kstar = PearsonR(given_kstar, truth);
        st.pearson_r_given_k = PearsonR(given_k, truth);
      }
      st.bias_given_kstar = Bias(given_kstar, truth);
      st.bias_given_k = Bias(given_k, truth);
      auto pct = [&](const std::vector<double> &v, double threshold) {
        const auto n = std::count_if(v.begin(), v.end(),
                                     [&](double x) { return x > threshold; });
        return 100.0 * static_cast<double>(n) / static_cast<double>(v.size());
      };
      st.pct_gt1_given_kstar = pct(given_kstar, 1.0);
      st.pct_gt1_given_k = pct(given_k, 1.0);
      st.pct_gt5_given_kstar = pct(given_kstar, 5.0);
      st.pct_gt5_given_k = pct(given_k, 5.0);
    }
    report->summaries.push_back(std::move(s));
  }
}

// ---------------------------------------------------------------------------
// JSON.

namespace {

json OptJson(const std::optional<double> &v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string ConfigToJson(const ExperimentConfig &c) {
  json j = {{"experiment", ExperimentName(c.experiment)},
            {"alphabet", c.alphabet},
            {"k_values", c.k_values},
            {"alpha_values", c.alpha_values},
            {"lengths", c.lengths},
            {"replicas", c.replicas},
            {"seed", c.seed},
            {"max_lag", c.max_lag},
            {"generation_alpha_floor", c.generation_alpha_floor},
            {"redraw_pairs_per_length", c.redraw_pairs_per_length},
            {"grid_search", c.grid_search},
            {"grid_k_max", c.grid_k_max},
            {"grid_alpha_steps", c.grid_alpha_steps}};
  return j.dump(2);
}

ExperimentConfig ConfigFromJson(std::string_view text,
                                const ExperimentConfig &defaults) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kFormat, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kFormat, "config must be an object");
  static const char *kKnown[] = {
      "experiment",   "alphabet",    "k_values",
      "alpha_values", "lengths",     "replicas",
      "seed",         "max_lag",     "generation_alpha_floor",
      "redraw_pairs_per_length",     "grid_search",
      "grid_k_max",   "grid_alpha_steps", "threads"};
  for (const auto &item : j.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char *k) {
          return item.key() == k;
        }) == std::end(kKnown)) {
      throw Error(ErrorCode::kFormat, "config: unknown key '" + item.key() + "'");
    }
  }
  ExperimentConfig c = defaults;
  try {
    if (j.contains("experiment")) {
      c.experiment = ParseExperiment(j["experiment"].get<std::string>());
    }
    auto get = [&](const char *key, auto *field) {
      if (j.contains(key)) j.at(key).get_to(*field);
    };
    get("alphabet", &c.alphabet);
    get("k_values", &c.k_values);
    get("alpha_values", &c.alpha_values);
    get("lengths", &c.lengths);
    get("replicas", &c.replicas);
    get("seed", &c.seed);
    get("max_lag", &c.max_lag);
    get("generation_alpha_floor", &c.generation_alpha_floor);
    get("redraw_pairs_per_length", &c.redraw_pairs_per_length);
    get("grid_search", &c.grid_search);
    get("grid_k_max", &c.grid_k_max);
    get("grid_alpha_steps", &c.grid_alpha_steps);
    get("threads", &c.threads);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kFormat, std::string("config: ") + e.what());
  }
  return c;
}

std::string ReportToJson(const ExperimentReport &report) {
  json records = json::array();
  for (const auto &r : report.records) {
    records.push_back({{"T", r.length},
                       {"replica", r.replica},
                       {"seed", r.seed},
                       {"k", r.k},
                       {"alpha", r.alpha},
                       {"k_star", r.k_star},
                       {"alpha_star_kstar", r.alpha_star_kstar},
                       {"hit_bound_kstar", r.hit_bound_kstar},
                       {"alpha_star_k", r.alpha_star_k},
                       {"hit_bound_k", r.hit_bound_k},
                       {"bps", r.bps},
                       {"bps_star", r.bps_star},
                       {"bps_gs", r.bps_gs},
                       {"k_gs", r.k_gs},
                       {"alpha_gs", r.alpha_gs},
                       {"evaluations_two_step", r.evaluations_two_step},
                       {"evaluations_grid", r.evaluations_grid},
                       {"floored_events", r.floored_events},
                       {"pami", r.pami},
                       {"error", r.error}});
  }
  json summaries = json::array();
  for (const auto &s : report.summaries) {
    const AlphaStats &a = s.alpha_stats;
    summaries.push_back(
        {{"T", s.length},
         {"replicas_ok", s.replicas_ok},
         {"replicas_failed", s.replicas_failed},
         {"accuracy", s.confusion.accuracy},
         {"confusion", s.confusion.cells},
         {"alpha_stats",
          {{"pearson_r_given_kstar", OptJson(a.pearson_r_given_kstar)},
           {"pearson_r_given_k", OptJson(a.pearson_r_given_k)},
           {"bias_given_kstar", a.bias_given_kstar},
           {"bias_given_k", a.bias_given_k},
           {"pct_gt1_given_kstar", a.pct_gt1_given_kstar},
           {"pct_gt1_given_k", a.pct_gt1_given_k},
           {"pct_gt5_given_kstar", a.pct_gt5_given_kstar},
           {"pct_gt5_given_k", a.pct_gt5_given_k}}}});
  }
  json j = {{"experiment", "exp2"},
            {"config", json::parse(ConfigToJson(report.config))},
            {"summaries", summaries},
            {"records", records}};
  return j.dump(2) + "\n";
}

ExperimentReport ReportFromJson(std::string_view text) {
  ExperimentReport report;
  try {
    const json j = json::parse(text);
    if (j.value("experiment", "") != "exp2") {
      throw Error(ErrorCode::kFormat, "report.json is not an exp2 report");
    }
    report.config = ConfigFromJson(j.at("config").dump(), ExperimentConfig{});
    for (const auto &r : j.at("records")) {
      ReplicaRecord rec;
      r.at("T").get_to(rec.length);
      r.at("replica").get_to(rec.replica);
      r.at("seed").get_to(rec.seed);
      r.at("k").get_to(rec.k);
      r.at("alpha").get_to(rec.alpha);
      r.at("k_star").get_to(rec.k_star);
      r.at("alpha_star_kstar").get_to(rec.alpha_star_kstar);
      r.at("hit_bound_kstar").get_to(rec.hit_bound_kstar);
      r.at("alpha_star_k").get_to(rec.alpha_star_k);
      r.at("hit_bound_k").get_to(rec.hit_bound_k);
      r.at("bps").get_to(rec.bps);
      r.at("bps_star").get_to(rec.bps_star);
      r.at("bps_gs").get_to(rec.bps_gs);
      r.at("k_gs").get_to(rec.k_gs);
      r.at("alpha_gs").get_to(rec.alpha_gs);
      r.at("evaluations_two_step").get_to(rec.evaluations_two_step);
      r.at("evaluations_grid").get_to(rec.evaluations_grid);
      r.at("floored_events").get_to(rec.floored_events);
      r.at("pami").get_to(rec.pami);
      r.at("error").get_to(rec.error);
      report.records.push_back(std::move(rec));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kFormat, std::string("report: ") + e.what());
  }
  Summarize(&report);
  return report;
}

// ---------------------------------------------------------------------------
// Output files.

std::string RenderSummary(const ExperimentReport &report) {
  std::ostringstream os;
  const auto &sums = report.summaries;
  auto row = [&](const std::string &label, auto value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-24s", label.c_str());
    os << buf;
    for (const auto &s : sums) {
      std::snprintf(buf, sizeof buf, "%14s", value(s).c_str());
      os << buf;
    }
    os << '\n';
  };
  auto fixed = [](double v, int digits) {
    char buf[64];
    if (std::fabs(v) >= 1e6) {
      std::snprintf(buf, sizeof buf, "%.2e", v);
    } else {
      std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    }
    return std::string(buf);
  };
  auto opt = [&](const std::optional<double> &v) {
    return v ? fixed(*v, 2) : std::string("NA");
  };
  os << "Alpha estimation summary\n";
  row("Statistic", [](const LengthSummary &s) {
    return "T=" + std::to_string(s.length);
  });
  row("r(a*|k*, a)", [&](const LengthSummary &s) {
    return opt(s.alpha_stats.pearson_r_given_kstar);
  });
  row("r(a*|k, a)", [&](const LengthSummary &s) {
    return opt(s.alpha_stats.pearson_r_given_k);
  });
  row("Bias a*|k*", [&](const LengthSummary &s) {
    return fixed(s.alpha_stats.bias_given_kstar, 2);
  });
  row("Bias a*|k", [&](const LengthSummary &s) {
    return fixed(s.alpha_stats.bias_given_k, 2);
  });
  row("% (a*|k*) > 1", [&](const LengthSummary &s) {
    return fixed(s.alpha_stats.pct_gt1_given_kstar, 1);
  });
  row("% (a*|k) > 1", [&](const LengthSummary &s) {
    return fixed(s.alpha_stats.pct_gt1_given_k, 1);
  });
  row("% (a*|k*) > 5", [&](const LengthSummary &s) {
    return fixed(s.alpha_stats.pct_gt5_given_kstar, 1);
  });
  row("% (a*|k) > 5", [&](const LengthSummary &s) {
    return fixed(s.alpha_stats.pct_gt5_given_k, 1);
  });
  row("k* accuracy (%)", [&](const LengthSummary &s) {
    return fixed(100.0 * s.confusion.accuracy, 1);
  });
  row("replicas ok / failed", [](const LengthSummary &s) {
    return std::to_string(s.replicas_ok) + "/" +
           std::to_string(s.replicas_failed);
  });

  for (const auto &s : sums) {
    os << "\nConfusion matrix T=" << s.length
       << " (rows: true k, columns: k*)\n    ";
    for (int j = 1; j <= s.confusion.k_max; ++j) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%5d", j);
      os << buf;
    }
    os << '\n';
    for (int i = 1; i <= s.confusion.k_max; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%4d", i);
      os << buf;
      for (int j = 1; j <= s.confusion.k_max; ++j) {
        std::snprintf(buf, sizeof buf, "%5" PRIu64,
                      s.confusion.cells[i - 1][j - 1]);
        os << buf;
      }
      os << '\n';
    }
  }

  os << "\nBitrate comparison (mean |difference| in bps)\n";
  for (uint64_t t : report.config.lengths) {
    double d_star_match = 0, d_star_miss = 0, d_gs = 0;
    int n_match = 0, n_miss = 0, n = 0;
    for (const auto &r : report.records) {
      if (r.length != t || !r.ok()) continue;
      ++n;
      d_gs += std::fabs(r.bps_gs - r.bps);
      if (r.k_match()) {
        ++n_match;
        d_star_match += std::fabs(r.bps_star - r.bps);
      } else {
        ++n_miss;
        d_star_miss += std::fabs(r.bps_star - r.bps);
      }
    }
    os << "T=" << t << ": |bps*-bps| k*=k " << fixed(n_match ? d_star_match / n_match : 0, 4)
       << " (n=" << n_match << "), k*!=k "
       << fixed(n_miss ? d_star_miss / n_miss : 0, 4) << " (n=" << n_miss
       << "); |bps_gs-bps| " << fixed(n ? d_gs / n : 0, 4) << '\n';
  }
  return os.str();
}

void WriteReport(const ExperimentReport &report,
                 const std::filesystem::path &dir) {
  EnsureDir(dir / "profiles");
  for (const auto &s : report.summaries) {
    std::ostringstream csv;
    csv << "k";
    for (int j = 1; j <= s.confusion.k_max; ++j) csv << ",kstar_" << j;
    csv << '\n';
    for (int i = 1; i <= s.confusion.k_max; ++i) {
      csv << i;
      for (int j = 1; j <= s.confusion.k_max; ++j) {
        csv << ',' << s.confusion.cells[i - 1][j - 1];
      }
      csv << '\n';
    }
    WriteFileBytes(dir / ("confusion_T" + std::to_string(s.length) + ".csv"),
                   csv.str());
  }

  std::ostringstream stats;
  stats << "T,replicas,accuracy,r_given_kstar,r_given_k,bias_given_kstar,"
           "bias_given_k,pct_gt1_given_kstar,pct_gt1_given_k,"
           "pct_gt5_given_kstar,pct_gt5_given_k\n";
  for (const auto &s : report.summaries) {
    const AlphaStats &a = s.alpha_stats;
    stats << s.length << ',' << s.replicas_ok << ','
          << Num(s.confusion.accuracy) << ',' << OptNum(a.pearson_r_given_kstar)
          << ',' << OptNum(a.pearson_r_given_k) << ','
          << Num(a.bias_given_kstar) << ',' << Num(a.bias_given_k) << ','
          << Num(a.pct_gt1_given_kstar) << ',' << Num(a.pct_gt1_given_k) << ','
          << Num(a.pct_gt5_given_kstar) << ',' << Num(a.pct_gt5_given_k)
          << '\n';
  }
  WriteFileBytes(dir / "alpha_stats.csv", stats.str());

  std::ostringstream disp;
  disp << "T,replica,seed,k,alpha,k_star,k_match,alpha_star_kstar,"
          "hit_bound_kstar,alpha_star_k,hit_bound_k,bps,bps_star,bps_gs,k_gs,"
          "alpha_gs,evaluations_two_step,evaluations_grid,floored_events,"
          "error\n";
  std::map<uint64_t, std::ostringstream> pami;
  for (const auto &r : report.records) {
    disp << r.length << ',' << r.replica << ',' << r.seed << ',' << r.k << ','
         << Num(r.alpha) << ',';
    if (r.ok()) {
      disp << r.k_star << ',' << r.k_match() << ',' << Num(r.alpha_star_kstar)
           << ',' << r.hit_bound_kstar << ',' << Num(r.alpha_star_k) << ','
           << r.hit_bound_k << ',' << Num(r.bps) << ',' << Num(r.bps_star)
           << ',' << Num(r.bps_gs) << ',' << r.k_gs << ',' << Num(r.alpha_gs)
           << ',' << r.evaluations_two_step << ',' << r.evaluations_grid << ','
           << r.floored_events << ",\n";
    } else {
      std::string msg = r.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      disp << ",,,,,,,,,,,,,," << msg << '\n';
    }
    auto &p = pami[r.length];
    if (p.tellp() == 0) p << "replica,k,alpha,lag,value\n";
    for (size_t h = 0; h < r.pami.size(); ++h) {
      p << r.replica << ',' << r.k << ',' << Num(r.alpha) << ',' << h + 1 << ','
        << Num(r.pami[h]) << '\n';
    }
  }
  WriteFileBytes(dir / "dispersion.csv", disp.str());
  for (uint64_t t : report.config.lengths) {
    auto &p = pami[t];
    if (p.tellp() == 0) p << "replica,k,alpha,lag,value\n";
    WriteFileBytes(dir / "profiles" / ("pami_T" + std::to_string(t) + ".csv"),
                   p.str());
  }
  WriteFileBytes(dir / "report.json", ReportToJson(report));
  WriteFileBytes(dir / "summary.txt", RenderSummary(report));
}

}  // namespace fcmtune
