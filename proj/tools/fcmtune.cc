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
// fcmtune: command-line front end. Data goes to stdout, diagnostics to
// stderr. Failures print {"error": {"code": ..., "message": ...}} on stderr
// and exit nonzero (1 for domain errors, 2 for usage errors).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fcmtune/alpha_ml.h"
#include "fcmtune/codec.h"
#include "fcmtune/dependence.h"
#include "fcmtune/fcm.h"
#include "fcmtune/parallel.h"
#include "fcmtune/simharness.h"
#include "fcmtune/tuner.h"

namespace {

using nlohmann::json;
using namespace fcmtune;

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct Globals {
  std::string alphabet = "default";
  int threads = DefaultThreads();
  bool json = false;
  uint64_t seed = 42;
  CLI::Option *alphabet_opt = nullptr;
  CLI::Option *seed_opt = nullptr;
};

void PrintError(const std::string &code, const std::string &message) {
  json j = {{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
}

// Shortest text that parses back to the same double.
std::string Num(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// --alphabet infer builds the alphabet from the file in order of first
// appearance.
SymbolSequence LoadInput(const Globals &g, const std::string &path) {
  std::optional<Alphabet> abc;
  if (g.alphabet != "infer") abc = Alphabet::FromFlag(g.alphabet);
  return ReadSequenceFile(path, abc);
}

json ToJson(const BitrateResult &b) {
  return {{"bps", b.bits_per_symbol},
          {"total_bits", b.total_bits},
          {"symbols_coded", b.symbols_coded},
          {"floored_events", b.floored_events}};
}

json ToJson(const AlphaFit &f) {
  return {{"alpha_star", f.alpha_star},
          {"log_likelihood", f.log_likelihood},
          {"converged", f.converged},
          {"hit_bound", f.hit_bound},
          {"degenerate", f.degenerate},
          {"iterations", f.iterations}};
}

json ToJson(const DependenceProfile &p) {
  json degenerate = json::array();
  for (bool d : p.degenerate) degenerate.push_back(d);
  json values = json::array();
  for (double v : p.values) {
    values.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  }
  return {{"measure", MeasureName(p.measure)},
          {"values", values},
          {"degenerate", degenerate}};
}

json ToJson(const SelectionResult &r) {
  json j = {{"method", SelectionMethodName(r.method)},
            {"k", r.params.k},
            {"alpha", r.params.alpha},
            {"bps", r.bitrate.bits_per_symbol},
            {"bitrate", ToJson(r.bitrate)},
            {"evaluations", r.evaluations}};
  if (r.profile) j["profile"] = ToJson(*r.profile);
  if (r.alpha_fit) j["alpha_fit"] = ToJson(*r.alpha_fit);
  return j;
}

void AddInput(CLI::App *cmd, std::string *path) {
  cmd->add_option("-i,--input", *path, "Sequence file")->required();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Finite-context model hyperparameter selection toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.alphabet_opt = app.add_option(
      "--alphabet", g.alphabet,
      "Symbol alphabet: 'default' (ABCD), 'dna' (ACGT), 'infer' or literal symbols")
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "Machine-readable JSON output");
  g.seed_opt = app.add_option("--seed", g.seed, "Random seed");

  std::string input, output;
  int k = 0;
  double alpha = 1.0;
  uint64_t length = 0;
  int hmax = kDefaultMaxLag;

  // generate
  auto *generate = app.add_subcommand("generate", "Draw a sequence from an adaptive FCM");
  generate->add_option("--k", k, "Context order")->required();
  generate->add_option("--alpha", alpha, "Smoothing parameter (> 0)")->required();
  generate->add_option("--length", length, "Sequence length")->required();
  generate->add_option("-o,--output", output, "Output file (stdout if omitted)");
  generate->callback([&] {
    const Alphabet abc =
        Alphabet::FromFlag(g.alphabet == "infer" ? "default" : g.alphabet);
    const SymbolSequence seq = Generate({k, alpha}, length, g.seed, abc);
    if (output.empty()) {
      std::cout << RenderSequence(seq) << '\n';
      return;
    }
    WriteSequenceFile(output, seq);
    if (g.json) {
      std::cout << json{{"output", output},
                        {"length", seq.size()},
                        {"k", k},
                        {"alpha", alpha},
                        {"seed", g.seed},
                        {"alphabet", abc.symbols()}}
                       .dump()
                << '\n';
    }
  });

  // profile
  std::string measure_name = "pami";
  auto *profile = app.add_subcommand("profile", "Serial dependence profile over lags 1..hmax");
  AddInput(profile, &input);
  profile->add_option("--measure", measure_name, "pami, cramers or kappa");
  profile->add_option("--hmax", hmax, "Largest lag")->check(CLI::PositiveNumber);
  profile->callback([&] {
    const SymbolSequence seq = LoadInput(g, input);
    const DependenceProfile p =
        ComputeProfile(seq, ParseMeasure(measure_name), hmax);
    if (g.json) {
      std::cout << ToJson(p).dump() << '\n';
      return;
    }
    std::cout << "lag,value\n";
    for (int h = 1; h <= p.max_lag(); ++h) {
      std::cout << h << ',' << Num(p.values[h - 1]) << '\n';
    }
  });

  // select-k
  auto *select_k = app.add_subcommand("select-k", "Lag of the maximum of the dependence profile");
  AddInput(select_k, &input);
  select_k->add_option("--measure", measure_name, "pami, cramers or kappa");
  select_k->add_option("--hmax", hmax, "Largest lag")->check(CLI::PositiveNumber);
  select_k->callback([&] {
    const SymbolSequence seq = LoadInput(g, input);
    const DependenceProfile p =
        ComputeProfile(seq, ParseMeasure(measure_name), hmax);
    std::cout << json{{"k_star", SelectK(p)}, {"profile", ToJson(p)}}.dump()
              << '\n';
  });

  // fit-alpha
  auto *fit_alpha = app.add_subcommand("fit-alpha", "Maximum marginal-likelihood alpha for order k");
  AddInput(fit_alpha, &input);
  fit_alpha->add_option("--k", k, "Context order")->required();
  fit_alpha->callback([&] {
    const SymbolSequence seq = LoadInput(g, input);
    std::cout << ToJson(FitAlpha(seq, k)).dump() << '\n';
  });

  // tune
  auto *tune = app.add_subcommand("tune", "Two-step selection of (k, alpha)");
  AddInput(tune, &input);
  tune->add_option("--hmax", hmax, "Largest lag")->check(CLI::PositiveNumber);
  tune->callback([&] {
    const SymbolSequence seq = LoadInput(g, input);
    std::cout << ToJson(TwoStepSelect(seq, hmax)).dump() << '\n';
  });

  // gridsearch
  int kmax = 10, alpha_steps = 101;
  auto *gridsearch = app.add_subcommand("gridsearch", "Exhaustive (k, alpha) search by bitrate");
  AddInput(gridsearch, &input);
  gridsearch->add_option("--kmax", kmax, "Largest k")->check(CLI::PositiveNumber);
  gridsearch->add_option("--alpha-steps", alpha_steps, "Alpha values in [0, 1]")
      ->check(CLI::Range(2, 1 << 20));
  gridsearch->callback([&] {
    const SymbolSequence seq = LoadInput(g, input);
    const SelectionResult r =
        GridSearch(seq, SearchGrid::Default(kmax, alpha_steps), g.threads);
    std::cout << ToJson(r).dump() << '\n';
  });

  // bitrate
  auto *bitrate = app.add_subcommand("bitrate", "Theoretical adaptive bitrate");
  AddInput(bitrate, &input);
  bitrate->add_option("--k", k, "Context order")->required();
  bitrate->add_option("--alpha", alpha, "Smoothing parameter (>= 0)")->required();
  bitrate->callback([&] {
    const SymbolSequence seq = LoadInput(g, input);
    const BitrateResult b = Bitrate(seq, {k, alpha});
    if (g.json) {
      std::cout << json{{"bps", b.bits_per_symbol},
                        {"total_bits", b.total_bits},
                        {"floored_events", b.floored_events}}
                       .dump()
                << '\n';
    } else {
      std::cout << Num(b.bits_per_symbol) << '\n';
    }
  });

  // compress
  auto *compress = app.add_subcommand("compress", "Range-code a sequence");
  AddInput(compress, &input);
  compress->add_option("-o,--output", output, "Container file")->required();
  compress->add_option("--k", k, "Context order")->required();
  compress->add_option("--alpha", alpha, "Smoothing parameter (> 0)")->required();
  compress->callback([&] {
    const SymbolSequence seq = LoadInput(g, input);
    const CompressedContainer c = Compress(seq, {k, alpha});
    WriteFileBytes(output, c.Serialize());
    if (g.json) {
      const double bps =
          seq.empty() ? 0.0 : 8.0 * c.payload.size() / static_cast<double>(seq.size());
      std::cout << json{{"length", c.length},
                        {"header_bytes", c.header_bytes()},
                        {"payload_bytes", c.payload.size()},
                        {"payload_bps", bps}}
                       .dump()
                << '\n';
    }
  });

  // decompress
  auto *decompress = app.add_subcommand("decompress", "Decode a container");
  decompress->add_option("-i,--input", input, "Container file")->required();
  decompress->add_option("-o,--output", output, "Sequence file")->required();
  decompress->callback([&] {
    const SymbolSequence seq =
        Decompress(CompressedContainer::Parse(ReadFileBytes(input)));
    WriteSequenceFile(output, seq);
    if (g.json) {
      std::cout << json{{"length", seq.size()}, {"output", output}}.dump()
                << '\n';
    }
  });

  // compare
  std::optional<int> true_k;
  std::optional<double> true_alpha;
  bool no_grid = false, no_header = false;
  auto *compare = app.add_subcommand("compare", "Two-step vs grid search vs the generating pair");
  AddInput(compare, &input);
  auto *tk = compare->add_option("--true-k", true_k, "Generating order");
  auto *ta = compare->add_option("--true-alpha", true_alpha, "Generating alpha");
  tk->needs(ta);
  ta->needs(tk);
  compare->add_option("--hmax", hmax, "Largest lag")->check(CLI::PositiveNumber);
  compare->add_flag("--no-grid", no_grid, "Skip the grid search");
  compare->add_flag("--no-header", no_header, "Omit the CSV header");
  compare->callback([&] {
    const SymbolSequence seq = LoadInput(g, input);
    std::optional<HyperParams> truth;
    if (true_k) truth = HyperParams{*true_k, *true_alpha};
    std::optional<SearchGrid> grid;
    if (!no_grid) grid = SearchGrid::Default();
    const Comparison c = Compare(seq, truth, hmax, grid, g.threads);
    if (g.json) {
      json j = {{"two_step", ToJson(c.two_step)}, {"k_match", c.k_match}};
      if (truth) {
        j["truth"] = {{"k", truth->k}, {"alpha", truth->alpha}};
        j["bps"] = c.true_bitrate->bits_per_symbol;
      }
      if (c.grid) j["grid_search"] = ToJson(*c.grid);
      std::cout << j.dump() << '\n';
      return;
    }
    if (!no_header) {
      std::cout << "k,alpha,k_star,alpha_star,k_match,bps,bps_star,bps_gs,"
                   "k_gs,alpha_gs,evaluations_two_step,evaluations_grid,"
                   "floored_events\n";
    }
    uint64_t floored = c.two_step.bitrate.floored_events;
    if (truth) {
      std::cout << truth->k << ',' << Num(truth->alpha) << ',';
      floored += c.true_bitrate->floored_events;
    } else {
      std::cout << ",,";
    }
    std::cout << c.two_step.params.k << ',' << Num(c.two_step.params.alpha)
              << ',' << (truth ? (c.k_match ? "1" : "0") : "") << ','
              << (truth ? Num(c.true_bitrate->bits_per_symbol) : "") << ','
              << Num(c.two_step.bitrate.bits_per_symbol) << ',';
    if (c.grid) {
      floored += c.grid->bitrate.floored_events;
      std::cout << Num(c.grid->bitrate.bits_per_symbol) << ','
                << c.grid->params.k << ',' << Num(c.grid->params.alpha) << ','
                << c.two_step.evaluations << ',' << c.grid->evaluations;
    } else {
      std::cout << ",,," << c.two_step.evaluations << ",0";
    }
    std::cout << ',' << floored << '\n';
  });

  // simulate
  std::string experiment = "exp2", preset = "desk", config_path;
  auto *simulate = app.add_subcommand("simulate", "Run a simulation experiment");
  simulate->add_option("--experiment", experiment, "exp1 or exp2")
      ->check(CLI::IsMember({"exp1", "exp2"}));
  simulate->add_option("--preset", preset, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  simulate->add_option("--config", config_path,
                       "JSON file overriding preset fields");
  simulate->add_option("-o,--output", output, "Output directory")->required();
  simulate->callback([&] {
    const ExperimentKind kind = ParseExperiment(experiment);
    ExperimentConfig config = ExperimentConfig::Preset(kind, preset);
    if (!config_path.empty()) {
      config = ConfigFromJson(ReadFileBytes(config_path), config);
      if (config.experiment != kind) {
        throw InvalidArgument("config file experiment does not match --experiment");
      }
    }
    if (*g.alphabet_opt) {
      if (g.alphabet == "infer") {
        throw InvalidArgument("simulate needs an explicit alphabet");
      }
      config.alphabet = Alphabet::FromFlag(g.alphabet).symbols();
    }
    if (*g.seed_opt) config.seed = g.seed;
    config.threads = g.threads;
    if (kind == ExperimentKind::kProfiles) {
      const ProfileArchive archive = RunProfiles(config);
      WriteProfileArchive(archive, output);
      std::cout << ReadFileBytes(std::filesystem::path(output) / "summary.txt");
      return;
    }
    const ExperimentReport report = RunPipeline(config);
    WriteReport(report, output);
    if (g.json) {
      std::cout << ReportToJson(report);
    } else {
      std::cout << RenderSummary(report);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    PrintError("usage_error", e.what());
    std::cerr << app.help();
    return kUsageError;
  } catch (const ParseError &e) {
    json j = {{"error",
               {{"code", ErrorCodeName(e.code())},
                {"message", e.what()},
                {"offset", e.offset()},
                {"character", std::string(1, e.character())}}}};
    std::cerr << j.dump() << '\n';
    return kDomainError;
  } catch (const Error &e) {
    PrintError(ErrorCodeName(e.code()), e.what());
    return kDomainError;
  } catch (const std::exception &e) {
    PrintError("internal_error", e.what());
    return kDomainError;
  }
  return 0;
}
