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
// Python bindings. Sequences cross the boundary as str over an alphabet
// string (default "ABCD").

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "fcmtune/alpha_ml.h"
#include "fcmtune/codec.h"
#include "fcmtune/dependence.h"
#include "fcmtune/error.h"
#include "fcmtune/fcm.h"
#include "fcmtune/tuner.h"

namespace py = pybind11;

namespace fcmtune {
namespace {

SymbolSequence Parse(const std::string &text, const std::string &alphabet) {
  return ParseSequence(text, Alphabet::FromFlag(alphabet));
}

py::dict BitrateDict(const BitrateResult &b) {
  py::dict d;
  d["bps"] = b.bits_per_symbol;
  d["total_bits"] = b.total_bits;
  d["symbols_coded"] = b.symbols_coded;
  d["floored_events"] = b.floored_events;
  return d;
}

py::dict FitDict(const AlphaFit &f) {
  py::dict d;
  d["alpha_star"] = f.alpha_star;
  d["log_likelihood"] = f.log_likelihood;
  d["converged"] = f.converged;
  d["hit_bound"] = f.hit_bound;
  d["degenerate"] = f.degenerate;
  d["iterations"] = f.iterations;
  return d;
}

py::dict SelectionDict(const SelectionResult &r) {
  py::dict d;
  d["method"] = SelectionMethodName(r.method);
  d["k"] = r.params.k;
  d["alpha"] = r.params.alpha;
  d["bps"] = r.bitrate.bits_per_symbol;
  d["bitrate"] = BitrateDict(r.bitrate);
  d["evaluations"] = r.evaluations;
  if (r.profile) d["profile"] = r.profile->values;
  if (r.alpha_fit) d["alpha_fit"] = FitDict(*r.alpha_fit);
  return d;
}

}  // namespace
}  // namespace fcmtune

PYBIND11_MODULE(_fcmtune, m) {
  using namespace fcmtune;
  m.doc() = "Finite-context model order and smoothing selection.";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error &e) {
      py::set_error(error, (std::string(ErrorCodeName(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "generate",
      [](int k, double alpha, size_t length, uint64_t seed, const std::string &alphabet) {
        const Alphabet abc = Alphabet::FromFlag(alphabet);
        py::gil_scoped_release release;
        return RenderSequence(Generate({k, alpha}, length, seed, abc));
      },
      py::arg("k"), py::arg("alpha"), py::arg("length"), py::arg("seed") = 42,
      py::arg("alphabet") = "ABCD", "Samples a sequence from the adaptive (k, alpha) source.");

  m.def(
      "bitrate",
      [](const std::string &seq, int k, double alpha, const std::string &alphabet) {
        const SymbolSequence s = Parse(seq, alphabet);
        BitrateResult b;
        {
          py::gil_scoped_release release;
          b = Bitrate(s, {k, alpha});
        }
        return BitrateDict(b);
      },
      py::arg("seq"), py::arg("k"), py::arg("alpha"), py::arg("alphabet") = "ABCD",
      "Adaptive code length of seq under (k, alpha).");

  m.def(
      "pami",
      [](const std::string &seq, int h, const std::string &alphabet) {
        return Pami(Parse(seq, alphabet), h);
      },
      py::arg("seq"), py::arg("h"), py::arg("alphabet") = "ABCD");

  m.def(
      "profile",
      [](const std::string &seq, const std::string &measure, int max_lag,
         const std::string &alphabet) {
        const SymbolSequence s = Parse(seq, alphabet);
        const Measure which = ParseMeasure(measure);
        py::gil_scoped_release release;
        return ComputeProfile(s, which, max_lag).values;
      },
      py::arg("seq"), py::arg("measure") = "pami", py::arg("max_lag") = kDefaultMaxLag,
      py::arg("alphabet") = "ABCD", "Per-lag values for lags 1..max_lag.");

  m.def(
      "select_k",
      [](const std::string &seq, int max_lag, const std::string &alphabet) {
        const SymbolSequence s = Parse(seq, alphabet);
        py::gil_scoped_release release;
        return SelectK(ComputeProfile(s, Measure::kPami, max_lag));
      },
      py::arg("seq"), py::arg("max_lag") = kDefaultMaxLag, py::arg("alphabet") = "ABCD");

  m.def(
      "fit_alpha",
      [](const std::string &seq, int k, const std::string &alphabet) {
        const SymbolSequence s = Parse(seq, alphabet);
        AlphaFit f;
        {
          py::gil_scoped_release release;
          f = FitAlpha(s, k);
        }
        return FitDict(f);
      },
      py::arg("seq"), py::arg("k"), py::arg("alphabet") = "ABCD");

  m.def(
      "tune",
      [](const std::string &seq, int max_lag, const std::string &alphabet) {
        const SymbolSequence s = Parse(seq, alphabet);
        std::optional<SelectionResult> r;
        {
          py::gil_scoped_release release;
          r = TwoStepSelect(s, max_lag);
        }
        return SelectionDict(*r);
      },
      py::arg("seq"), py::arg("max_lag") = kDefaultMaxLag, py::arg("alphabet") = "ABCD",
      "Two-step selection: k* from the pami peak, then alpha* by maximum likelihood.");

  m.def(
      "grid_search",
      [](const std::string &seq, int k_max, int alpha_steps, int threads,
         const std::string &alphabet) {
        const SymbolSequence s = Parse(seq, alphabet);
        const SearchGrid grid = SearchGrid::Default(k_max, alpha_steps);
        std::optional<SelectionResult> r;
        {
          py::gil_scoped_release release;
          r = GridSearch(s, grid, threads);
        }
        return SelectionDict(*r);
      },
      py::arg("seq"), py::arg("k_max") = 10, py::arg("alpha_steps") = 101,
      py::arg("threads") = 1, py::arg("alphabet") = "ABCD");

  m.def(
      "compress",
      [](const std::string &seq, int k, double alpha, const std::string &alphabet) {
        const SymbolSequence s = Parse(seq, alphabet);
        std::string bytes;
        {
          py::gil_scoped_release release;
          bytes = Compress(s, {k, alpha}).Serialize();
        }
        return py::bytes(bytes);
      },
      py::arg("seq"), py::arg("k"), py::arg("alpha"), py::arg("alphabet") = "ABCD");

  m.def(
      "decompress",
      [](const py::bytes &data) {
        const std::string bytes = data;
        py::gil_scoped_release release;
        return RenderSequence(Decompress(CompressedContainer::Parse(bytes)));
      },
      py::arg("data"));
}
