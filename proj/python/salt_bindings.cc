// Copyright (c) 2026 The salt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "salt/blender.h"
#include "salt/cli.h"
#include "salt/common.h"
#include "salt/featstore.h"
#include "salt/matcher.h"
#include "salt/metrics.h"

namespace py = pybind11;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

salt::FeatureMatrix ToMatrix(const FloatArray& a) {
  if (a.ndim() != 2) throw salt::InvalidArgument("expected a 2-D array (frames, dims)");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto dims = static_cast<std::size_t>(a.shape(1));
  return salt::FeatureMatrix(rows, dims, std::vector<float>(a.data(), a.data() + a.size()));
}

FloatArray ToArray(const salt::FeatureMatrix& m) {
  FloatArray out({m.rows(), m.dims()});
  std::memcpy(out.mutable_data(), m.data().data(), m.data().size() * sizeof(float));
  return out;
}

std::vector<double> ToVector(const DoubleArray& a) {
  if (a.ndim() != 1) throw salt::InvalidArgument("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

salt::SimilarityMatrix ToSimilarity(const DoubleArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw salt::InvalidArgument("expected a square 2-D array");
  }
  salt::SimilarityMatrix m;
  for (py::ssize_t i = 0; i < a.shape(0); ++i) m.ids.push_back(std::to_string(i));
  m.entries.assign(a.data(), a.data() + a.size());
  return m;
}

salt::SpeakerPool MakePool(const std::vector<std::pair<std::string, FloatArray>>& members) {
  std::vector<std::pair<std::string, salt::FeatureMatrix>> converted;
  for (const auto& [id, arr] : members) converted.emplace_back(id, ToMatrix(arr));
  return salt::SpeakerPool(std::move(converted));
}

}  // namespace

PYBIND11_MODULE(_salt, m) {
  m.doc() = "Latent-space speaker anonymization and voice privacy metrics";
  m.attr("__version__") = "0.1.0";

  // InvalidArgument first: it derives from Error.
  static py::exception<salt::Error> error(m, "SaltError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const salt::InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const salt::Error& e) {
      error(e.what());
    }
  });

  // Feature files and pools.
  m.def("read_features", [](const std::filesystem::path& p) { return ToArray(salt::ReadFeatures(p)); },
        py::arg("path"));
  m.def("write_features",
        [](const FloatArray& a, const std::filesystem::path& p) { salt::WriteFeatures(ToMatrix(a), p); },
        py::arg("features"), py::arg("path"));

  py::class_<salt::SpeakerPool>(m, "SpeakerPool")
      .def(py::init(&MakePool), py::arg("members"),
           "members: list of (speaker_id, (frames, dims) array)")
      .def_static("read", [](const std::filesystem::path& p) { return salt::ReadPool(p); })
      .def("write", [](const salt::SpeakerPool& pool, const std::filesystem::path& p) {
        salt::WritePool(pool, p);
      })
      .def("__len__", &salt::SpeakerPool::size)
      .def_property_readonly("dims", &salt::SpeakerPool::dims)
      .def_property_readonly("ids",
                             [](const salt::SpeakerPool& pool) {
                               std::vector<std::string> ids;
                               for (const auto& s : pool.speakers()) ids.push_back(s.id);
                               return ids;
                             })
      .def("features", [](const salt::SpeakerPool& pool, std::size_t i) {
        return ToArray(pool.speaker(i).features);
      });

  // Matching and blending.
  m.def(
      "knn_match",
      [](const FloatArray& query, const FloatArray& reference, std::size_t k) {
        const auto r = salt::KnnMatch(ToMatrix(query), ToMatrix(reference), k);
        py::array_t<std::size_t> idx({r.matched.rows(), r.k});
        std::memcpy(idx.mutable_data(), r.neighbor_indices.data(),
                    r.neighbor_indices.size() * sizeof(std::size_t));
        return py::make_tuple(ToArray(r.matched), idx);
      },
      py::arg("query"), py::arg("reference"), py::arg("k") = 4,
      "Returns (matched, neighbor_indices).");
  m.def(
      "sample_weights",
      [](std::size_t m_, uint64_t seed) {
        salt::SplitMix64 rng(seed);
        return salt::SampleWeights(m_, rng).weights;
      },
      py::arg("m"), py::arg("seed"));
  m.def(
      "extrapolate_weights",
      [](const std::vector<double>& w, double scale) {
        return salt::ExtrapolateWeights({{}, w}, scale).weights;
      },
      py::arg("weights"), py::arg("scale"));
  m.def(
      "anonymize",
      [](const FloatArray& source, const salt::SpeakerPool& pool, std::size_t m_, std::size_t k,
         double scale, double preserve, uint64_t seed, uint64_t stream) {
        const salt::BlendConfig cfg{m_, k, scale, preserve, seed};
        auto rng = salt::SplitMix64::ForStream(seed, stream);
        const auto r = salt::Anonymize(ToMatrix(source), pool, cfg, rng, stream);
        return py::make_tuple(ToArray(r.features), salt::FormatProvenance(r.provenance));
      },
      py::arg("source"), py::arg("pool"), py::arg("m") = 4, py::arg("k") = 4,
      py::arg("scale") = 0.0, py::arg("preserve") = 0.0, py::arg("seed") = 0,
      py::arg("stream") = 0, "Returns (features, provenance_text).");

  // Metrics.
  m.def(
      "compute_eer",
      [](const DoubleArray& genuine, const DoubleArray& impostor) {
        const auto r = salt::ComputeEer({ToVector(genuine), ToVector(impostor)});
        return py::make_tuple(r.eer, r.threshold);
      },
      py::arg("genuine"), py::arg("impostor"), "Returns (eer, threshold); eer is a fraction.");
  m.def("pearson", [](const DoubleArray& a, const DoubleArray& b) {
    return salt::Pearson(ToVector(a), ToVector(b));
  });
  m.def(
      "estimate_f0",
      [](const FloatArray& samples, int sample_rate, double voicing_threshold) {
        if (samples.ndim() != 1) throw salt::InvalidArgument("expected 1-D samples");
        salt::F0Params params;
        params.voicing_threshold = voicing_threshold;
        const auto track = salt::EstimateF0(
            std::span<const float>(samples.data(), static_cast<std::size_t>(samples.size())),
            sample_rate, params);
        return DoubleArray(static_cast<py::ssize_t>(track.values.size()), track.values.data());
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("voicing_threshold") = 0.45);
  m.def(
      "pitch_correlation",
      [](const DoubleArray& orig, const DoubleArray& anon) {
        salt::PitchTrack a, b;
        a.values = ToVector(orig);
        b.values = ToVector(anon);
        return salt::PitchCorrelation(a, b);
      },
      py::arg("original"), py::arg("anonymized"));
  m.def("diag_dominance", [](const DoubleArray& a) { return salt::DiagDominance(ToSimilarity(a)); });
  m.def(
      "gain_vd",
      [](const DoubleArray& aa, const DoubleArray& oo) {
        return salt::GainVoiceDistinctiveness(ToSimilarity(aa), ToSimilarity(oo));
      },
      py::arg("anon_anon"), py::arg("orig_orig"));
  m.def(
      "weighted_average",
      [](const std::vector<double>& values, std::optional<std::vector<double>> weights) {
        const std::vector<double> w =
            weights ? *weights
                    : std::vector<double>(salt::kVpcSubsetWeights.begin(),
                                          salt::kVpcSubsetWeights.end());
        return salt::WeightedAverage(values, w);
      },
      py::arg("values"), py::arg("weights") = py::none());
  m.def(
      "pca_project",
      [](const DoubleArray& points, std::size_t out_dims) {
        if (points.ndim() != 2) throw salt::InvalidArgument("expected (n, d) points");
        std::vector<std::vector<double>> rows;
        for (py::ssize_t i = 0; i < points.shape(0); ++i) {
          const double* r = points.data(i, 0);
          rows.emplace_back(r, r + points.shape(1));
        }
        const auto res = salt::PcaProject(rows, out_dims);
        DoubleArray proj({res.projected.size(), out_dims});
        for (std::size_t i = 0; i < res.projected.size(); ++i) {
          std::memcpy(proj.mutable_data(i, 0), res.projected[i].data(), out_dims * sizeof(double));
        }
        return py::make_tuple(proj, res.explained_ratio);
      },
      py::arg("points"), py::arg("out_dims") = 2, "Returns (projected, explained_ratio).");

  m.def(
      "main",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "salt");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        py::gil_scoped_release release;
        return salt::cli::Main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the command line with the given arguments; returns the exit code.");
}
