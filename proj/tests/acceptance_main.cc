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

// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every check runs on synthetic data.

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fmt/format.h"
#include "salt/blender.h"
#include "salt/cli.h"
#include "salt/common.h"
#include "salt/featstore.h"
#include "salt/matcher.h"
#include "salt/metrics.h"
#include "salt/rng.h"
#include "test_util.h"

namespace salt {
namespace {

namespace fs = std::filesystem;
using testing::NaiveKnn;
using testing::RandomMatrix;
using testing::TempDir;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

double Sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome PublishedAggregation() {
  const std::vector<double> w(kVpcSubsetWeights.begin(), kVpcSubsetWeights.end());
  const double b1a = WeightedAverage(std::vector<double>{17.76, 6.37, 12.46, 9.33, 13.95, 13.11}, w);
  const double orig = WeightedAverage(std::vector<double>{8.67, 1.24, 2.86, 1.44, 2.62, 1.43}, w);
  return {std::abs(b1a - 11.74) <= 0.005 && std::abs(orig - 3.54) <= 0.005,
          fmt::format("B1.a={:.4f} (want 11.74), orig={:.4f} (want 3.54)", b1a, orig)};
}

Outcome WeightConservation() {
  std::mt19937_64 meta(1);
  double worst_sum = 0.0;
  std::size_t out_of_range = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const uint64_t seed = meta();
    const std::size_t m = 1 + meta() % 16;
    const double s = std::uniform_real_distribution<double>(0.0, 4.0)(meta);
    SplitMix64 rng(seed);
    const auto w = SampleWeights(m, rng);
    const auto e = ExtrapolateWeights(w, s);
    worst_sum = std::max({worst_sum, std::abs(Sum(w.weights) - 1.0), std::abs(Sum(e.weights) - 1.0)});
    for (double x : w.weights) {
      // m = 1 gives the single weight exactly 1.
      if (m > 1 ? !(x > 0.0 && x < 1.0) : x != 1.0) ++out_of_range;
    }
  }
  return {worst_sum <= 1e-6 && out_of_range == 0,
          fmt::format("max |sum-1|={:.2e}, raw weights outside (0,1): {}", worst_sum, out_of_range)};
}

Outcome ExtrapolationFixedPoints() {
  std::mt19937_64 meta(2);
  std::size_t bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + meta() % 16;
    SplitMix64 rng(meta());
    const auto w = SampleWeights(m, rng);
    if (ExtrapolateWeights(w, 0.0).weights != w.weights) ++bad;
    const std::size_t mu = 1 + meta() % 16;
    WeightVector u{{}, std::vector<double>(mu, 1.0 / static_cast<double>(mu))};
    const double s = std::uniform_real_distribution<double>(0.0, 4.0)(meta);
    if (ExtrapolateWeights(u, s).weights != u.weights) ++bad;
  }
  const auto onehot = ExtrapolateWeights({{}, {1, 0, 0, 0}}, 1.0).weights;
  const bool onehot_ok = onehot == std::vector<double>{1.75, -0.25, -0.25, -0.25};
  return {bad == 0 && onehot_ok,
          fmt::format("violations={}, one-hot -> ({}, {}, {}, {})", bad, onehot[0], onehot[1],
                      onehot[2], onehot[3])};
}

Outcome KnnOracleEquivalence() {
  std::mt19937_64 gen(3);
  std::size_t index_mismatch = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t = 1 + gen() % 64, rows = 1 + gen() % 512, d = 1 + gen() % 64;
    const std::size_t k = 1 + gen() % std::min<std::size_t>(rows, 8);
    const auto q = RandomMatrix(t, d, gen);
    const auto ref = RandomMatrix(rows, d, gen);
    const auto got = KnnMatch(q, ref, k);
    const auto want = NaiveKnn(q, ref, k);
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        index_mismatch += got.neighbor_indices[i * k + j] != want.indices[i][j];
        worst = std::max(worst, std::abs(got.neighbor_similarities[i * k + j] - want.similarities[i][j]));
      }
      for (std::size_t c = 0; c < d; ++c) {
        worst = std::max(worst, std::abs(static_cast<double>(got.matched(i, c)) - want.matched[i][c]));
      }
    }
  }
  return {index_mismatch == 0 && worst <= 1e-5,
          fmt::format("index mismatches={}, max value diff={:.2e}", index_mismatch, worst)};
}

Outcome BoundaryCollapse() {
  std::mt19937_64 gen(4);
  double worst_p1 = 0.0, worst_m1 = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + gen() % 30, n = 2 + gen() % 6;
    std::vector<std::pair<std::string, FeatureMatrix>> members;
    for (std::size_t i = 0; i < n; ++i) {
      members.emplace_back(fmt::format("s{}", i), RandomMatrix(8 + gen() % 40, d, gen, 0.5 * i));
    }
    const SpeakerPool pool(std::move(members));
    const auto src = RandomMatrix(1 + gen() % 40, d, gen);

    BlendConfig keep{std::min<std::size_t>(4, n), 4, 2.0, 1.0, gen()};
    SplitMix64 r1(keep.seed);
    const auto kept = Anonymize(src, pool, keep, r1).features;
    for (std::size_t i = 0; i < src.data().size(); ++i) {
      worst_p1 = std::max(worst_p1, static_cast<double>(std::abs(kept.data()[i] - src.data()[i])));
    }

    BlendConfig one{1, 1 + gen() % 4, 0.0, 0.0, gen()};
    SplitMix64 r2(one.seed);
    const auto res = Anonymize(src, pool, one, r2);
    const auto& spk = pool.speaker(res.provenance.pseudo.pool_indices.at(0));
    const auto direct = KnnMatch(src, spk.features, one.k).matched;
    for (std::size_t i = 0; i < src.data().size(); ++i) {
      worst_m1 = std::max(worst_m1,
                          static_cast<double>(std::abs(res.features.data()[i] - direct.data()[i])));
    }
  }
  return {worst_p1 <= 1e-6 && worst_m1 <= 1e-6,
          fmt::format("p=1 max diff={:.2e}, m=1 max diff={:.2e}", worst_p1, worst_m1)};
}

Outcome EerSuite() {
  const auto sep = ComputeEer({{0.9, 0.8, 0.7}, {0.1, 0.2, 0.3}});
  const auto hand = ComputeEer({{0.7, 0.6, 0.4}, {0.5, 0.3, 0.2}});
  std::mt19937_64 gen(5);
  std::normal_distribution<double> d;
  ScoreSet same;
  for (int i = 0; i < 10000; ++i) {
    same.genuine.push_back(d(gen));
    same.impostor.push_back(d(gen));
  }
  const double same_eer = ComputeEer(same).eer;
  std::size_t variant = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ScoreSet s, t;
    const int ng = 5 + static_cast<int>(gen() % 200), ni = 5 + static_cast<int>(gen() % 200);
    for (int i = 0; i < ng; ++i) s.genuine.push_back(d(gen) + 1.0);
    for (int i = 0; i < ni; ++i) s.impostor.push_back(d(gen));
    auto f = [trial](double x) { return trial % 2 ? std::atan(x) * 7 - 2 : std::exp(x) + x * x * x; };
    for (double x : s.genuine) t.genuine.push_back(f(x));
    for (double x : s.impostor) t.impostor.push_back(f(x));
    variant += ComputeEer(s).eer != ComputeEer(t).eer;
  }
  const bool ok = sep.eer == 0.0 && std::abs(same_eer - 0.5) <= 0.02 && hand.eer == 1.0 / 3.0 &&
                  variant == 0;
  return {ok, fmt::format("separated={}, same-dist={:.4f}, 3v3={:.17g} @ {}, transform failures={}",
                          sep.eer, same_eer, hand.eer, hand.threshold, variant)};
}

Outcome PitchMetrics() {
  const std::vector<double> a = {1, 2, 3}, b = {1, 2, 4};
  const double r = Pearson(a, b);

  constexpr int kRate = 16000;
  std::vector<float> sine(kRate);
  for (std::size_t i = 0; i < sine.size(); ++i) {
    sine[i] = static_cast<float>(0.5 * std::sin(2 * std::numbers::pi * 220.0 * i / kRate));
  }
  const auto track = EstimateF0(sine, kRate);
  std::size_t interior = 0, hits = 0;
  for (std::size_t i = 1; i + 1 < track.values.size(); ++i) {
    ++interior;
    hits += std::abs(track.values[i] - 220.0) <= 3.0;
  }
  const auto silent = EstimateF0(std::vector<float>(kRate, 0.0f), kRate);
  std::size_t voiced_silence = 0;
  for (double f : silent.values) voiced_silence += f > 0.0;
  const double frac = interior ? static_cast<double>(hits) / interior : 0.0;
  return {std::abs(r - 0.98198) <= 1e-4 && frac >= 0.95 && voiced_silence == 0 && !silent.values.empty(),
          fmt::format("pearson={:.6f}, 220 Hz hits={}/{} ({:.1f}%), voiced silent frames={}", r, hits,
                      interior, 100 * frac, voiced_silence)};
}

SimilarityMatrix Square(std::vector<double> e) {
  SimilarityMatrix m;
  const auto n = static_cast<std::size_t>(std::lround(std::sqrt(e.size())));
  for (std::size_t i = 0; i < n; ++i) m.ids.push_back(std::to_string(i));
  m.entries = std::move(e);
  return m;
}

Outcome GainVd() {
  const auto m = Square({0.9, 0.1, 0.3, 0.7});
  const double same = GainVoiceDistinctiveness(m, m);
  const double ten = GainVoiceDistinctiveness(Square({1, 0, 0, 1}), Square({0.55, 0.45, 0.45, 0.55}));
  const double dom = DiagDominance(m);
  return {same == 0.0 && std::abs(ten - 10.0) <= 1e-9 && dom == 0.6,
          fmt::format("self={}, 10x={:.12f}, dominance={:.17g}", same, ten, dom)};
}

Outcome ExtrapolationSpread() {
  constexpr std::size_t kSpeakers = 16, kDims = 32, kFrames = 64, kSeeds = 500;
  std::vector<std::string> lines;
  bool ok = true;
  for (uint64_t pool_seed : {101u, 202u, 303u}) {
    std::mt19937_64 gen(pool_seed);
    std::normal_distribution<float> center(0.0f, 3.0f);
    std::vector<std::pair<std::string, FeatureMatrix>> members;
    for (std::size_t s = 0; s < kSpeakers; ++s) {
      auto m = RandomMatrix(kFrames, kDims, gen);
      std::vector<float> c(kDims);
      for (float& v : c) v = center(gen);
      for (std::size_t r = 0; r < kFrames; ++r) {
        for (std::size_t j = 0; j < kDims; ++j) m(r, j) += c[j];
      }
      members.emplace_back(fmt::format("c{:02}", s), std::move(m));
    }
    const SpeakerPool pool(std::move(members));
    const auto source = RandomMatrix(40, kDims, gen, 0.0, 3.0);

    std::vector<double> traces;
    for (double scale : {0.0, 1.0, 2.0}) {
      std::vector<std::vector<double>> means;
      for (uint64_t seed = 0; seed < kSeeds; ++seed) {
        BlendConfig cfg{4, 4, scale, 0.0, seed};
        auto rng = SplitMix64::ForStream(seed, 0);
        const auto out = Anonymize(source, pool, cfg, rng).features;
        std::vector<double> mu(kDims, 0.0);
        for (std::size_t r = 0; r < out.rows(); ++r) {
          for (std::size_t j = 0; j < kDims; ++j) mu[j] += out(r, j) / static_cast<double>(out.rows());
        }
        means.push_back(std::move(mu));
      }
      double trace = 0.0;
      for (std::size_t j = 0; j < kDims; ++j) {
        double mean = 0.0, sq = 0.0;
        for (const auto& mu : means) mean += mu[j] / kSeeds;
        for (const auto& mu : means) sq += (mu[j] - mean) * (mu[j] - mean);
        trace += sq / (kSeeds - 1);
      }
      traces.push_back(trace);
    }
    ok = ok && traces[0] < traces[1] && traces[1] < traces[2];
    lines.push_back(fmt::format("pool {}: {:.3f} < {:.3f} < {:.3f}", pool_seed, traces[0], traces[1],
                                traces[2]));
  }
  return {ok, fmt::format("{}", fmt::join(lines, "; "))};
}

Outcome Pca() {
  std::vector<std::vector<double>> line;
  for (int i = 0; i < 50; ++i) line.push_back({0.5 * i - 3, 2.0 * i + 1, -1.0 * i});
  const auto r1 = PcaProject(line, 2);

  std::mt19937_64 gen(6);
  std::normal_distribution<double> d;
  std::vector<double> u(10), v(10);
  for (auto& x : u) x = d(gen);
  for (auto& x : v) x = d(gen);
  std::vector<std::vector<double>> plane;
  for (int i = 0; i < 1000; ++i) {
    const double a = d(gen) * 4, b = d(gen);
    std::vector<double> p(10);
    for (int j = 0; j < 10; ++j) p[j] = 1.0 + a * u[j] + b * v[j];
    plane.push_back(std::move(p));
  }
  const auto r2 = PcaProject(plane, 2);
  const double plane_ratio = r2.explained_ratio[0] + r2.explained_ratio[1];

  // Byte-level repeatability of the plot data through the CLI.
  TempDir dir("acc_pca");
  std::vector<fs::path> dumps;
  for (int s = 0; s < 4; ++s) {
    dumps.push_back(dir / fmt::format("spk{}.saltfeat", s));
    WriteFeatures(RandomMatrix(20, 12, gen, s), dumps.back());
  }
  std::string outputs[2];
  bool cli_ok = true;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / fmt::format("plot{}.tsv", run);
    std::fflush(stdout);
    cli_ok = cli_ok && cli::PcaCommand({dumps, out, 2}) == cli::kExitOk;
    outputs[run] = Slurp(out);
  }
  const auto again = PcaProject(plane, 2);
  const bool same_bytes =
      cli_ok && outputs[0] == outputs[1] && !outputs[0].empty() &&
      std::memcmp(&again.projected[7][0], &r2.projected[7][0], 2 * sizeof(double)) == 0 &&
      again.projected == r2.projected;
  return {std::abs(r1.explained_ratio[0] - 1.0) <= 1e-6 && plane_ratio >= 0.999 && same_bytes,
          fmt::format("rank-1 ratio={:.9f}, plane ratio={:.6f}, repeat identical={}",
                      r1.explained_ratio[0], plane_ratio, same_bytes)};
}

Outcome EndToEndDeterminism() {
  TempDir dir("acc_e2e");
  std::mt19937_64 gen(7);
  std::vector<std::pair<std::string, FeatureMatrix>> members;
  for (int s = 0; s < 10; ++s) members.emplace_back(fmt::format("ref{}", s), RandomMatrix(60, 24, gen, 0.2 * s));
  WritePool(SpeakerPool(std::move(members)), dir / "pool.bin");
  fs::create_directories(dir / "in");
  for (int u = 0; u < 8; ++u) {
    WriteFeatures(RandomMatrix(30 + 5 * u, 24, gen), dir / "in" / fmt::format("spk{}-utt{}.saltfeat", u % 3, u));
  }
  cli::AnonymizeOptions opts;
  opts.input_dir = dir / "in";
  opts.pool = dir / "pool.bin";
  opts.blend = {4, 4, 1.5, 0.1, 2024};
  int codes = 0;
  for (std::size_t workers : {1u, 8u}) {
    opts.workers = workers;
    opts.out_dir = dir / fmt::format("w{}", workers);
    codes += cli::AnonymizeCommand(opts);
  }
  std::size_t files = 0, differing = 0;
  for (const auto& e : fs::directory_iterator(dir / "w1")) {
    ++files;
    differing += Slurp(e.path()) != Slurp(dir / "w8" / e.path().filename());
  }
  return {codes == 0 && files == 16 && differing == 0,
          fmt::format("exit codes sum={}, files compared={}, differing={}", codes, files, differing)};
}

}  // namespace
}  // namespace salt

int main() {
  using salt::Criterion;
  salt::InitLogging();
  const std::vector<Criterion> criteria = {
      {"published weighted average", 1.0, salt::PublishedAggregation},
      {"weight conservation", 5.0, salt::WeightConservation},
      {"extrapolation fixed points", 0.0, salt::ExtrapolationFixedPoints},
      {"knn oracle equivalence", 30.0, salt::KnnOracleEquivalence},
      {"boundary collapse", 0.0, salt::BoundaryCollapse},
      {"eer suite", 0.0, salt::EerSuite},
      {"pitch metrics", 0.0, salt::PitchMetrics},
      {"gain of voice distinctiveness", 0.0, salt::GainVd},
      {"extrapolation spread", 120.0, salt::ExtrapolationSpread},
      {"pca", 0.0, salt::Pca},
      {"end-to-end determinism", 0.0, salt::EndToEndDeterminism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    salt::Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
    const bool pass = out.pass && in_time;
    failures += !pass;
    fmt::print("{} {:<32} {:8.3f}s{} | {}\n", pass ? "PASS" : "FAIL", c.name, secs,
               c.budget_s > 0 ? fmt::format(" (<{}s)", c.budget_s) : "", out.detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
