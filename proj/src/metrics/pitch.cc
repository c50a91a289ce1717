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

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmt/format.h"
#include "salt/common.h"
#include "salt/metrics.h"

namespace salt {

double Pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument(fmt::format("pearson: lengths {} and {} differ", a.size(), b.size()));
  }
  if (a.size() < 2) throw InvalidArgument("pearson needs at least 2 points");
  // Checked up front: the mean of a constant run need not round back to the
  // value, which would leave a spurious constant residual.
  for (auto s : {a, b}) {
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    if (*lo == *hi) throw Error("degenerate sequence");
  }
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error("degenerate sequence");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

PitchTrack EstimateF0(std::span<const float> samples, int sample_rate, const F0Params& params) {
  if (sample_rate < 8000) throw InvalidArgument("sample rate must be >= 8 kHz");
  if (!(params.min_hz > 0.0 && params.min_hz < params.max_hz)) {
    throw InvalidArgument("need 0 < min_hz < max_hz");
  }
  const double sr = sample_rate;
  const auto window = static_cast<std::size_t>(std::lround(params.window_ms * sr / 1000.0));
  const auto hop = static_cast<std::size_t>(std::lround(params.hop_ms * sr / 1000.0));
  if (window < 4 || hop == 0) throw InvalidArgument("window/hop too short");

  PitchTrack track;
  track.frame_hz = sr / static_cast<double>(hop);
  if (samples.size() < window) return track;
  const std::size_t n_frames = 1 + (samples.size() - window) / hop;

  const auto min_lag = static_cast<std::size_t>(std::ceil(sr / params.max_hz));
  const auto max_lag =
      std::min(static_cast<std::size_t>(std::floor(sr / params.min_hz)), window / 2);
  if (min_lag + 2 > max_lag) throw InvalidArgument("pitch range does not fit the window");

  // Per-frame mean-removed energy for the relative gate.
  std::vector<std::vector<double>> frames(n_frames, std::vector<double>(window));
  std::vector<double> energy(n_frames, 0.0);
  for (std::size_t f = 0; f < n_frames; ++f) {
    auto& x = frames[f];
    double mean = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
      x[i] = samples[f * hop + i];
      mean += x[i];
    }
    mean /= static_cast<double>(window);
    for (double& v : x) {
      v -= mean;
      energy[f] += v * v;
    }
    energy[f] /= static_cast<double>(window);
  }
  const double peak_energy = *std::max_element(energy.begin(), energy.end());
  const double energy_gate = peak_energy * std::pow(10.0, params.energy_floor_db / 10.0);

  track.values.assign(n_frames, 0.0);
  std::vector<double> prefix(window + 1);
  std::vector<double> r(max_lag + 2, 0.0);
  for (std::size_t f = 0; f < n_frames; ++f) {
    if (peak_energy <= 0.0 || energy[f] <= energy_gate) continue;
    const auto& x = frames[f];
    prefix[0] = 0.0;
    for (std::size_t i = 0; i < window; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];

    for (std::size_t lag = min_lag - 1; lag <= max_lag + 1; ++lag) {
      const std::size_t len = window - lag;
      double acc = 0.0;
      for (std::size_t i = 0; i < len; ++i) acc += x[i] * x[i + lag];
      const double e0 = prefix[len];
      const double e1 = prefix[window] - prefix[lag];
      r[lag] = (e0 > 0.0 && e1 > 0.0) ? acc / std::sqrt(e0 * e1) : 0.0;
    }

    std::size_t best = min_lag;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
      const double score =
          r[lag] - params.octave_cost * std::log2(static_cast<double>(lag) / min_lag);
      if (score > best_score) {
        best_score = score;
        best = lag;
      }
    }
    if (r[best] < params.voicing_threshold) continue;

    // Parabolic refinement of the peak position.
    double lag = static_cast<double>(best);
    const double a = r[best - 1], b = r[best], c = r[best + 1];
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) lag += std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    track.values[f] = std::clamp(sr / lag, params.min_hz, params.max_hz);
  }
  return track;
}

double PitchCorrelation(const PitchTrack& original, const PitchTrack& anonymized) {
  if (original.values.empty() || anonymized.values.empty()) {
    throw InvalidArgument("pitch correlation needs non-empty tracks");
  }
  const std::size_t n = std::min(original.values.size(), anonymized.values.size());
  std::vector<double> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    if (original.values[i] > 0.0 && anonymized.values[i] > 0.0) {
      a.push_back(original.values[i]);
      b.push_back(anonymized.values[i]);
    }
  }
  if (a.size() < kMinVoicedOverlap) {
    throw Error(fmt::format("insufficient voiced overlap: {} frames, need {}", a.size(),
                            kMinVoicedOverlap));
  }
  return Pearson(a, b);
}

}  // namespace salt
