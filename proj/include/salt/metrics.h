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

#ifndef SALT_METRICS_H_
#define SALT_METRICS_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "salt/feature_matrix.h"

namespace salt {

// ---------------------------------------------------------------------------
// Equal error rate

struct ScoreSet {
  std::vector<double> genuine;   // same-speaker trials
  std::vector<double> impostor;  // different-speaker trials
};

struct EerResult {
  double eer = 0.0;        // fraction in [0, 1]
  double threshold = 0.0;  // accept iff score >= threshold
};

// FRR(t) = #{genuine < t} / |genuine|, FAR(t) = #{impostor >= t} / |impostor|.
// Thresholds swept over the distinct scores (and +inf); the EER is read where
// FRR == FAR, interpolating linearly between the two thresholds that bracket
// the crossing. Depends only on score ranks.
EerResult ComputeEer(const ScoreSet& scores);

// ---------------------------------------------------------------------------
// Pitch

// Pearson product-moment correlation. Throws Error("degenerate sequence")
// when either side has zero variance.
double Pearson(std::span<const double> a, std::span<const double> b);

struct PitchTrack {
  double frame_hz = 100.0;
  std::vector<double> values;  // Hz, 0 = unvoiced
};

struct F0Params {
  double window_ms = 40.0;
  double hop_ms = 10.0;
  double min_hz = 50.0;
  double max_hz = 600.0;
  double voicing_threshold = 0.45;
  double energy_floor_db = -40.0;  // relative to the loudest frame
  double octave_cost = 0.01;       // score penalty per octave of lag above the shortest lag
};

// Normalized-autocorrelation F0 tracker. One frame per hop for every full
// window; signals shorter than one window give an empty track.
PitchTrack EstimateF0(std::span<const float> samples, int sample_rate,
                      const F0Params& params = {});

// Pearson correlation over frames voiced in both tracks after truncating to
// the shorter one. Needs at least kMinVoicedOverlap such frames.
inline constexpr std::size_t kMinVoicedOverlap = 10;
double PitchCorrelation(const PitchTrack& original, const PitchTrack& anonymized);

// ---------------------------------------------------------------------------
// Voice distinctiveness

struct SpeakerEmbeddings {
  std::string id;
  FeatureMatrix vectors;  // one embedding per row
};

struct SimilarityMatrix {
  std::vector<std::string> ids;  // rows and columns share this order
  std::vector<double> entries;   // n x n, row-major

  std::size_t n() const { return ids.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries[i * n() + j]; }
};

// Entry (i, j): mean cosine over all pairs of speaker i's vectors in `a` and
// speaker j's in `b`. Order follows `a`; both sides must hold the same ids.
SimilarityMatrix ComputeSimilarityMatrix(std::span<const SpeakerEmbeddings> a,
                                         std::span<const SpeakerEmbeddings> b);

// |mean(diagonal) - mean(off-diagonal)|, n >= 2.
double DiagDominance(const SimilarityMatrix& m);

// 10 log10(D(anon) / D(orig)) in dB. Returns -inf (and logs a warning) when
// the anonymized matrix has no dominance; throws when the original has none.
double GainVoiceDistinctiveness(const SimilarityMatrix& anon_anon,
                                const SimilarityMatrix& orig_orig);

// ---------------------------------------------------------------------------
// Aggregation

// LibriSpeech f/m, VCTK-diff f/m, VCTK-common f/m.
inline constexpr std::array<double, 6> kVpcSubsetWeights = {0.25, 0.25, 0.20,
                                                            0.20, 0.05, 0.05};

// sum v_i w_i. Weights must sum to 1 within 1e-6.
double WeightedAverage(std::span<const double> values, std::span<const double> weights);

struct MetricReport {
  std::string metric;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> subsets;
  std::vector<double> weights;
};

// Builds a report whose value is the weighted average of the subsets.
MetricReport Aggregate(std::string metric, std::vector<std::pair<std::string, double>> subsets,
                       std::vector<double> weights);

// ---------------------------------------------------------------------------
// PCA

struct PcaResult {
  std::vector<std::vector<double>> projected;   // n x out_dims
  std::vector<std::vector<double>> components;  // out_dims x d, unit length
  std::vector<double> explained_ratio;          // non-increasing
  std::vector<double> mean;                     // d
};

// Projects centered points on the top principal axes. Each axis is signed so
// that its first non-negligible coordinate is positive.
PcaResult PcaProject(const std::vector<std::vector<double>>& points, std::size_t out_dims = 2);
PcaResult PcaProject(const FeatureMatrix& points, std::size_t out_dims = 2);

}  // namespace salt

#endif  // SALT_METRICS_H_
