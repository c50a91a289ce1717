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

#ifndef SALT_BLENDER_H_
#define SALT_BLENDER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "salt/featstore.h"
#include "salt/feature_matrix.h"
#include "salt/rng.h"

namespace salt {

struct BlendConfig {
  std::size_t m = 4;      // reference speakers per pseudo speaker
  std::size_t k = 4;      // neighbors per kNN match
  double scale = 0.0;     // extrapolation factor s >= 0
  double preserve = 0.0;  // source preservation p in [0, 1]
  uint64_t seed = 0;

  // Throws InvalidArgument unless 1 <= m <= pool_size, k >= 1, s >= 0, 0 <= p <= 1.
  void Validate(std::size_t pool_size) const;
};

struct WeightVector {
  std::vector<std::string> speaker_ids;
  std::vector<double> weights;
};

// One pseudo speaker: the chosen reference speakers with raw softmax
// weights and their extrapolated counterparts.
struct PseudoSpeaker {
  std::vector<std::size_t> pool_indices;
  WeightVector raw;
  WeightVector extrapolated;
};

// Everything needed to replay one anonymize call.
struct Provenance {
  uint64_t seed = 0;
  uint64_t stream = 0;
  std::string mode = "utterance";
  BlendConfig config;
  PseudoSpeaker pseudo;
};

// m distinct speaker ids drawn uniformly without replacement, in draw order.
std::vector<std::string> SampleSubset(const SpeakerPool& pool, std::size_t m, SplitMix64& rng);

// Max-subtracted softmax.
std::vector<double> Softmax(std::span<const double> logits);

// m standard-normal logits from rng, softmaxed. Speaker ids left empty.
WeightVector SampleWeights(std::size_t m, SplitMix64& rng);

// w'_i = w_i (s + 1) - s / m. Sum is preserved; s = 0 is the identity.
WeightVector ExtrapolateWeights(const WeightVector& w, double scale);

// Affine combination sum_i w_i D_i of equally shaped matrices.
FeatureMatrix Blend(std::span<const FeatureMatrix> matched, std::span<const double> weights);

// p * source + (1 - p) * blended.
FeatureMatrix Preserve(const FeatureMatrix& source, const FeatureMatrix& blended, double p);

// Draws subset then weights from rng and extrapolates by config.scale.
PseudoSpeaker SamplePseudoSpeaker(const SpeakerPool& pool, const BlendConfig& config,
                                  SplitMix64& rng);

// kNN-matches source against each speaker of the pseudo speaker, blends with
// the extrapolated weights and mixes the source back in by config.preserve.
FeatureMatrix ApplyPseudoSpeaker(const FeatureMatrix& source, const SpeakerPool& pool,
                                 const PseudoSpeaker& pseudo, const BlendConfig& config);

struct AnonymizeResult {
  FeatureMatrix features;
  Provenance provenance;
};

// Full pipeline for one utterance; rng is consumed for the subset then the
// weights. Provenance seed/stream are filled from config.seed and `stream`.
AnonymizeResult Anonymize(const FeatureMatrix& source, const SpeakerPool& pool,
                          const BlendConfig& config, SplitMix64& rng, uint64_t stream = 0);

// Line-oriented key<TAB>value text.
std::string FormatProvenance(const Provenance& p);
Provenance ParseProvenance(const std::string& text);

}  // namespace salt

#endif  // SALT_BLENDER_H_
