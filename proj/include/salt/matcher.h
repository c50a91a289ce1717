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

#ifndef SALT_MATCHER_H_
#define SALT_MATCHER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "salt/feature_matrix.h"

namespace salt {

// Reference rows plus their precomputed Euclidean norms.
struct ReferenceView {
  const FeatureMatrix& features;
  std::span<const double> row_norms;
};

struct TopK {
  std::vector<std::size_t> indices;  // best first
  std::vector<double> similarities;  // non-increasing
};

// Frame-wise kNN regression result. Row i of `matched` is the mean of the
// reference rows neighbor_indices[i*k .. i*k+k).
struct MatchResult {
  FeatureMatrix matched;
  std::size_t k = 0;
  std::vector<std::size_t> neighbor_indices;     // T*k, row-major
  std::vector<double> neighbor_similarities;     // T*k, row-major
};

// Cosine similarity; 0 when either vector has zero norm.
double CosineSimilarity(std::span<const float> a, std::span<const float> b);

// Exact k rows of `reference` most cosine-similar to `query`. Ties go to the
// lower row index.
TopK CosineTopK(std::span<const float> query, const FeatureMatrix& reference, std::size_t k);

// Replaces every query frame by the mean of its k nearest reference rows.
// Uses pre-normalized blocked dot products; agrees exactly in index choice
// with CosineTopK.
MatchResult KnnMatch(const FeatureMatrix& query, const ReferenceView& reference, std::size_t k);
MatchResult KnnMatch(const FeatureMatrix& query, const FeatureMatrix& reference, std::size_t k);

}  // namespace salt

#endif  // SALT_MATCHER_H_
