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

#include "salt/matcher.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "fmt/format.h"
#include "salt/common.h"
#include "spdlog/spdlog.h"

namespace salt {

namespace {

// Query frames x reference rows per tile. 8 x 128 doubles of scores plus the
// 8 query rows stay in L1 for d up to ~1024.
constexpr std::size_t kQueryBlock = 8;
constexpr std::size_t kRefBlock = 128;

// Bounded best-k list ordered by (similarity desc, index asc).
class BestK {
 public:
  explicit BestK(std::size_t k) : k_(k) {
    idx_.reserve(k + 1);
    sim_.reserve(k + 1);
  }

  void Offer(std::size_t index, double sim) {
    if (idx_.size() == k_ && !Better(sim, index, sim_.back(), idx_.back())) return;
    std::size_t pos = idx_.size();
    while (pos > 0 && Better(sim, index, sim_[pos - 1], idx_[pos - 1])) --pos;
    idx_.insert(idx_.begin() + static_cast<std::ptrdiff_t>(pos), index);
    sim_.insert(sim_.begin() + static_cast<std::ptrdiff_t>(pos), sim);
    if (idx_.size() > k_) {
      idx_.pop_back();
      sim_.pop_back();
    }
  }

  const std::vector<std::size_t>& indices() const { return idx_; }
  const std::vector<double>& similarities() const { return sim_; }

 private:
  static bool Better(double sa, std::size_t ia, double sb, std::size_t ib) {
    return sa > sb || (sa == sb && ia < ib);
  }

  std::size_t k_;
  std::vector<std::size_t> idx_;
  std::vector<double> sim_;
};

double Dot(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<double>(a[i]) * b[i];
  return acc;
}

void CheckShapes(std::size_t query_dims, const FeatureMatrix& reference, std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be >= 1");
  if (query_dims != reference.dims()) {
    throw InvalidArgument(fmt::format("query dims {} != reference dims {}", query_dims,
                                      reference.dims()));
  }
  if (reference.rows() < k) {
    throw InvalidArgument(
        fmt::format("reference has {} rows, fewer than k={}", reference.rows(), k));
  }
}

}  // namespace

double CosineSimilarity(std::span<const float> a, std::span<const float> b) {
  const double na = std::sqrt(Dot(a, a));
  const double nb = std::sqrt(Dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / (na * nb);
}

TopK CosineTopK(std::span<const float> query, const FeatureMatrix& reference, std::size_t k) {
  CheckShapes(query.size(), reference, k);
  BestK best(k);
  for (std::size_t r = 0; r < reference.rows(); ++r) {
    best.Offer(r, CosineSimilarity(query, reference.row(r)));
  }
  return {best.indices(), best.similarities()};
}

MatchResult KnnMatch(const FeatureMatrix& query, const ReferenceView& reference,
                     std::size_t k) {
  const auto& ref = reference.features;
  CheckShapes(query.dims(), ref, k);
  if (reference.row_norms.size() != ref.rows()) {
    throw InvalidArgument("reference norms do not match reference rows");
  }
  const std::size_t d = query.dims();
  const std::size_t n_ref = ref.rows();

  std::vector<double> inv_ref(n_ref);
  std::size_t zero_rows = 0;
  for (std::size_t r = 0; r < n_ref; ++r) {
    const double n = reference.row_norms[r];
    inv_ref[r] = n > 0.0 ? 1.0 / n : 0.0;
    zero_rows += n > 0.0 ? 0 : 1;
  }
  if (zero_rows > 0) spdlog::debug("reference has {} zero-norm rows", zero_rows);

  MatchResult result{FeatureMatrix(query.rows(), d), k, {}, {}};
  result.neighbor_indices.resize(query.rows() * k);
  result.neighbor_similarities.resize(query.rows() * k);

  std::array<double, kQueryBlock * kRefBlock> tile{};
  std::vector<double> mean(d);
  for (std::size_t q0 = 0; q0 < query.rows(); q0 += kQueryBlock) {
    const std::size_t nq = std::min(kQueryBlock, query.rows() - q0);
    std::array<double, kQueryBlock> inv_q{};
    for (std::size_t i = 0; i < nq; ++i) {
      const double n = std::sqrt(Dot(query.row(q0 + i), query.row(q0 + i)));
      inv_q[i] = n > 0.0 ? 1.0 / n : 0.0;
      if (n == 0.0) spdlog::debug("query frame {} has zero norm", q0 + i);
    }
    std::vector<BestK> best(nq, BestK(k));

    for (std::size_t r0 = 0; r0 < n_ref; r0 += kRefBlock) {
      const std::size_t nr = std::min(kRefBlock, n_ref - r0);
      for (std::size_t i = 0; i < nq; ++i) {
        const float* qp = query.row(q0 + i).data();
        for (std::size_t j = 0; j < nr; ++j) {
          const float* rp = ref.row(r0 + j).data();
          double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
          std::size_t c = 0;
          for (; c + 4 <= d; c += 4) {
            a0 += static_cast<double>(qp[c]) * rp[c];
            a1 += static_cast<double>(qp[c + 1]) * rp[c + 1];
            a2 += static_cast<double>(qp[c + 2]) * rp[c + 2];
            a3 += static_cast<double>(qp[c + 3]) * rp[c + 3];
          }
          for (; c < d; ++c) a0 += static_cast<double>(qp[c]) * rp[c];
          tile[i * kRefBlock + j] = ((a0 + a1) + (a2 + a3)) * inv_q[i] * inv_ref[r0 + j];
        }
      }
      for (std::size_t i = 0; i < nq; ++i) {
        for (std::size_t j = 0; j < nr; ++j) best[i].Offer(r0 + j, tile[i * kRefBlock + j]);
      }
    }

    for (std::size_t i = 0; i < nq; ++i) {
      const std::size_t t = q0 + i;
      std::fill(mean.begin(), mean.end(), 0.0);
      for (std::size_t n = 0; n < k; ++n) {
        const std::size_t r = best[i].indices()[n];
        result.neighbor_indices[t * k + n] = r;
        result.neighbor_similarities[t * k + n] = best[i].similarities()[n];
        const auto row = ref.row(r);
        for (std::size_t c = 0; c < d; ++c) mean[c] += row[c];
      }
      auto out = result.matched.row(t);
      for (std::size_t c = 0; c < d; ++c) out[c] = static_cast<float>(mean[c] / static_cast<double>(k));
    }
  }
  return result;
}

MatchResult KnnMatch(const FeatureMatrix& query, const FeatureMatrix& reference, std::size_t k) {
  const auto norms = RowNorms(reference);
  return KnnMatch(query, ReferenceView{reference, norms}, k);
}

}  // namespace salt
