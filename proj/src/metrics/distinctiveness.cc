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

#include <cmath>
#include <limits>

#include "fmt/format.h"
#include "salt/common.h"
#include "salt/matcher.h"
#include "salt/metrics.h"
#include "spdlog/spdlog.h"

namespace salt {

SimilarityMatrix ComputeSimilarityMatrix(std::span<const SpeakerEmbeddings> a,
                                         std::span<const SpeakerEmbeddings> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument(fmt::format("speaker sets differ in size: {} vs {}", a.size(),
                                      b.size()));
  }
  std::vector<const SpeakerEmbeddings*> cols;
  for (const auto& sa : a) {
    const SpeakerEmbeddings* match = nullptr;
    for (const auto& sb : b) {
      if (sb.id == sa.id) match = &sb;
    }
    if (match == nullptr) {
      throw InvalidArgument(fmt::format("speaker '{}' missing from second set", sa.id));
    }
    cols.push_back(match);
  }
  const std::size_t n = a.size();
  const std::size_t dims = n > 0 ? a.front().vectors.dims() : 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto* s : {&a[i], cols[i]}) {
      if (s->vectors.empty()) throw InvalidArgument(fmt::format("speaker '{}' has no embeddings", s->id));
      if (s->vectors.dims() != dims) throw InvalidArgument("embedding dims differ");
    }
  }

  SimilarityMatrix out;
  out.entries.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.ids.push_back(a[i].id);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& va = a[i].vectors;
      const auto& vb = cols[j]->vectors;
      double acc = 0.0;
      for (std::size_t p = 0; p < va.rows(); ++p) {
        for (std::size_t q = 0; q < vb.rows(); ++q) acc += CosineSimilarity(va.row(p), vb.row(q));
      }
      out.entries[i * n + j] = acc / static_cast<double>(va.rows() * vb.rows());
    }
  }
  return out;
}

double DiagDominance(const SimilarityMatrix& m) {
  const std::size_t n = m.n();
  if (n < 2) throw InvalidArgument("diagonal dominance needs n >= 2");
  if (m.entries.size() != n * n) throw InvalidArgument("similarity matrix is not square");
  // Extended accumulation so the difference of means rounds once.
  long double diag = 0.0L, off = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) (i == j ? diag : off) += m(i, j);
  }
  const auto nd = static_cast<long double>(n);
  return static_cast<double>(std::abs(diag / nd - off / (nd * nd - nd)));
}

double GainVoiceDistinctiveness(const SimilarityMatrix& anon_anon,
                                const SimilarityMatrix& orig_orig) {
  if (anon_anon.n() != orig_orig.n()) {
    throw InvalidArgument(fmt::format("matrix sizes differ: {} vs {}", anon_anon.n(),
                                      orig_orig.n()));
  }
  const double d_orig = DiagDominance(orig_orig);
  if (d_orig == 0.0) throw Error("original matrix has no diagonal dominance");
  const double d_anon = DiagDominance(anon_anon);
  if (d_anon == 0.0) {
    spdlog::warn("anonymized matrix has no diagonal dominance; G_VD is -inf");
    return -std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(d_anon / d_orig);
}

}  // namespace salt
