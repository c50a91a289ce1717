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

#include "salt/feature_matrix.h"

#include <algorithm>
#include <cmath>

#include "fmt/format.h"
#include "salt/common.h"

namespace salt {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dims)
    : FeatureMatrix(rows, dims, std::vector<float>(rows * dims, 0.0f)) {}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dims,
                             std::vector<float> data)
    : rows_(rows), dims_(dims), data_(std::move(data)) {
  if (dims_ == 0) throw InvalidArgument("feature matrix needs dims >= 1");
  if (data_.size() != rows_ * dims_) {
    throw InvalidArgument(fmt::format("feature matrix data has {} values, expected {}x{}",
                                      data_.size(), rows_, dims_));
  }
}

FeatureMatrix FeatureMatrix::FromRows(const std::vector<std::vector<float>>& rows) {
  if (rows.empty()) throw InvalidArgument("FromRows needs at least one row");
  const std::size_t dims = rows.front().size();
  std::vector<float> data;
  data.reserve(rows.size() * dims);
  for (const auto& r : rows) {
    if (r.size() != dims) throw InvalidArgument("FromRows: ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return FeatureMatrix(rows.size(), dims, std::move(data));
}

bool FeatureMatrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

FeatureMatrix FeatureMatrix::Concatenate(std::span<const FeatureMatrix> parts) {
  if (parts.empty()) throw InvalidArgument("nothing to concatenate");
  const std::size_t dims = parts.front().dims();
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.dims() != dims) {
      throw InvalidArgument(fmt::format("cannot concatenate dims {} with {}", dims, p.dims()));
    }
    rows += p.rows();
  }
  std::vector<float> data;
  data.reserve(rows * dims);
  for (const auto& p : parts) data.insert(data.end(), p.data_.begin(), p.data_.end());
  return FeatureMatrix(rows, dims, std::move(data));
}

std::vector<double> RowNorms(const FeatureMatrix& m) {
  std::vector<double> norms(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (float v : m.row(i)) acc += static_cast<double>(v) * v;
    norms[i] = std::sqrt(acc);
  }
  return norms;
}

}  // namespace salt
