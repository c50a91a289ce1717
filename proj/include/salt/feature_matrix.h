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

#ifndef SALT_FEATURE_MATRIX_H_
#define SALT_FEATURE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace salt {

// Frame-major T x d matrix of 32-bit latent features for one utterance.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // Zero-filled rows x dims matrix. dims must be >= 1.
  FeatureMatrix(std::size_t rows, std::size_t dims);
  // Takes ownership of row-major data; data.size() must equal rows * dims.
  FeatureMatrix(std::size_t rows, std::size_t dims, std::vector<float> data);

  // Convenience for small literals in tests and bindings.
  static FeatureMatrix FromRows(const std::vector<std::vector<float>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t dims() const { return dims_; }
  bool empty() const { return rows_ == 0; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dims_, dims_};
  }
  std::span<float> row(std::size_t i) { return {data_.data() + i * dims_, dims_}; }

  float operator()(std::size_t r, std::size_t c) const { return data_[r * dims_ + c]; }
  float& operator()(std::size_t r, std::size_t c) { return data_[r * dims_ + c]; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  bool AllFinite() const;
  bool SameShape(const FeatureMatrix& other) const {
    return rows_ == other.rows_ && dims_ == other.dims_;
  }

  // Row-wise concatenation; all parts must share dims.
  static FeatureMatrix Concatenate(std::span<const FeatureMatrix> parts);

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dims_ = 0;
  std::vector<float> data_;
};

// Euclidean norm of every row, accumulated in double.
std::vector<double> RowNorms(const FeatureMatrix& m);

}  // namespace salt

#endif  // SALT_FEATURE_MATRIX_H_
