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

#include <Eigen/Dense>

#include "fmt/format.h"
#include "salt/common.h"
#include "salt/metrics.h"

namespace salt {

PcaResult PcaProject(const std::vector<std::vector<double>>& points, std::size_t out_dims) {
  const std::size_t n = points.size();
  if (out_dims < 1) throw InvalidArgument("out_dims must be >= 1");
  if (n < out_dims + 1) {
    throw InvalidArgument(fmt::format("PCA needs at least {} points, got {}", out_dims + 1, n));
  }
  const std::size_t d = points.front().size();
  if (d < out_dims) throw InvalidArgument(fmt::format("dims {} < out_dims {}", d, out_dims));

  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != d) throw InvalidArgument("PCA points have ragged dims");
    for (std::size_t j = 0; j < d; ++j) x(i, j) = points[i][j];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  const double total = cov.trace();
  if (!(total > 0.0) || total <= 1e-12 * mean.squaredNorm()) {
    throw InvalidArgument("degenerate data: all points identical");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  // Eigenvalues ascend; take from the back.
  PcaResult result;
  result.mean.assign(mean.data(), mean.data() + d);
  Eigen::MatrixXd basis(d, out_dims);
  for (std::size_t c = 0; c < out_dims; ++c) {
    const auto src = static_cast<Eigen::Index>(d - 1 - c);
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    const double vmax = v.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (std::abs(v(j)) > 1e-9 * vmax) {
        if (v(j) < 0.0) v = -v;
        break;
      }
    }
    basis.col(static_cast<Eigen::Index>(c)) = v;
    result.components.emplace_back(v.data(), v.data() + d);
    result.explained_ratio.push_back(std::max(0.0, solver.eigenvalues()(src)) / total);
  }
  const Eigen::MatrixXd proj = x * basis;
  result.projected.resize(n, std::vector<double>(out_dims));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < out_dims; ++c) {
      result.projected[i][c] = proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
  }
  return result;
}

PcaResult PcaProject(const FeatureMatrix& points, std::size_t out_dims) {
  std::vector<std::vector<double>> rows;
  rows.reserve(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto r = points.row(i);
    rows.emplace_back(r.begin(), r.end());
  }
  return PcaProject(rows, out_dims);
}

}  // namespace salt
