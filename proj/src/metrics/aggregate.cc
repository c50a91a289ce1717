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

#include "fmt/format.h"
#include "salt/common.h"
#include "salt/metrics.h"

namespace salt {

double WeightedAverage(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw InvalidArgument(fmt::format("{} values but {} weights", values.size(), weights.size()));
  }
  if (values.empty()) throw InvalidArgument("weighted average of nothing");
  double wsum = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    wsum += weights[i];
    acc += values[i] * weights[i];
  }
  if (std::abs(wsum - 1.0) > 1e-6) {
    throw InvalidArgument(fmt::format("weights sum to {:.9g}, expected 1", wsum));
  }
  return acc;
}

MetricReport Aggregate(std::string metric, std::vector<std::pair<std::string, double>> subsets,
                       std::vector<double> weights) {
  std::vector<double> values;
  for (const auto& s : subsets) values.push_back(s.second);
  MetricReport report;
  report.value = WeightedAverage(values, weights);
  report.metric = std::move(metric);
  report.subsets = std::move(subsets);
  report.weights = std::move(weights);
  return report;
}

}  // namespace salt
