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

#include "salt/common.h"
#include "salt/metrics.h"

namespace salt {

EerResult ComputeEer(const ScoreSet& scores) {
  if (scores.genuine.empty() || scores.impostor.empty()) {
    throw InvalidArgument("EER needs non-empty genuine and impostor scores");
  }
  auto genuine = scores.genuine;
  auto impostor = scores.impostor;
  for (const auto* v : {&genuine, &impostor}) {
    if (!std::all_of(v->begin(), v->end(), [](double s) { return std::isfinite(s); })) {
      throw InvalidArgument("EER scores must be finite");
    }
  }
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<double> thresholds;
  thresholds.reserve(genuine.size() + impostor.size() + 1);
  std::merge(genuine.begin(), genuine.end(), impostor.begin(), impostor.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const double n_gen = static_cast<double>(genuine.size());
  const double n_imp = static_cast<double>(impostor.size());
  auto frr = [&](double t) {
    return static_cast<double>(std::lower_bound(genuine.begin(), genuine.end(), t) -
                               genuine.begin()) / n_gen;
  };
  auto far = [&](double t) {
    return static_cast<double>(impostor.end() -
                               std::lower_bound(impostor.begin(), impostor.end(), t)) / n_imp;
  };

  // FRR - FAR is non-decreasing in t, negative at the lowest score and 1 at +inf.
  double prev_t = thresholds.front();
  double prev_frr = frr(prev_t);
  double prev_diff = prev_frr - far(prev_t);
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    const double f_rr = frr(t);
    const double f_ar = far(t);
    const double diff = f_rr - f_ar;
    if (diff == 0.0) return {f_rr, t};
    if (diff > 0.0) {
      const double alpha = -prev_diff / (diff - prev_diff);
      const double eer = prev_frr + alpha * (f_rr - prev_frr);
      const double thr = std::isinf(t) ? prev_t : prev_t + alpha * (t - prev_t);
      return {eer, thr};
    }
    prev_t = t;
    prev_frr = f_rr;
    prev_diff = diff;
  }
  return {0.5, prev_t};  // unreachable: +inf always has FRR - FAR = 1
}

}  // namespace salt
