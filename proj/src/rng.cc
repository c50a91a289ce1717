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

#include "salt/rng.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fmt/format.h"
#include "salt/common.h"

namespace salt {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}  // namespace

uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SplitMix64 SplitMix64::ForStream(uint64_t seed, uint64_t stream) {
  return SplitMix64(Mix64(seed ^ Mix64(stream + kGolden)));
}

uint64_t SplitMix64::Next() {
  state_ += kGolden;
  return Mix64(state_);
}

double SplitMix64::Uniform() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

std::size_t SplitMix64::Below(std::size_t n) {
  const auto j = static_cast<std::size_t>(Uniform() * static_cast<double>(n));
  return std::min(j, n - 1);
}

double SplitMix64::Gaussian() {
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

uint64_t Fnv1a64(std::string_view text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t m,
                                                  SplitMix64& rng) {
  if (m > n) {
    throw InvalidArgument(
        fmt::format("cannot sample {} items from {} without replacement", m, n));
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(idx[i], idx[i + rng.Below(n - i)]);
  }
  idx.resize(m);
  return idx;
}

}  // namespace salt
