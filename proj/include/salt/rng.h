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

#ifndef SALT_RNG_H_
#define SALT_RNG_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace salt {

// splitmix64 generator. Every random decision in the library draws from
// this stream so that a seed reproduces a run on any platform:
//   uniform  = (next >> 11) * 2^-53                      in [0, 1)
//   below(n) = min(floor(uniform * n), n - 1)
//   gaussian = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)        two draws, cosine branch
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  // Independent stream for (seed, stream index).
  static SplitMix64 ForStream(uint64_t seed, uint64_t stream);

  uint64_t Next();
  double Uniform();
  std::size_t Below(std::size_t n);
  double Gaussian();

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

// splitmix64 output finalizer.
uint64_t Mix64(uint64_t x);

// FNV-1a, used to turn a speaker id into a stream index.
uint64_t Fnv1a64(std::string_view text);

// m distinct indices from [0, n), uniformly without replacement, in draw
// order (partial Fisher-Yates). Throws InvalidArgument if m > n.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t m,
                                                  SplitMix64& rng);

}  // namespace salt

#endif  // SALT_RNG_H_
