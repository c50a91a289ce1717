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

#ifndef SALT_FEATSTORE_H_
#define SALT_FEATSTORE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "salt/feature_matrix.h"
#include "salt/rng.h"

namespace salt {

// .saltfeat layout, all little-endian:
//   "SALTFEAT" | u32 version (=1) | u32 dims | u64 frames | frames*dims f32
inline constexpr char kFeatureMagic[8] = {'S', 'A', 'L', 'T', 'F', 'E', 'A', 'T'};
inline constexpr uint32_t kFeatureVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 24;

// Pool archive layout, all little-endian:
//   "SALTPOOL" | u32 version (=1) | u32 dims | u64 count
//   count x (u32 id_len | id bytes | u64 offset | u64 size)
//   member blobs, each a complete .saltfeat image at its offset
inline constexpr char kPoolMagic[8] = {'S', 'A', 'L', 'T', 'P', 'O', 'O', 'L'};
inline constexpr uint32_t kPoolVersion = 1;

std::vector<char> EncodeFeatures(const FeatureMatrix& m);
FeatureMatrix DecodeFeatures(std::span<const char> bytes);

// Rejects non-finite matrices before touching the destination.
void WriteFeatures(const FeatureMatrix& m, const std::filesystem::path& destination);
FeatureMatrix ReadFeatures(const std::filesystem::path& source);

struct PoolSpeaker {
  std::string id;
  FeatureMatrix features;
  std::vector<double> row_norms;
};

// Immutable set of reference speakers sharing one feature dimension.
class SpeakerPool {
 public:
  // Members keep the given order. Ids must be unique, every matrix must be
  // non-empty and share dims.
  explicit SpeakerPool(std::vector<std::pair<std::string, FeatureMatrix>> members);

  std::size_t size() const { return speakers_.size(); }
  std::size_t dims() const { return dims_; }
  const PoolSpeaker& speaker(std::size_t i) const { return speakers_.at(i); }
  std::span<const PoolSpeaker> speakers() const { return speakers_; }
  std::optional<std::size_t> IndexOf(std::string_view id) const;

 private:
  std::vector<PoolSpeaker> speakers_;
  std::size_t dims_ = 0;
};

std::vector<char> EncodePool(const SpeakerPool& pool);
SpeakerPool DecodePool(std::span<const char> bytes);
void WritePool(const SpeakerPool& pool, const std::filesystem::path& destination);
SpeakerPool ReadPool(const std::filesystem::path& source);

struct SamplingParams {
  std::size_t n_speakers = 50;
  std::size_t n_utterances = 50;
  uint64_t seed = 0;
};

struct ManifestEntry {
  std::string speaker_id;
  std::vector<std::filesystem::path> paths;
};

// Text manifest:
//   # comment
//   @n_speakers<TAB>50
//   @n_utterances<TAB>50
//   @seed<TAB>0
//   speaker_id<TAB>path          (relative paths resolve against the manifest)
struct PoolManifest {
  std::vector<ManifestEntry> entries;  // first-appearance order
  SamplingParams sampling;
};

PoolManifest ReadManifest(const std::filesystem::path& source);
void WriteManifest(const PoolManifest& manifest, const std::filesystem::path& destination);

// Samples sampling.n_speakers speakers and sampling.n_utterances files per
// speaker without replacement, concatenating each speaker's files. Speakers
// are drawn from the id-sorted list and stored in id order; a speaker's
// files are drawn from their sorted paths and concatenated in that order, so
// manifest line order is irrelevant. rng is the only entropy source.
SpeakerPool BuildPool(const PoolManifest& manifest, SplitMix64& rng);

}  // namespace salt

#endif  // SALT_FEATSTORE_H_
