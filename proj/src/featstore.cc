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

#include "salt/featstore.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "fmt/format.h"
#include "salt/common.h"
#include "spdlog/spdlog.h"

namespace salt {

namespace {

template <typename T>
void PutLe(std::vector<char>& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T GetLe(std::span<const char> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return value;
}

std::vector<char> Slurp(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", source.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void Dump(std::span<const char> bytes, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open {} for writing", destination.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(fmt::format("write to {} failed", destination.string()));
}

}  // namespace

std::vector<char> EncodeFeatures(const FeatureMatrix& m) {
  if (m.dims() == 0) throw InvalidArgument("cannot encode a matrix with dims 0");
  if (!m.AllFinite()) throw InvalidArgument("feature matrix contains non-finite values");
  std::vector<char> out;
  out.reserve(kFeatureHeaderBytes + m.data().size() * 4);
  out.insert(out.end(), std::begin(kFeatureMagic), std::end(kFeatureMagic));
  PutLe<uint32_t>(out, kFeatureVersion);
  PutLe<uint32_t>(out, static_cast<uint32_t>(m.dims()));
  PutLe<uint64_t>(out, static_cast<uint64_t>(m.rows()));
  for (float v : m.data()) PutLe<uint32_t>(out, std::bit_cast<uint32_t>(v));
  return out;
}

FeatureMatrix DecodeFeatures(std::span<const char> bytes) {
  if (bytes.size() < sizeof(kFeatureMagic) ||
      std::memcmp(bytes.data(), kFeatureMagic, sizeof(kFeatureMagic)) != 0) {
    throw Error("not a feature file");
  }
  if (bytes.size() < kFeatureHeaderBytes) throw Error("corrupt length: truncated header");
  const auto version = GetLe<uint32_t>(bytes, 8);
  if (version != kFeatureVersion) {
    throw Error(fmt::format("version mismatch: file has {}, expected {}", version,
                            kFeatureVersion));
  }
  const auto dims = GetLe<uint32_t>(bytes, 12);
  const auto frames = GetLe<uint64_t>(bytes, 16);
  if (dims == 0) throw Error("corrupt header: dims is 0");
  const uint64_t payload = bytes.size() - kFeatureHeaderBytes;
  if (frames > payload / 4 / dims || frames * dims * 4 != payload) {
    throw Error(fmt::format("corrupt length: header says {}x{}, payload has {} bytes", frames,
                            dims, payload));
  }
  std::vector<float> data(frames * dims);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(GetLe<uint32_t>(bytes, kFeatureHeaderBytes + 4 * i));
  }
  FeatureMatrix m(frames, dims, std::move(data));
  if (!m.AllFinite()) throw Error("feature file contains non-finite values");
  return m;
}

void WriteFeatures(const FeatureMatrix& m, const std::filesystem::path& destination) {
  Dump(EncodeFeatures(m), destination.string());
}

FeatureMatrix ReadFeatures(const std::filesystem::path& source) {
  try {
    return DecodeFeatures(Slurp(source));
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", source.string(), e.what()));
  }
}

SpeakerPool::SpeakerPool(std::vector<std::pair<std::string, FeatureMatrix>> members) {
  if (members.empty()) throw InvalidArgument("speaker pool needs at least one speaker");
  dims_ = members.front().second.dims();
  speakers_.reserve(members.size());
  for (auto& [id, features] : members) {
    if (features.dims() != dims_) {
      throw InvalidArgument(fmt::format("speaker '{}' has dims {}, pool dims {}", id,
                                        features.dims(), dims_));
    }
    if (features.empty()) throw InvalidArgument(fmt::format("speaker '{}' has no frames", id));
    if (IndexOf(id)) throw InvalidArgument(fmt::format("duplicate speaker id '{}'", id));
    auto norms = RowNorms(features);
    speakers_.push_back({std::move(id), std::move(features), std::move(norms)});
  }
}

std::optional<std::size_t> SpeakerPool::IndexOf(std::string_view id) const {
  for (std::size_t i = 0; i < speakers_.size(); ++i) {
    if (speakers_[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<char> EncodePool(const SpeakerPool& pool) {
  std::vector<std::vector<char>> blobs;
  blobs.reserve(pool.size());
  std::size_t index_bytes = 8 + 4 + 4 + 8;
  for (const auto& s : pool.speakers()) {
    blobs.push_back(EncodeFeatures(s.features));
    index_bytes += 4 + s.id.size() + 8 + 8;
  }
  std::vector<char> out;
  out.insert(out.end(), std::begin(kPoolMagic), std::end(kPoolMagic));
  PutLe<uint32_t>(out, kPoolVersion);
  PutLe<uint32_t>(out, static_cast<uint32_t>(pool.dims()));
  PutLe<uint64_t>(out, pool.size());
  uint64_t offset = index_bytes;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& id = pool.speaker(i).id;
    PutLe<uint32_t>(out, static_cast<uint32_t>(id.size()));
    out.insert(out.end(), id.begin(), id.end());
    PutLe<uint64_t>(out, offset);
    PutLe<uint64_t>(out, blobs[i].size());
    offset += blobs[i].size();
  }
  for (const auto& b : blobs) out.insert(out.end(), b.begin(), b.end());
  return out;
}

SpeakerPool DecodePool(std::span<const char> bytes) {
  if (bytes.size() < 24 || std::memcmp(bytes.data(), kPoolMagic, sizeof(kPoolMagic)) != 0) {
    throw Error("not a pool archive");
  }
  const auto version = GetLe<uint32_t>(bytes, 8);
  if (version != kPoolVersion) {
    throw Error(fmt::format("version mismatch: pool archive has {}, expected {}", version,
                            kPoolVersion));
  }
  const auto dims = GetLe<uint32_t>(bytes, 12);
  const auto count = GetLe<uint64_t>(bytes, 16);
  std::size_t pos = 24;
  auto need = [&](std::size_t n) {
    if (n > bytes.size() || pos > bytes.size() - n) throw Error("corrupt length: pool index");
  };
  std::vector<std::pair<std::string, FeatureMatrix>> members;
  for (uint64_t i = 0; i < count; ++i) {
    need(4);
    const auto id_len = GetLe<uint32_t>(bytes, pos);
    pos += 4;
    need(id_len + 16);
    std::string id(bytes.data() + pos, id_len);
    pos += id_len;
    const auto offset = GetLe<uint64_t>(bytes, pos);
    const auto size = GetLe<uint64_t>(bytes, pos + 8);
    pos += 16;
    if (offset > bytes.size() || size > bytes.size() - offset) {
      throw Error(fmt::format("corrupt length: member '{}' out of bounds", id));
    }
    auto m = DecodeFeatures(bytes.subspan(offset, size));
    if (m.dims() != dims) throw Error(fmt::format("member '{}' dims disagree with pool", id));
    members.emplace_back(std::move(id), std::move(m));
  }
  return SpeakerPool(std::move(members));
}

void WritePool(const SpeakerPool& pool, const std::filesystem::path& destination) {
  Dump(EncodePool(pool), destination.string());
}

SpeakerPool ReadPool(const std::filesystem::path& source) {
  try {
    return DecodePool(Slurp(source));
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", source.string(), e.what()));
  }
}

PoolManifest ReadManifest(const std::filesystem::path& source) {
  std::ifstream in(source);
  if (!in) throw Error(fmt::format("cannot open manifest {}", source.string()));
  const auto base = source.parent_path();
  PoolManifest manifest;
  std::map<std::string, std::size_t, std::less<>> slot;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw Error(fmt::format("{}:{}: expected key<TAB>value", source.string(), lineno));
    }
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    if (key.front() == '@') {
      try {
        const auto n = std::stoull(value);
        if (key == "@n_speakers") {
          manifest.sampling.n_speakers = n;
        } else if (key == "@n_utterances") {
          manifest.sampling.n_utterances = n;
        } else if (key == "@seed") {
          manifest.sampling.seed = n;
        } else {
          throw Error(fmt::format("{}:{}: unknown header '{}'", source.string(), lineno, key));
        }
      } catch (const std::logic_error&) {
        throw Error(fmt::format("{}:{}: bad number '{}'", source.string(), lineno, value));
      }
      continue;
    }
    std::filesystem::path path(value);
    if (path.is_relative()) path = base / path;
    auto [it, inserted] = slot.try_emplace(key, manifest.entries.size());
    if (inserted) manifest.entries.push_back({key, {}});
    manifest.entries[it->second].paths.push_back(std::move(path));
  }
  return manifest;
}

void WriteManifest(const PoolManifest& manifest, const std::filesystem::path& destination) {
  std::ostringstream out;
  out << "@n_speakers\t" << manifest.sampling.n_speakers << '\n'
      << "@n_utterances\t" << manifest.sampling.n_utterances << '\n'
      << "@seed\t" << manifest.sampling.seed << '\n';
  for (const auto& e : manifest.entries) {
    for (const auto& p : e.paths) out << e.speaker_id << '\t' << p.string() << '\n';
  }
  const auto text = out.str();
  Dump(text, destination.string());
}

SpeakerPool BuildPool(const PoolManifest& manifest, SplitMix64& rng) {
  const auto& sampling = manifest.sampling;
  if (sampling.n_speakers == 0 || sampling.n_utterances == 0) {
    throw InvalidArgument("n_speakers and n_utterances must be >= 1");
  }
  std::vector<const ManifestEntry*> sorted;
  for (const auto& e : manifest.entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->speaker_id < b->speaker_id; });
  if (sorted.size() < sampling.n_speakers) {
    throw InvalidArgument(fmt::format(
        "manifest has {} speakers, {} requested (short by {})", sorted.size(),
        sampling.n_speakers, sampling.n_speakers - sorted.size()));
  }

  auto chosen = SampleWithoutReplacement(sorted.size(), sampling.n_speakers, rng);
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::pair<std::string, FeatureMatrix>> members;
  std::optional<std::pair<std::size_t, std::filesystem::path>> first;  // dims, file
  for (std::size_t s : chosen) {
    const auto& entry = *sorted[s];
    if (entry.paths.size() < sampling.n_utterances) {
      throw InvalidArgument(fmt::format(
          "speaker '{}' has {} utterances, {} requested (short by {})", entry.speaker_id,
          entry.paths.size(), sampling.n_utterances,
          sampling.n_utterances - entry.paths.size()));
    }
    auto paths = entry.paths;
    std::sort(paths.begin(), paths.end());
    auto picks = SampleWithoutReplacement(paths.size(), sampling.n_utterances, rng);
    std::sort(picks.begin(), picks.end());
    std::vector<FeatureMatrix> parts;
    parts.reserve(picks.size());
    for (std::size_t u : picks) {
      const auto& path = paths[u];
      if (!std::filesystem::exists(path)) {
        throw Error(fmt::format("manifest path does not exist: {}", path.string()));
      }
      auto m = ReadFeatures(path);
      if (!first) {
        first.emplace(m.dims(), path);
      } else if (m.dims() != first->first) {
        throw InvalidArgument(fmt::format("dims mismatch: {} has {}, {} has {}", first->second.string(),
                                          first->first, path.string(), m.dims()));
      }
      parts.push_back(std::move(m));
    }
    members.emplace_back(entry.speaker_id, FeatureMatrix::Concatenate(parts));
    spdlog::debug("pool speaker {}: {} utterances, {} frames", entry.speaker_id, picks.size(),
                  members.back().second.rows());
  }
  return SpeakerPool(std::move(members));
}

}  // namespace salt
