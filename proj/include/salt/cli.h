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

#ifndef SALT_CLI_H_
#define SALT_CLI_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "salt/blender.h"
#include "salt/metrics.h"

namespace salt::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // some or all work items failed
inline constexpr int kExitUsage = 2;    // invalid invocation

struct BuildPoolOptions {
  std::filesystem::path manifest;
  std::filesystem::path out;
  // Unset values fall back to the manifest header, then to 50 / 50 / 0.
  std::optional<std::size_t> n_speakers;
  std::optional<std::size_t> n_utterances;
  std::optional<uint64_t> seed;
};

enum class AssignMode { kUtterance, kSpeaker };

struct AnonymizeOptions {
  std::filesystem::path input_dir;
  std::filesystem::path pool;
  std::filesystem::path out_dir;
  BlendConfig blend;
  std::size_t workers = 1;
  AssignMode mode = AssignMode::kUtterance;
  // Kaldi-style "utt spk" lines; otherwise the speaker is the file stem up
  // to the first '-'.
  std::optional<std::filesystem::path> utt2spk;
};

struct PrematchOptions {
  std::filesystem::path manifest;  // speaker<TAB>features[<TAB>audio]
  std::filesystem::path pool;      // reference archive keyed by speaker id
  std::filesystem::path out_dir;
  std::size_t k = 4;
};

struct EvalOptions {
  std::string metric;               // eer | pitch | gvd | values
  std::vector<std::string> inputs;  // one per subset (values: any number of files)
  std::optional<std::filesystem::path> weights_file;
  std::optional<std::filesystem::path> out;
  F0Params f0;
};

struct PcaOptions {
  std::vector<std::filesystem::path> dumps;  // one .saltfeat per speaker
  std::filesystem::path out;
  std::size_t dims = 2;
};

int BuildPoolCommand(const BuildPoolOptions& opts);
int AnonymizeCommand(const AnonymizeOptions& opts);
int PrematchCommand(const PrematchOptions& opts);
int EvalCommand(const EvalOptions& opts);
int PcaCommand(const PcaOptions& opts);

// Speaker id used for an input file in per-speaker mode when no utt2spk map
// is given.
std::string SpeakerFromStem(const std::string& stem);

// Full command line entry point used by the `salt` binary.
int Main(int argc, char** argv);

}  // namespace salt::cli

#endif  // SALT_CLI_H_
