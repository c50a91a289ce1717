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

#ifndef SALT_METRIC_IO_H_
#define SALT_METRIC_IO_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "salt/metrics.h"

namespace salt {

// Lines `label<TAB>score`, label in {genuine, impostor}. Blank lines and
// lines starting with '#' are skipped.
ScoreSet ReadScoreFile(const std::filesystem::path& path);

struct Waveform {
  std::vector<float> samples;  // mono, [-1, 1]
  int sample_rate = 16000;
};

// RIFF/WAVE with 16-bit PCM or 32-bit float data. Multi-channel input is
// averaged down to mono.
Waveform ReadWav(const std::filesystem::path& path);
void WriteWav16(const Waveform& wave, const std::filesystem::path& path);

// One F0 value (Hz, 0 = unvoiced) per line.
PitchTrack ReadPitchTrack(const std::filesystem::path& path, double frame_hz = 100.0);

// Lines `name<TAB>value`.
std::vector<std::pair<std::string, double>> ReadNamedValues(const std::filesystem::path& path);

// One weight per line; when a line has several tab-separated fields the last
// one is the weight.
std::vector<double> ReadWeights(const std::filesystem::path& path);

// Every *.saltfeat in `dir` (sorted by name); the file stem is the speaker id.
std::vector<SpeakerEmbeddings> ReadEmbeddingDir(const std::filesystem::path& dir);

// key<TAB>value lines: metric, subset.<name>, weight.<name>, weighted_average.
std::string FormatReport(const MetricReport& report);

}  // namespace salt

#endif  // SALT_METRIC_IO_H_
