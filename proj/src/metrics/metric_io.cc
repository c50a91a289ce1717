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

#include "salt/metric_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "fmt/format.h"
#include "salt/common.h"
#include "salt/featstore.h"

namespace salt {

namespace {

// Calls fn(lineno, fields) for every non-blank, non-comment line.
template <typename Fn>
void ForEachRecord(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      fields.push_back(line.substr(start, tab - start));
    }
    fields.push_back(line.substr(start));
    fn(lineno, fields);
  }
}

double ParseNumber(const std::string& text, const std::filesystem::path& path,
                   std::size_t lineno) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw Error(fmt::format("{}:{}: malformed number '{}'", path.string(), lineno, text));
  }
  return v;
}

uint32_t U32(const std::vector<char>& b, std::size_t o) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(b[o + i])) << (8 * i);
  return v;
}

uint16_t U16(const std::vector<char>& b, std::size_t o) {
  return static_cast<uint16_t>(static_cast<unsigned char>(b[o]) |
                               (static_cast<unsigned char>(b[o + 1]) << 8));
}

}  // namespace

ScoreSet ReadScoreFile(const std::filesystem::path& path) {
  ScoreSet set;
  ForEachRecord(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    if (f.size() != 2) {
      throw Error(fmt::format("{}:{}: expected label<TAB>score", path.string(), lineno));
    }
    const double score = ParseNumber(f[1], path, lineno);
    if (f[0] == "genuine") {
      set.genuine.push_back(score);
    } else if (f[0] == "impostor") {
      set.impostor.push_back(score);
    } else {
      throw Error(fmt::format("{}:{}: unknown label '{}'", path.string(), lineno, f[0]));
    }
  });
  return set;
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  std::vector<char> b{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
      std::memcmp(b.data() + 8, "WAVE", 4) != 0) {
    throw Error(fmt::format("{}: not a RIFF/WAVE file", path.string()));
  }
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  std::size_t data_off = 0, data_len = 0;
  for (std::size_t pos = 12; pos + 8 <= b.size();) {
    const uint32_t len = U32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(b.data() + pos, "fmt ", 4) == 0 && len >= 16 && body + 16 <= b.size()) {
      format = U16(b, body);
      channels = U16(b, body + 2);
      rate = U32(b, body + 4);
      bits = U16(b, body + 14);
      if (format == 0xFFFE && len >= 40 && body + 26 <= b.size()) format = U16(b, body + 24);
    } else if (std::memcmp(b.data() + pos, "data", 4) == 0) {
      data_off = body;
      data_len = std::min<std::size_t>(len, b.size() - body);
      break;
    }
    pos = body + len + (len & 1);
  }
  if (channels == 0 || data_off == 0) {
    throw Error(fmt::format("{}: missing fmt or data chunk", path.string()));
  }
  const bool pcm16 = format == 1 && bits == 16;
  const bool float32 = format == 3 && bits == 32;
  if (!pcm16 && !float32) {
    throw Error(fmt::format("{}: unsupported encoding (format {}, {} bits)", path.string(),
                            format, bits));
  }
  const std::size_t width = bits / 8;
  const std::size_t n = data_len / (width * channels);
  Waveform wave;
  wave.sample_rate = static_cast<int>(rate);
  wave.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t o = data_off + (i * channels + c) * width;
      if (pcm16) {
        acc += static_cast<int16_t>(U16(b, o)) / 32768.0;
      } else {
        acc += std::bit_cast<float>(U32(b, o));
      }
    }
    wave.samples[i] = static_cast<float>(acc / channels);
  }
  return wave;
}

void WriteWav16(const Waveform& wave, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open {} for writing", path.string()));
  auto u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  auto u16 = [&](uint16_t v) {
    out.put(static_cast<char>(v & 0xFF));
    out.put(static_cast<char>(v >> 8));
  };
  const auto data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  out.write("RIFF", 4);
  u32(36 + data_bytes);
  out.write("WAVEfmt ", 8);
  u32(16);
  u16(1);
  u16(1);
  u32(static_cast<uint32_t>(wave.sample_rate));
  u32(static_cast<uint32_t>(wave.sample_rate) * 2);
  u16(2);
  u16(16);
  out.write("data", 4);
  u32(data_bytes);
  for (float s : wave.samples) {
    const double clipped = std::clamp(static_cast<double>(s), -1.0, 32767.0 / 32768.0);
    u16(static_cast<uint16_t>(static_cast<int16_t>(std::lround(clipped * 32768.0))));
  }
  if (!out) throw Error(fmt::format("write to {} failed", path.string()));
}

PitchTrack ReadPitchTrack(const std::filesystem::path& path, double frame_hz) {
  PitchTrack track;
  track.frame_hz = frame_hz;
  ForEachRecord(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    const double v = ParseNumber(f.back(), path, lineno);
    if (v < 0.0) throw Error(fmt::format("{}:{}: negative F0", path.string(), lineno));
    track.values.push_back(v);
  });
  return track;
}

std::vector<std::pair<std::string, double>> ReadNamedValues(const std::filesystem::path& path) {
  std::vector<std::pair<std::string, double>> out;
  ForEachRecord(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    if (f.size() != 2) {
      throw Error(fmt::format("{}:{}: expected name<TAB>value", path.string(), lineno));
    }
    out.emplace_back(f[0], ParseNumber(f[1], path, lineno));
  });
  return out;
}

std::vector<double> ReadWeights(const std::filesystem::path& path) {
  std::vector<double> out;
  ForEachRecord(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    out.push_back(ParseNumber(f.back(), path, lineno));
  });
  return out;
}

std::vector<SpeakerEmbeddings> ReadEmbeddingDir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(fmt::format("{} is not a directory", dir.string()));
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".saltfeat") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SpeakerEmbeddings> out;
  for (const auto& f : files) out.push_back({f.stem().string(), ReadFeatures(f)});
  return out;
}

std::string FormatReport(const MetricReport& report) {
  std::string out = fmt::format("metric\t{}\n", report.metric);
  for (std::size_t i = 0; i < report.subsets.size(); ++i) {
    out += fmt::format("subset.{}\t{:.10g}\n", report.subsets[i].first, report.subsets[i].second);
    out += fmt::format("weight.{}\t{:.10g}\n", report.subsets[i].first, report.weights[i]);
  }
  out += fmt::format("weighted_average\t{:.10g}\n", report.value);
  return out;
}

}  // namespace salt
