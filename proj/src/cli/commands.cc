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
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "fmt/format.h"
#include "salt/cli.h"
#include "salt/common.h"
#include "salt/featstore.h"
#include "salt/matcher.h"
#include "salt/metric_io.h"
#include "spdlog/spdlog.h"

namespace salt::cli {

namespace fs = std::filesystem;

namespace {

void WriteText(const std::string& text, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open {} for writing", path.string()));
  out << text;
  if (!out) throw Error(fmt::format("write to {} failed", path.string()));
}

std::vector<fs::path> ListFeatureFiles(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidArgument(fmt::format("{} is not a directory", dir.string()));
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".saltfeat") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::map<std::string, std::string> ReadUtt2Spk(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open {}", path.string()));
  std::map<std::string, std::string> map;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::istringstream fields(line);
    std::string utt, spk;
    if (!(fields >> utt)) continue;
    if (!(fields >> spk)) {
      throw InvalidArgument(fmt::format("{}:{}: expected 'utt spk'", path.string(), lineno));
    }
    map[utt] = spk;
  }
  return map;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <typename Fn>
void ParallelFor(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  if (workers == 1) {
    loop();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
}

// Prefixes the path unless the message already starts with it.
std::string WithPath(const fs::path& path, std::string_view message) {
  const auto p = path.string();
  if (message.substr(0, p.size()) == p) return std::string(message);
  return fmt::format("{}: {}", p, message);
}

int ReportFailures(const std::vector<std::string>& errors, std::size_t total) {
  std::size_t failed = 0;
  for (const auto& e : errors) {
    if (!e.empty()) {
      spdlog::error("{}", e);
      ++failed;
    }
  }
  spdlog::info("{} of {} items succeeded", total - failed, total);
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

std::string SpeakerFromStem(const std::string& stem) {
  return stem.substr(0, stem.find('-'));
}

int BuildPoolCommand(const BuildPoolOptions& opts) {
  InitLogging();
  PoolManifest manifest;
  try {
    manifest = ReadManifest(opts.manifest);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  }
  if (opts.n_speakers) manifest.sampling.n_speakers = *opts.n_speakers;
  if (opts.n_utterances) manifest.sampling.n_utterances = *opts.n_utterances;
  if (opts.seed) manifest.sampling.seed = *opts.seed;
  try {
    SplitMix64 rng(manifest.sampling.seed);
    const auto pool = BuildPool(manifest, rng);
    WritePool(pool, opts.out);
    spdlog::info("wrote pool of {} speakers (dims {}) to {}", pool.size(), pool.dims(),
                 opts.out.string());
  } catch (const Error& e) {
    spdlog::error("build-pool failed: {}", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

int AnonymizeCommand(const AnonymizeOptions& opts) {
  InitLogging();
  std::vector<fs::path> inputs;
  std::optional<SpeakerPool> pool;
  std::map<std::string, std::string> utt2spk;
  try {
    inputs = ListFeatureFiles(opts.input_dir);
    pool.emplace(ReadPool(opts.pool));
    opts.blend.Validate(pool->size());
    if (opts.utt2spk) utt2spk = ReadUtt2Spk(*opts.utt2spk);
    fs::create_directories(opts.out_dir);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  }
  if (inputs.empty()) spdlog::warn("no .saltfeat files in {}", opts.input_dir.string());

  const bool per_speaker = opts.mode == AssignMode::kSpeaker;
  std::vector<std::string> errors(inputs.size());
  ParallelFor(inputs.size(), opts.workers, [&](std::size_t i) {
    const auto& path = inputs[i];
    const std::string stem = path.stem().string();
    try {
      uint64_t stream = i;
      if (per_speaker) {
        auto it = utt2spk.find(stem);
        std::string spk;
        if (it != utt2spk.end()) {
          spk = it->second;
        } else if (opts.utt2spk) {
          throw Error(fmt::format("utterance '{}' not in utt2spk", stem));
        } else {
          spk = SpeakerFromStem(stem);
        }
        stream = Fnv1a64(spk);
      }
      const auto source = ReadFeatures(path);
      auto rng = SplitMix64::ForStream(opts.blend.seed, stream);
      auto result = Anonymize(source, *pool, opts.blend, rng, stream);
      result.provenance.mode = per_speaker ? "speaker" : "utterance";
      WriteFeatures(result.features, opts.out_dir / (stem + ".saltfeat"));
      WriteText(FormatProvenance(result.provenance), opts.out_dir / (stem + ".prov"));
      spdlog::debug("anonymized {} ({} frames)", stem, source.rows());
    } catch (const std::exception& e) {
      errors[i] = WithPath(path, e.what());
    }
  });
  return ReportFailures(errors, inputs.size());
}

int PrematchCommand(const PrematchOptions& opts) {
  InitLogging();
  struct Item {
    std::string speaker;
    fs::path features;
    fs::path audio;
  };
  std::vector<Item> items;
  std::optional<SpeakerPool> pool;
  try {
    if (opts.k < 1) throw InvalidArgument("k must be >= 1");
    pool.emplace(ReadPool(opts.pool));
    std::ifstream in(opts.manifest);
    if (!in) throw InvalidArgument(fmt::format("cannot open {}", opts.manifest.string()));
    const auto base = opts.manifest.parent_path();
    auto resolve = [&](fs::path p) { return p.is_relative() ? base / p : p; };
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#' || line.front() == '@') continue;
      std::vector<std::string> f;
      std::istringstream fields(line);
      for (std::string tok; std::getline(fields, tok, '\t');) f.push_back(tok);
      if (f.size() < 2 || f.size() > 3) {
        throw InvalidArgument(fmt::format("{}:{}: expected speaker<TAB>features[<TAB>audio]",
                                          opts.manifest.string(), lineno));
      }
      const auto feats = resolve(f[1]);
      items.push_back({f[0], feats, f.size() == 3 ? resolve(f[2]) : feats});
    }
    fs::create_directories(opts.out_dir);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  }

  std::vector<std::string> errors(items.size());
  std::string pairs;
  std::map<std::string, std::size_t> seen_stems;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    try {
      const auto idx = pool->IndexOf(item.speaker);
      if (!idx) throw Error(fmt::format("no reference set for speaker '{}'", item.speaker));
      const std::string stem = item.features.stem().string();
      if (seen_stems[stem]++ > 0) throw Error(fmt::format("duplicate utterance stem '{}'", stem));
      const auto& spk = pool->speaker(*idx);
      const auto source = ReadFeatures(item.features);
      const auto match = KnnMatch(source, ReferenceView{spk.features, spk.row_norms}, opts.k);
      const auto out = opts.out_dir / (stem + ".saltfeat");
      WriteFeatures(match.matched, out);
      pairs += fmt::format("{}\t{}\n", out.string(), item.audio.string());
    } catch (const std::exception& e) {
      errors[i] = WithPath(item.features, e.what());
    }
  }
  try {
    WriteText(pairs, opts.out_dir / "pairs.tsv");
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return ReportFailures(errors, items.size());
}

namespace {

std::vector<std::pair<fs::path, fs::path>> ReadPairList(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  const auto base = path.parent_path();
  auto resolve = [&](fs::path p) { return p.is_relative() ? base / p : p; };
  std::vector<std::pair<fs::path, fs::path>> pairs;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(fmt::format("{}:{}: expected original<TAB>anonymized", path.string(), lineno));
    }
    pairs.emplace_back(resolve(line.substr(0, tab)), resolve(line.substr(tab + 1)));
  }
  return pairs;
}

// Mean per-utterance pitch correlation over an original/anonymized pair list.
// Entries are .wav files (tracked with EstimateF0) or one-value-per-line F0 tracks.
double MeanPitchCorrelation(const fs::path& pair_list, const F0Params& f0) {
  auto load = [&](const fs::path& p) {
    if (p.extension() == ".wav") {
      const auto wave = ReadWav(p);
      return EstimateF0(wave.samples, wave.sample_rate, f0);
    }
    return ReadPitchTrack(p, 1000.0 / f0.hop_ms);
  };
  double total = 0.0;
  std::size_t used = 0, skipped = 0;
  for (const auto& [orig, anon] : ReadPairList(pair_list)) {
    try {
      total += PitchCorrelation(load(orig), load(anon));
      ++used;
    } catch (const Error& e) {
      spdlog::warn("{} vs {}: {}", orig.string(), anon.string(), e.what());
      ++skipped;
    }
  }
  if (used == 0) throw Error(fmt::format("{}: no usable utterance pairs", pair_list.string()));
  if (skipped > 0) spdlog::warn("{}: skipped {} of {} pairs", pair_list.string(), skipped, used + skipped);
  return total / static_cast<double>(used);
}

double SubsetGainVd(const fs::path& dir) {
  const auto orig = ReadEmbeddingDir(dir / "orig");
  const auto anon = ReadEmbeddingDir(dir / "anon");
  return GainVoiceDistinctiveness(ComputeSimilarityMatrix(anon, anon),
                                  ComputeSimilarityMatrix(orig, orig));
}

std::string SubsetName(const fs::path& p) {
  const auto name = p.filename().empty() ? p.parent_path().filename() : p.filename();
  return fs::path(name).stem().string();
}

}  // namespace

int EvalCommand(const EvalOptions& opts) {
  InitLogging();
  static const std::vector<std::string> kMetrics = {"eer", "pitch", "gvd", "values"};
  if (std::find(kMetrics.begin(), kMetrics.end(), opts.metric) == kMetrics.end()) {
    spdlog::error("unknown metric '{}'", opts.metric);
    return kExitUsage;
  }
  if (opts.inputs.empty()) {
    spdlog::error("eval needs at least one input");
    return kExitUsage;
  }

  std::vector<std::pair<std::string, double>> subsets;
  try {
    for (const auto& input : opts.inputs) {
      const fs::path path(input);
      if (opts.metric == "values") {
        for (auto& nv : ReadNamedValues(path)) subsets.push_back(std::move(nv));
      } else if (opts.metric == "eer") {
        subsets.emplace_back(SubsetName(path), 100.0 * ComputeEer(ReadScoreFile(path)).eer);
      } else if (opts.metric == "pitch") {
        subsets.emplace_back(SubsetName(path), MeanPitchCorrelation(path, opts.f0));
      } else {
        subsets.emplace_back(SubsetName(path), SubsetGainVd(path));
      }
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }

  std::vector<double> weights;
  try {
    if (opts.weights_file) {
      weights = ReadWeights(*opts.weights_file);
    } else if (subsets.size() == kVpcSubsetWeights.size()) {
      weights.assign(kVpcSubsetWeights.begin(), kVpcSubsetWeights.end());
    } else if (subsets.size() == 1) {
      weights = {1.0};
    } else {
      throw InvalidArgument(fmt::format(
          "{} subsets: pass --weights-file (defaults exist only for 1 or 6 subsets)",
          subsets.size()));
    }
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  }

  MetricReport report;
  try {
    report = Aggregate(opts.metric, std::move(subsets), std::move(weights));
  } catch (const InvalidArgument& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  }

  std::string table = fmt::format("{:<24} {:>8} {:>12}\n", "subset", "weight", opts.metric);
  for (std::size_t i = 0; i < report.subsets.size(); ++i) {
    table += fmt::format("{:<24} {:>8.4f} {:>12.4f}\n", report.subsets[i].first,
                         report.weights[i], report.subsets[i].second);
  }
  table += fmt::format("{:<24} {:>8} {:>12.4f}\n", "weighted average", "", report.value);
  fmt::print("{}", table);
  if (opts.out) {
    try {
      WriteText(FormatReport(report), *opts.out);
    } catch (const Error& e) {
      spdlog::error("{}", e.what());
      return kExitFailure;
    }
  }
  return kExitOk;
}

int PcaCommand(const PcaOptions& opts) {
  InitLogging();
  if (opts.dumps.empty()) {
    spdlog::error("pca needs at least one embedding dump");
    return kExitUsage;
  }
  try {
    std::vector<std::string> labels;
    std::vector<FeatureMatrix> parts;
    for (const auto& dump : opts.dumps) {
      parts.push_back(ReadFeatures(dump));
      labels.insert(labels.end(), parts.back().rows(), dump.stem().string());
    }
    const auto result = PcaProject(FeatureMatrix::Concatenate(parts), opts.dims);
    std::string text;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      text += labels[i];
      for (double v : result.projected[i]) text += fmt::format("\t{:.9g}", v);
      text += '\n';
    }
    WriteText(text, opts.out);
    for (std::size_t c = 0; c < result.explained_ratio.size(); ++c) {
      fmt::print("explained_ratio.{}\t{:.6f}\n", c + 1, result.explained_ratio[c]);
    }
  } catch (const std::exception& e) {
    spdlog::error("pca failed: {}", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace salt::cli
