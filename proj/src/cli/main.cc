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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "salt/cli.h"
#include "salt/common.h"
#include "spdlog/spdlog.h"

namespace salt::cli {

int Main(int argc, char** argv) {
  InitLogging();
  CLI::App app{"salt: latent-space speaker anonymization and voice privacy metrics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file mirroring the flags (flags win)");
  std::string save_config;
  app.add_option("--save-config", save_config, "Write the effective configuration and exit")
      ->configurable(false);

  BuildPoolOptions pool_opts;
  auto* build = app.add_subcommand("build-pool", "Sample a reference speaker pool from a manifest");
  build->add_option("--manifest", pool_opts.manifest, "speaker<TAB>path manifest")->required();
  build->add_option("--out", pool_opts.out, "Pool archive to write")->required();
  build->add_option("--n-speakers", pool_opts.n_speakers, "Speakers to sample (default 50)");
  build->add_option("--n-utts", pool_opts.n_utterances, "Utterances per speaker (default 50)");
  build->add_option("--seed", pool_opts.seed, "Sampling seed");

  AnonymizeOptions anon_opts;
  std::string mode = "utterance";
  auto* anon = app.add_subcommand("anonymize", "Anonymize every .saltfeat file in a directory");
  anon->add_option("--input", anon_opts.input_dir, "Directory of source .saltfeat files")->required();
  anon->add_option("--pool", anon_opts.pool, "Pool archive")->required();
  anon->add_option("--out", anon_opts.out_dir, "Output directory")->required();
  anon->add_option("--k", anon_opts.blend.k, "Neighbors per kNN match")->capture_default_str();
  anon->add_option("--m", anon_opts.blend.m, "Reference speakers per pseudo speaker")->capture_default_str();
  anon->add_option("--scale", anon_opts.blend.scale, "Extrapolation scale s >= 0")->capture_default_str();
  anon->add_option("--preserve", anon_opts.blend.preserve, "Source preservation p in [0,1]")
      ->capture_default_str();
  anon->add_option("--seed", anon_opts.blend.seed, "Base seed")->capture_default_str();
  anon->add_option("--workers", anon_opts.workers, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  anon->add_option("--mode", mode, "Pseudo-speaker assignment")
      ->check(CLI::IsMember({"utterance", "speaker"}))->capture_default_str();
  anon->add_option("--utt2spk", anon_opts.utt2spk, "utt spk mapping for --mode speaker");

  PrematchOptions pre_opts;
  auto* pre = app.add_subcommand("prematch", "kNN-reconstruct training features against their own speaker");
  pre->add_option("--manifest", pre_opts.manifest, "speaker<TAB>features[<TAB>audio]")->required();
  pre->add_option("--pool", pre_opts.pool, "Reference archive keyed by speaker")->required();
  pre->add_option("--out", pre_opts.out_dir, "Output directory")->required();
  pre->add_option("--k", pre_opts.k, "Neighbors per kNN match")->capture_default_str();

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Evaluate a metric per subset and aggregate");
  eval->add_option("--metric", eval_opts.metric, "eer | pitch | gvd | values")
      ->required()->check(CLI::IsMember({"eer", "pitch", "gvd", "values"}));
  eval->add_option("--weights-file", eval_opts.weights_file, "Subset weights, one per line");
  eval->add_option("--out", eval_opts.out, "Machine-readable key<TAB>value report");
  eval->add_option("--voicing-threshold", eval_opts.f0.voicing_threshold)->capture_default_str();
  eval->add_option("inputs", eval_opts.inputs, "One input per subset")->required();

  PcaOptions pca_opts;
  auto* pca = app.add_subcommand("pca", "Project speaker embedding dumps to 2-D plot data");
  pca->add_option("--out", pca_opts.out, "speaker<TAB>x<TAB>y output")->required();
  pca->add_option("dumps", pca_opts.dumps, "One .saltfeat per speaker")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!save_config.empty()) {
    // Every option with a value, defaults included; unset ones are left out
    // so that reloading the file does not assign empty strings.
    std::istringstream all(app.config_to_str(true, false));
    std::ofstream out(save_config);
    for (std::string line; std::getline(all, line);) {
      if (line.ends_with("=\"\"") || line.ends_with("=''")) continue;
      out << line << '\n';
    }
    return out ? kExitOk : kExitFailure;
  }

  if (*build) return BuildPoolCommand(pool_opts);
  if (*anon) {
    anon_opts.mode = mode == "speaker" ? AssignMode::kSpeaker : AssignMode::kUtterance;
    return AnonymizeCommand(anon_opts);
  }
  if (*pre) return PrematchCommand(pre_opts);
  if (*eval) return EvalCommand(eval_opts);
  if (*pca) return PcaCommand(pca_opts);
  return kExitUsage;
}

}  // namespace salt::cli
