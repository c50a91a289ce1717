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

#include "salt/blender.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "fmt/format.h"
#include "fmt/ranges.h"
#include "salt/common.h"
#include "salt/matcher.h"

namespace salt {

void BlendConfig::Validate(std::size_t pool_size) const {
  if (m < 1 || m > pool_size) {
    throw InvalidArgument(fmt::format("m={} must be in [1, {}]", m, pool_size));
  }
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument(fmt::format("scale {} must be a finite value >= 0", scale));
  }
  if (!(preserve >= 0.0 && preserve <= 1.0)) {
    throw InvalidArgument(fmt::format("preserve {} must be in [0, 1]", preserve));
  }
}

std::vector<std::string> SampleSubset(const SpeakerPool& pool, std::size_t m,
                                      SplitMix64& rng) {
  if (m > pool.size()) {
    throw InvalidArgument(fmt::format("m={} exceeds pool size {}", m, pool.size()));
  }
  std::vector<std::string> ids;
  for (std::size_t i : SampleWithoutReplacement(pool.size(), m, rng)) {
    ids.push_back(pool.speaker(i).id);
  }
  return ids;
}

std::vector<double> Softmax(std::span<const double> logits) {
  if (logits.empty()) throw InvalidArgument("softmax of empty vector");
  const double hi = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - hi);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

WeightVector SampleWeights(std::size_t m, SplitMix64& rng) {
  if (m < 1) throw InvalidArgument("m must be >= 1");
  std::vector<double> logits(m);
  for (double& l : logits) l = rng.Gaussian();
  return {{}, Softmax(logits)};
}

WeightVector ExtrapolateWeights(const WeightVector& w, double scale) {
  WeightVector out = w;
  // Written as w + s (w - 1/m) so s = 0 and uniform w come back bit-exact.
  const double uniform = 1.0 / static_cast<double>(w.weights.size());
  for (double& v : out.weights) v += scale * (v - uniform);
  return out;
}

FeatureMatrix Blend(std::span<const FeatureMatrix> matched, std::span<const double> weights) {
  if (matched.empty()) throw InvalidArgument("blend needs at least one matrix");
  if (matched.size() != weights.size()) {
    throw InvalidArgument(fmt::format("blend got {} matrices but {} weights", matched.size(),
                                      weights.size()));
  }
  const auto& first = matched.front();
  for (const auto& mtx : matched) {
    if (!mtx.SameShape(first)) {
      throw InvalidArgument(fmt::format("blend shape mismatch: {}x{} vs {}x{}", mtx.rows(),
                                        mtx.dims(), first.rows(), first.dims()));
    }
  }
  FeatureMatrix out(first.rows(), first.dims());
  auto dst = out.data();
  for (std::size_t e = 0; e < dst.size(); ++e) {
    double acc = 0.0;
    for (std::size_t s = 0; s < matched.size(); ++s) acc += weights[s] * matched[s].data()[e];
    dst[e] = static_cast<float>(acc);
  }
  return out;
}

FeatureMatrix Preserve(const FeatureMatrix& source, const FeatureMatrix& blended, double p) {
  if (!source.SameShape(blended)) {
    throw InvalidArgument(fmt::format("preserve shape mismatch: {}x{} vs {}x{}", source.rows(),
                                      source.dims(), blended.rows(), blended.dims()));
  }
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must be in [0, 1]");
  FeatureMatrix out(source.rows(), source.dims());
  auto dst = out.data();
  const auto s = source.data();
  const auto d = blended.data();
  for (std::size_t e = 0; e < dst.size(); ++e) {
    dst[e] = static_cast<float>(p * s[e] + (1.0 - p) * d[e]);
  }
  return out;
}

PseudoSpeaker SamplePseudoSpeaker(const SpeakerPool& pool, const BlendConfig& config,
                                  SplitMix64& rng) {
  config.Validate(pool.size());
  PseudoSpeaker ps;
  ps.pool_indices = SampleWithoutReplacement(pool.size(), config.m, rng);
  ps.raw = SampleWeights(config.m, rng);
  for (std::size_t i : ps.pool_indices) ps.raw.speaker_ids.push_back(pool.speaker(i).id);
  ps.extrapolated = ExtrapolateWeights(ps.raw, config.scale);
  return ps;
}

FeatureMatrix ApplyPseudoSpeaker(const FeatureMatrix& source, const SpeakerPool& pool,
                                 const PseudoSpeaker& pseudo, const BlendConfig& config) {
  config.Validate(pool.size());
  if (source.dims() != pool.dims()) {
    throw InvalidArgument(fmt::format("source dims {} != pool dims {}", source.dims(),
                                      pool.dims()));
  }
  std::vector<FeatureMatrix> matched;
  matched.reserve(pseudo.pool_indices.size());
  for (std::size_t i : pseudo.pool_indices) {
    const auto& spk = pool.speaker(i);
    matched.push_back(KnnMatch(source, ReferenceView{spk.features, spk.row_norms}, config.k).matched);
  }
  return Preserve(source, Blend(matched, pseudo.extrapolated.weights), config.preserve);
}

AnonymizeResult Anonymize(const FeatureMatrix& source, const SpeakerPool& pool,
                          const BlendConfig& config, SplitMix64& rng, uint64_t stream) {
  Provenance prov;
  prov.seed = config.seed;
  prov.stream = stream;
  prov.config = config;
  prov.pseudo = SamplePseudoSpeaker(pool, config, rng);
  auto features = ApplyPseudoSpeaker(source, pool, prov.pseudo, config);
  return {std::move(features), std::move(prov)};
}

namespace {

std::string JoinDoubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += fmt::format("{:.17g}", v[i]);
  }
  return out;
}

std::vector<std::string> Split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

std::string FormatProvenance(const Provenance& p) {
  std::string out;
  out += fmt::format("seed\t{}\n", p.seed);
  out += fmt::format("stream\t{}\n", p.stream);
  out += fmt::format("mode\t{}\n", p.mode);
  out += fmt::format("k\t{}\n", p.config.k);
  out += fmt::format("m\t{}\n", p.config.m);
  out += fmt::format("scale\t{:.17g}\n", p.config.scale);
  out += fmt::format("preserve\t{:.17g}\n", p.config.preserve);
  out += fmt::format("pool_indices\t{}\n", fmt::join(p.pseudo.pool_indices, " "));
  out += fmt::format("speakers\t{}\n", fmt::join(p.pseudo.raw.speaker_ids, " "));
  out += fmt::format("weights\t{}\n", JoinDoubles(p.pseudo.raw.weights));
  out += fmt::format("extrapolated\t{}\n", JoinDoubles(p.pseudo.extrapolated.weights));
  return out;
}

Provenance ParseProvenance(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(fmt::format("bad provenance line '{}'", line));
    kv[line.substr(0, tab)] = line.substr(tab + 1);
  }
  auto get = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(fmt::format("provenance missing '{}'", key));
    return it->second;
  };
  Provenance p;
  try {
    p.seed = std::stoull(get("seed"));
    p.stream = std::stoull(get("stream"));
    p.mode = get("mode");
    p.config.k = std::stoull(get("k"));
    p.config.m = std::stoull(get("m"));
    p.config.scale = std::stod(get("scale"));
    p.config.preserve = std::stod(get("preserve"));
    p.config.seed = p.seed;
    for (const auto& t : Split(get("pool_indices"))) p.pseudo.pool_indices.push_back(std::stoull(t));
    p.pseudo.raw.speaker_ids = Split(get("speakers"));
    p.pseudo.extrapolated.speaker_ids = p.pseudo.raw.speaker_ids;
    for (const auto& t : Split(get("weights"))) p.pseudo.raw.weights.push_back(std::stod(t));
    for (const auto& t : Split(get("extrapolated"))) {
      p.pseudo.extrapolated.weights.push_back(std::stod(t));
    }
  } catch (const std::logic_error& e) {
    throw Error(fmt::format("malformed provenance: {}", e.what()));
  }
  return p;
}

}  // namespace salt
