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
#include <functional>
#include <set>
#include <fstream>
#include <limits>

#include "fmt/format.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "salt/common.h"
#include "test_util.h"

namespace salt {
namespace {

using ::testing::HasSubstr;
using testing::TempDir;

std::vector<char> FileBytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void PutBytes(const std::filesystem::path& p, const std::vector<char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string ErrorOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

bool BitEqual(const FeatureMatrix& a, const FeatureMatrix& b) {
  return a.rows() == b.rows() && a.dims() == b.dims() &&
         std::memcmp(a.data().data(), b.data().data(), a.data().size() * 4) == 0;
}

TEST(FeatureFileTest, SmallMatrixGoldenBytes) {
  TempDir dir("feat");
  const auto m = FeatureMatrix::FromRows({{1, 2, 3}, {4, 5, 6}});
  WriteFeatures(m, dir / "a.saltfeat");
  const auto bytes = FileBytes(dir / "a.saltfeat");
  ASSERT_EQ(bytes.size(), 8u + 4 + 4 + 8 + 24);
  const std::vector<unsigned char> header = {'S', 'A', 'L', 'T', 'F', 'E', 'A', 'T',
                                             1,   0,   0,   0,   3,   0,   0,   0,
                                             2,   0,   0,   0,   0,   0,   0,   0};
  EXPECT_EQ(std::memcmp(bytes.data(), header.data(), header.size()), 0);
  // 1.0f little-endian
  EXPECT_EQ(static_cast<unsigned char>(bytes[24 + 3]), 0x3F);
  EXPECT_EQ(static_cast<unsigned char>(bytes[24 + 2]), 0x80);
  EXPECT_TRUE(BitEqual(ReadFeatures(dir / "a.saltfeat"), m));
}

TEST(FeatureFileTest, EmptyMatrix) {
  TempDir dir("feat");
  WriteFeatures(FeatureMatrix(0, 768), dir / "e.saltfeat");
  EXPECT_EQ(FileBytes(dir / "e.saltfeat").size(), kFeatureHeaderBytes);
  const auto back = ReadFeatures(dir / "e.saltfeat");
  EXPECT_EQ(back.rows(), 0u);
  EXPECT_EQ(back.dims(), 768u);
}

TEST(FeatureFileTest, NanRejectedWithoutCreatingFile) {
  TempDir dir("feat");
  auto m = FeatureMatrix::FromRows({{1, std::numeric_limits<float>::quiet_NaN()}});
  EXPECT_THROW(WriteFeatures(m, dir / "nan.saltfeat"), InvalidArgument);
  EXPECT_FALSE(std::filesystem::exists(dir / "nan.saltfeat"));
  m(0, 1) = std::numeric_limits<float>::infinity();
  EXPECT_THROW(WriteFeatures(m, dir / "inf.saltfeat"), InvalidArgument);
}

TEST(FeatureFileTest, WrongMagic) {
  TempDir dir("feat");
  WriteFeatures(FeatureMatrix::FromRows({{1, 2}}), dir / "x.saltfeat");
  auto bytes = FileBytes(dir / "x.saltfeat");
  std::memcpy(bytes.data(), "XXXXXXXX", 8);
  PutBytes(dir / "x.saltfeat", bytes);
  EXPECT_THAT(ErrorOf([&] { ReadFeatures(dir / "x.saltfeat"); }), HasSubstr("not a feature file"));
}

TEST(FeatureFileTest, TruncatedPayload) {
  TempDir dir("feat");
  std::mt19937_64 gen(3);
  WriteFeatures(testing::RandomMatrix(10, 8, gen), dir / "t.saltfeat");
  auto bytes = FileBytes(dir / "t.saltfeat");
  bytes.resize(kFeatureHeaderBytes + (bytes.size() - kFeatureHeaderBytes) / 2);
  PutBytes(dir / "t.saltfeat", bytes);
  EXPECT_THAT(ErrorOf([&] { ReadFeatures(dir / "t.saltfeat"); }), HasSubstr("corrupt length"));
  bytes.resize(12);
  PutBytes(dir / "t.saltfeat", bytes);
  EXPECT_THAT(ErrorOf([&] { ReadFeatures(dir / "t.saltfeat"); }), HasSubstr("corrupt length"));
}

TEST(FeatureFileTest, VersionMismatch) {
  TempDir dir("feat");
  WriteFeatures(FeatureMatrix::FromRows({{1, 2}}), dir / "v.saltfeat");
  auto bytes = FileBytes(dir / "v.saltfeat");
  bytes[8] = 2;
  PutBytes(dir / "v.saltfeat", bytes);
  EXPECT_THAT(ErrorOf([&] { ReadFeatures(dir / "v.saltfeat"); }), HasSubstr("version mismatch"));
}

TEST(FeatureFileTest, MissingFile) {
  EXPECT_THROW(ReadFeatures("/nonexistent/dir/none.saltfeat"), Error);
}

TEST(FeatureFileTest, RoundTripIsBitExactOverRandomShapes) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> rows(0, 40), dims(1, 33);
  std::uniform_int_distribution<uint32_t> bits;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = rows(gen), d = dims(gen);
    std::vector<float> data(r * d);
    for (float& v : data) {
      // Arbitrary finite bit patterns: subnormals, -0.0, extremes.
      float f;
      do {
        f = std::bit_cast<float>(bits(gen));
      } while (!std::isfinite(f));
      v = f;
    }
    const FeatureMatrix m(r, d, std::move(data));
    ASSERT_TRUE(BitEqual(DecodeFeatures(EncodeFeatures(m)), m)) << "trial " << trial;
  }
}

TEST(SpeakerPoolTest, ValidatesMembers) {
  using Members = std::vector<std::pair<std::string, FeatureMatrix>>;
  EXPECT_THROW(SpeakerPool(Members{}), InvalidArgument);
  EXPECT_THROW(SpeakerPool(Members{{"a", FeatureMatrix::FromRows({{1, 2}})},
                                   {"a", FeatureMatrix::FromRows({{1, 2}})}}),
               InvalidArgument);
  EXPECT_THROW(SpeakerPool(Members{{"a", FeatureMatrix::FromRows({{1, 2}})},
                                   {"b", FeatureMatrix::FromRows({{1, 2, 3}})}}),
               InvalidArgument);
  EXPECT_THROW(SpeakerPool(Members{{"a", FeatureMatrix(0, 2)}}), InvalidArgument);
}

TEST(SpeakerPoolTest, RowNormsPopulated) {
  std::mt19937_64 gen(5);
  SpeakerPool pool({{"a", testing::RandomMatrix(7, 5, gen)}});
  const auto& s = pool.speaker(0);
  for (std::size_t i = 0; i < s.features.rows(); ++i) {
    double acc = 0.0;
    for (float v : s.features.row(i)) acc += double(v) * v;
    EXPECT_NEAR(s.row_norms[i], std::sqrt(acc), 1e-6 * std::sqrt(acc));
  }
}

TEST(SpeakerPoolTest, ArchiveRoundTrip) {
  std::mt19937_64 gen(6);
  SpeakerPool pool({{"b", testing::RandomMatrix(4, 3, gen)}, {"a", testing::RandomMatrix(9, 3, gen)}});
  const auto back = DecodePool(EncodePool(pool));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.speaker(i).id, pool.speaker(i).id);
    EXPECT_TRUE(BitEqual(back.speaker(i).features, pool.speaker(i).features));
    EXPECT_EQ(back.speaker(i).row_norms, pool.speaker(i).row_norms);
  }
  auto bytes = EncodePool(pool);
  bytes.resize(bytes.size() - 5);
  EXPECT_THROW(DecodePool(bytes), Error);
  bytes[0] = 'X';
  EXPECT_THROW(DecodePool(bytes), Error);
}

// Writes n_speakers x n_utts single-frame feature files and a manifest.
PoolManifest MakeCorpus(const TempDir& dir, std::size_t n_speakers, std::size_t n_utts,
                        std::size_t dims = 4) {
  PoolManifest manifest;
  for (std::size_t s = 0; s < n_speakers; ++s) {
    ManifestEntry e{fmt::format("spk{:03}", s), {}};
    for (std::size_t u = 0; u < n_utts; ++u) {
      std::vector<float> row(dims, static_cast<float>(s));
      row[0] = static_cast<float>(u);
      const auto p = dir / fmt::format("spk{:03}_{:02}.saltfeat", s, u);
      WriteFeatures(FeatureMatrix(1, dims, row), p);
      e.paths.push_back(p);
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

std::vector<std::string> Ids(const SpeakerPool& pool) {
  std::vector<std::string> ids;
  for (const auto& s : pool.speakers()) ids.push_back(s.id);
  return ids;
}

TEST(BuildPoolTest, AllSpeakersWhenRequestingEveryone) {
  TempDir dir("pool");
  auto manifest = MakeCorpus(dir, 3, 2);
  manifest.sampling = {3, 2, 0};
  for (uint64_t seed : {0u, 1u, 99u}) {
    SplitMix64 rng(seed);
    const auto pool = BuildPool(manifest, rng);
    EXPECT_EQ(Ids(pool), (std::vector<std::string>{"spk000", "spk001", "spk002"}));
    EXPECT_EQ(pool.speaker(0).features.rows(), 2u);
  }
}

TEST(BuildPoolTest, DeterministicUnderSeed) {
  TempDir dir("pool");
  auto manifest = MakeCorpus(dir, 10, 6);
  manifest.sampling = {4, 3, 0};
  SplitMix64 a(21), b(21);
  EXPECT_EQ(EncodePool(BuildPool(manifest, a)), EncodePool(BuildPool(manifest, b)));
}

TEST(BuildPoolTest, ManifestOrderIsIrrelevant) {
  TempDir dir("pool");
  auto manifest = MakeCorpus(dir, 9, 7);
  manifest.sampling = {4, 3, 0};
  auto shuffled = manifest;
  std::reverse(shuffled.entries.begin(), shuffled.entries.end());
  for (auto& e : shuffled.entries) std::rotate(e.paths.begin(), e.paths.begin() + 3, e.paths.end());
  SplitMix64 a(5), b(5);
  EXPECT_EQ(EncodePool(BuildPool(manifest, a)), EncodePool(BuildPool(shuffled, b)));
}

TEST(BuildPoolTest, SampledSubsetMatchesOracle) {
  TempDir dir("pool");
  auto manifest = MakeCorpus(dir, 100, 1);
  manifest.sampling = {50, 1, 7};
  SplitMix64 rng(7);
  const auto pool = BuildPool(manifest, rng);
  // Sorted draw of tests/oracles/pinned_stream.py for (n=100, m=50, seed=7).
  const std::vector<int> expected = {1,  2,  6,  7,  9,  12, 13, 19, 20, 21, 24, 25, 28,
                                     29, 31, 33, 34, 35, 37, 38, 40, 43, 44, 46, 47, 48,
                                     49, 51, 55, 56, 58, 59, 61, 62, 64, 68, 70, 73, 74,
                                     78, 80, 81, 88, 89, 90, 91, 92, 95, 96, 97};
  std::vector<std::string> ids;
  for (int i : expected) ids.push_back(fmt::format("spk{:03}", i));
  EXPECT_EQ(Ids(pool), ids);
}

TEST(BuildPoolTest, UtterancesSampledWithoutReplacement) {
  TempDir dir("pool");
  auto manifest = MakeCorpus(dir, 2, 8);
  manifest.sampling = {2, 5, 3};
  SplitMix64 rng(3);
  const auto pool = BuildPool(manifest, rng);
  for (const auto& s : pool.speakers()) {
    ASSERT_EQ(s.features.rows(), 5u);
    std::set<float> utt;
    for (std::size_t r = 0; r < 5; ++r) utt.insert(s.features(r, 0));
    EXPECT_EQ(utt.size(), 5u);
    EXPECT_TRUE(std::is_sorted(utt.begin(), utt.end()));
  }
}

TEST(BuildPoolTest, DeficitErrors) {
  TempDir dir("pool");
  auto manifest = MakeCorpus(dir, 10, 2);
  manifest.sampling = {50, 2, 0};
  SplitMix64 rng(0);
  EXPECT_THAT(ErrorOf([&] { BuildPool(manifest, rng); }), HasSubstr("short by 40"));
  manifest.sampling = {3, 5, 0};
  EXPECT_THAT(ErrorOf([&] { BuildPool(manifest, rng); }), HasSubstr("short by 3"));
}

TEST(BuildPoolTest, DimsMismatchNamesBothFiles) {
  TempDir dir("pool");
  auto manifest = MakeCorpus(dir, 2, 1, 4);
  WriteFeatures(FeatureMatrix(1, 6), manifest.entries[1].paths[0]);
  manifest.sampling = {2, 1, 0};
  SplitMix64 rng(0);
  const auto msg = ErrorOf([&] { BuildPool(manifest, rng); });
  EXPECT_THAT(msg, HasSubstr(manifest.entries[0].paths[0].string()));
  EXPECT_THAT(msg, HasSubstr(manifest.entries[1].paths[0].string()));
}

TEST(ManifestTest, ParsesHeaderAndResolvesRelativePaths) {
  TempDir dir("manifest");
  {
    std::ofstream out(dir / "m.tsv");
    out << "# toy corpus\n@n_speakers\t2\n@n_utterances\t1\n@seed\t17\n"
        << "b\tb1.saltfeat\na\t/abs/a1.saltfeat\nb\tsub/b2.saltfeat\n";
  }
  const auto m = ReadManifest(dir / "m.tsv");
  EXPECT_EQ(m.sampling.n_speakers, 2u);
  EXPECT_EQ(m.sampling.n_utterances, 1u);
  EXPECT_EQ(m.sampling.seed, 17u);
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0].speaker_id, "b");
  EXPECT_EQ(m.entries[0].paths.size(), 2u);
  EXPECT_EQ(m.entries[0].paths[1], dir.path() / "sub/b2.saltfeat");
  EXPECT_EQ(m.entries[1].paths[0], std::filesystem::path("/abs/a1.saltfeat"));

  WriteManifest(m, dir / "copy.tsv");
  const auto again = ReadManifest(dir / "copy.tsv");
  EXPECT_EQ(again.sampling.seed, 17u);
  EXPECT_EQ(again.entries[0].paths, m.entries[0].paths);
}

TEST(ManifestTest, RejectsMalformedLines) {
  TempDir dir("manifest");
  {
    std::ofstream out(dir / "bad.tsv");
    out << "a\tx.saltfeat\nno tab here\n";
  }
  EXPECT_THAT(ErrorOf([&] { ReadManifest(dir / "bad.tsv"); }), HasSubstr(":2:"));
}

}  // namespace
}  // namespace salt
