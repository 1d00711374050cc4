// Copyright 2026 The EcoLink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <random>

#include "core/errors.h"
#include "core/vector_index.h"
#include "doctest.h"
#include "support/oracles.h"
#include "support/test_support.h"

namespace ecolink {
namespace {

using testing::TempDir;

ActivityIndex IndexOf(const testing::Corpus &corpus, const std::string &fp = "test") {
  ActivityIndex index(corpus.dim, fp);
  for (size_t i = 0; i < corpus.ids.size(); ++i) index.Add(corpus.ids[i], corpus.vectors[i]);
  return index;
}

std::vector<float> RandomQuery(std::mt19937_64 &rng, size_t dim) {
  std::normal_distribution<float> normal;
  std::vector<float> q(dim);
  for (float &v : q) v = normal(rng);
  return q;
}

const LcaActivity kSteel{
    "a1", "Steel production, electric arc furnace, EU",
    "This process models the production of steel in an electric arc furnace.", 1.4,
    "kg CO2e/kg"};

TEST_SUITE("vector-index") {

TEST_CASE("single activity retrieves itself") {
  LocalHashEmbedder embedder;
  const ActivityIndex index = BuildIndex({kSteel}, embedder);
  REQUIRE(index.size() == 1);
  const auto top = index.TopK(embedder.EmbedOne(ActivityText(kSteel)), 5);
  REQUIRE(top.size() == 1);
  CHECK(top[0].activity_id == "a1");
  CHECK(top[0].score >= 0.99);
  CHECK(index.fingerprint() == "local-hash-256");
}

TEST_CASE("activity text is name, newline, description") {
  CHECK(ActivityText(kSteel).rfind(
            "Steel production, electric arc furnace, EU\nThis process models", 0) == 0);
}

TEST_CASE("build keeps input order") {
  std::vector<LcaActivity> activities;
  for (int i = 0; i < 100; ++i) {
    activities.push_back({"z" + std::to_string(99 - i), "activity " + std::to_string(i),
                          "synthetic", 1.0, "kg"});
  }
  LocalHashEmbedder embedder(32);
  const ActivityIndex index = BuildIndex(activities, embedder);
  REQUIRE(index.size() == 100);
  for (int i = 0; i < 100; ++i) CHECK(index.id(i) == activities[i].id);
  CHECK_THROWS_AS(BuildIndex({}, embedder), Error);
}

TEST_CASE("backend failures carry activity ids") {
  testing::TableEmbedder table({});
  try {
    BuildIndex({kSteel}, table);
    FAIL("expected an error");
  } catch (const BackendError &e) {
    CHECK(std::string(e.what()).find("a1") != std::string::npos);
  }
}

TEST_CASE("k larger than the corpus ranks everything") {
  std::mt19937_64 rng(1);
  const auto corpus = testing::RandomCorpus(rng, 8, 7);
  const ActivityIndex index = IndexOf(corpus);
  CHECK(index.TopK(RandomQuery(rng, 8), 100).size() == 7);
}

TEST_CASE("a stored vector is its own best match") {
  std::mt19937_64 rng(2);
  const auto corpus = testing::RandomCorpus(rng, 64, 40);
  const ActivityIndex index = IndexOf(corpus);
  const auto top = index.TopK(corpus.vectors[17], 1);
  CHECK(top[0].score == doctest::Approx(1.0).epsilon(1e-6));
  // Duplicates of entry 17 tie with it; the smallest id among them wins.
  std::string expected = corpus.ids[17];
  for (size_t i = 0; i < corpus.ids.size(); ++i) {
    if (corpus.vectors[i] == corpus.vectors[17]) expected = std::min(expected, corpus.ids[i]);
  }
  CHECK(top[0].activity_id == expected);
}

TEST_CASE("top_k equals a brute-force sort on a 50-vector corpus") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    const auto corpus = testing::RandomCorpus(rng, 16, 50);
    const ActivityIndex index = IndexOf(corpus);
    const auto query = RandomQuery(rng, 16);
    CHECK(index.TopK(query, 5) == testing::BruteForceTopK(corpus, query, 5));
    CHECK(index.TopK(query, 50) == testing::BruteForceTopK(corpus, query, 50));
  }
}

TEST_CASE("ties break by ascending id") {
  ActivityIndex index(2, "t");
  const std::vector<float> v = {1.0f, 0.0f};
  index.Add("b", v);
  index.Add("c", v);
  index.Add("a", v);
  const auto top = index.TopK(v, 3);
  CHECK(top[0].activity_id == "a");
  CHECK(top[1].activity_id == "b");
  CHECK(top[2].activity_id == "c");
}

TEST_CASE("ranking is invariant under positive query scaling") {
  std::mt19937_64 rng(4);
  const auto corpus = testing::RandomCorpus(rng, 32, 200);
  const ActivityIndex index = IndexOf(corpus);
  for (int round = 0; round < 20; ++round) {
    auto query = RandomQuery(rng, 32);
    std::vector<std::string> before, after;
    for (const auto &s : index.TopK(query, 10)) before.push_back(s.activity_id);
    for (float &v : query) v *= 4.0f;  // power of two keeps float products exact
    for (const auto &s : index.TopK(query, 10)) after.push_back(s.activity_id);
    CHECK(before == after);
  }
}

TEST_CASE("add validates its input") {
  ActivityIndex index(2, "t");
  index.Add("a", std::vector<float>{1.0f, 0.0f});
  CHECK_THROWS_AS(index.Add("a", std::vector<float>{0.0f, 1.0f}), Error);
  CHECK_THROWS_AS(index.Add("b", std::vector<float>{1.0f, 0.0f, 0.0f}), Error);
  CHECK_THROWS_AS(index.Add("c", std::vector<float>{2.0f, 0.0f}), Error);
  CHECK_THROWS_AS(index.TopK(std::vector<float>{1.0f}, 1), Error);
  CHECK_THROWS_AS(index.TopK(std::vector<float>{1.0f, 0.0f}, 0), Error);
  CHECK(index.Contains("a"));
  CHECK_FALSE(index.Contains("b"));
}

TEST_CASE("save and load round-trip") {
  TempDir dir;
  std::mt19937_64 rng(5);
  for (size_t dim : {8u, 64u, 256u}) {
    const auto corpus = testing::RandomCorpus(rng, dim, 30);
    const ActivityIndex index = IndexOf(corpus, "local-hash-" + std::to_string(dim));
    SaveIndex(index, dir / "idx.bin");
    const LoadedIndex loaded = LoadIndex(dir / "idx.bin", index.fingerprint());
    CHECK(loaded.index == index);
    CHECK_FALSE(loaded.fingerprint_mismatch);
    CHECK(loaded.warning.empty());
  }
}

TEST_CASE("saving is byte-deterministic") {
  TempDir dir;
  LocalHashEmbedder embedder;
  SaveIndex(BuildIndex({kSteel}, embedder), dir / "a.bin");
  SaveIndex(BuildIndex({kSteel}, embedder), dir / "b.bin");
  CHECK(testing::Slurp(dir / "a.bin") == testing::Slurp(dir / "b.bin"));
}

TEST_CASE("damaged files are integrity errors") {
  TempDir dir;
  std::mt19937_64 rng(6);
  const ActivityIndex index = IndexOf(testing::RandomCorpus(rng, 8, 10));
  SaveIndex(index, dir / "idx.bin");
  const std::string bytes = testing::Slurp(dir / "idx.bin");

  auto expect_integrity = [&](const std::string &damaged) {
    testing::Spit(dir / "bad.bin", damaged);
    try {
      LoadIndex(dir / "bad.bin");
      FAIL("expected an integrity error");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kIntegrity);
    }
  };
  for (size_t cut : {size_t{0}, size_t{5}, size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    CAPTURE(cut);
    expect_integrity(bytes.substr(0, cut));
  }
  std::string flipped = bytes;
  flipped[flipped.size() - 3] ^= 0x10;
  expect_integrity(flipped);
  expect_integrity(bytes + "x");
  CHECK_THROWS_AS(LoadIndex(dir / "missing.bin"), Error);
}

TEST_CASE("fingerprint mismatch is reported") {
  TempDir dir;
  LocalHashEmbedder embedder;
  SaveIndex(BuildIndex({kSteel}, embedder), dir / "idx.bin");
  const LoadedIndex loaded = LoadIndex(dir / "idx.bin", std::string("remote:gte-large-en-v1.5"));
  CHECK(loaded.fingerprint_mismatch);
  CHECK(loaded.warning.find("local-hash-256") != std::string::npos);
  CHECK(loaded.warning.find("remote:gte-large-en-v1.5") != std::string::npos);
  CHECK(loaded.index.size() == 1);
  CHECK_FALSE(LoadIndex(dir / "idx.bin").fingerprint_mismatch);
}

}  // TEST_SUITE

}  // namespace
}  // namespace ecolink
