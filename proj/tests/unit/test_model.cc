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

#include "core/model.h"
#include "doctest.h"

namespace ecolink {
namespace {

TEST_SUITE("model") {

TEST_CASE("validate_bom accepts a Figure 2 row and the empty BOM") {
  const std::vector<BomEntry> bom = {{"c1", "WELLE", "C45+N", "Technikbau AG", 1.0}};
  CHECK(ValidateBom(bom).empty());
  CHECK(ValidateBom({}).empty());
}

TEST_CASE("validate_bom names the entry and field") {
  const std::vector<ValidationError> errors =
      ValidateBom({{"c1", "", "C45+N", "Technikbau AG", 1.0}});
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].id == "c1");
  CHECK(errors[0].field == "name");

  const auto dup = ValidateBom({{"c1", "A", "", "", 1.0}, {"c1", "B", "", "", 1.0}});
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].field == "id");

  const auto neg = ValidateBom({{"c9", "A", "", "", -1.0}});
  REQUIRE(neg.size() == 1);
  CHECK(neg[0].field == "quantity");
}

TEST_CASE("validate_config enforces ranges") {
  PipelineConfig config;
  CHECK(ValidateConfig(config).empty());
  config.datasheet_threshold = 1.5;
  config.top_k = 0;
  const auto errors = ValidateConfig(config);
  REQUIRE(errors.size() == 2);
  CHECK(errors[0].field == "datasheet_threshold");
  CHECK(errors[1].field == "top_k");
  config = PipelineConfig{};
  config.datasheet_threshold = -1.0;
  CHECK(ValidateConfig(config).empty());
}

TEST_CASE("validate_activities rejects duplicates and empty names") {
  CHECK(ValidateActivities({{"a1", "n", "d", 1.0, "kg"}}).empty());
  CHECK(ValidateActivities({{"a1", "n", "", 1.0, ""}, {"a1", "m", "", 1.0, ""}}).size() == 1);
  CHECK(ValidateActivities({{"a1", "", "", 1.0, ""}})[0].field == "name");
}

TEST_CASE("mode names round-trip") {
  for (Mode m : {Mode::kSemanticOnly, Mode::kLlm, Mode::kLlmDatasheet}) {
    CHECK(ParseMode(ModeName(m)) == m);
  }
  CHECK(ModeName(Mode::kLlmDatasheet) == "llm-datasheet");
  CHECK_FALSE(ParseMode("bogus").has_value());
}

TEST_CASE("decision source labels") {
  MappingDecision d;
  d.source = DecisionSource::kAcceptedRank;
  d.rank = 3;
  CHECK(d.SourceLabel() == "accepted_rank_3");
  d.source = DecisionSource::kExpertOverride;
  CHECK(d.SourceLabel() == "expert_override");
}

TEST_CASE("ranking order predicate") {
  CandidateRanking r;
  r.candidates = {{"a2", 0.9}, {"a1", 0.5}, {"a3", 0.5}};
  CHECK(IsWellOrdered(r, 5));
  CHECK_FALSE(IsWellOrdered(r, 2));
  std::swap(r.candidates[1], r.candidates[2]);
  CHECK_FALSE(IsWellOrdered(r, 5));
}

template <typename T>
T RoundTrip(const T &value) {
  return nlohmann::json::parse(nlohmann::json(value).dump()).get<T>();
}

TEST_CASE("serialization round-trips every domain type") {
  std::mt19937_64 rng(7);
  auto text = [&] {
    std::string s;
    const int len = static_cast<int>(rng() % 12);
    const char *alphabet[] = {"a", "Z", " ", ";", "\"", "\n", "Ä", "ß", "7", "é"};
    for (int i = 0; i < len; ++i) s += alphabet[rng() % 10];
    return s;
  };
  auto real = [&] { return static_cast<double>(rng() % 100000) / 7.0; };
  for (int i = 0; i < 200; ++i) {
    const BomEntry bom{text(), text(), text(), text(), real()};
    CHECK(RoundTrip(bom) == bom);
    const LcaActivity act{text(), text(), text(), real(), text()};
    CHECK(RoundTrip(act) == act);
    const Datasheet sheet{text(), text(), text()};
    CHECK(RoundTrip(sheet) == sheet);
    const GoldLabel gold{text(), text()};
    CHECK(RoundTrip(gold) == gold);
    CandidateRanking ranking{text(), text(), static_cast<Mode>(rng() % 3), {}};
    for (int k = 0; k < 5; ++k) ranking.candidates.push_back({text(), real() / 1e5});
    CHECK(RoundTrip(ranking) == ranking);
    MappingDecision decision;
    decision.component_id = text();
    decision.chosen_activity_id = text();
    decision.source = rng() % 2 ? DecisionSource::kAcceptedRank : DecisionSource::kExpertOverride;
    decision.rank = decision.source == DecisionSource::kAcceptedRank ? 1 + rng() % 5 : 0;
    decision.decided_at = "2026-01-02T03:04:05.678Z";
    decision.reviewer = text();
    CHECK(RoundTrip(decision) == decision);
  }
}

TEST_CASE("decision record layout") {
  MappingDecision d{"c1", "a06", DecisionSource::kAcceptedRank, 2, "2026-01-01T00:00:00.000Z",
                    "expert"};
  const nlohmann::json j = d;
  CHECK(j.at("activity_id") == "a06");
  CHECK(j.at("source") == "accepted_rank_2");
  CHECK(j.at("rank") == 2);
  d.source = DecisionSource::kExpertOverride;
  d.rank = 0;
  CHECK_FALSE(nlohmann::json(d).contains("rank"));
}

}  // TEST_SUITE

}  // namespace
}  // namespace ecolink
