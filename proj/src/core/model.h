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

#ifndef ECOLINK_CORE_MODEL_H_
#define ECOLINK_CORE_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ecolink {

// One component row of a bill of materials.
struct BomEntry {
  std::string id;
  std::string name;
  std::string material;
  std::string supplier;
  double quantity = 1.0;

  bool operator==(const BomEntry &) const = default;
};

// One process entry of a life cycle assessment database. The emission factor
// is kg CO2e per declared unit; the unit is an uninterpreted label.
struct LcaActivity {
  std::string id;
  std::string name;
  std::string description;
  double emission_factor = 0.0;
  std::string unit;

  bool operator==(const LcaActivity &) const = default;
};

struct Datasheet {
  std::string id;
  std::string filename;
  std::string body;

  bool operator==(const Datasheet &) const = default;
};

struct GoldLabel {
  std::string component_id;
  std::string activity_id;

  bool operator==(const GoldLabel &) const = default;
};

// L2-normalized text embedding. Values are stored in single precision, the
// same precision used by the on-disk index.
struct Embedding {
  std::vector<float> values;

  size_t dim() const { return values.size(); }
  bool operator==(const Embedding &) const = default;
};

enum class Mode { kSemanticOnly, kLlm, kLlmDatasheet };

// Wire names are "semantic", "llm" and "llm-datasheet".
std::string ModeName(Mode mode);
std::optional<Mode> ParseMode(const std::string &name);

struct ScoredActivity {
  std::string activity_id;
  double score = 0.0;

  bool operator==(const ScoredActivity &) const = default;
};

struct CandidateRanking {
  std::string component_id;
  std::string query_text;
  Mode mode = Mode::kSemanticOnly;
  std::vector<ScoredActivity> candidates;

  bool operator==(const CandidateRanking &) const = default;
};

enum class DecisionSource { kAcceptedRank, kExpertOverride };

struct MappingDecision {
  std::string component_id;
  std::string chosen_activity_id;
  DecisionSource source = DecisionSource::kExpertOverride;
  int rank = 0;  // 1-based shortlist rank when source is kAcceptedRank
  std::string decided_at;  // ISO-8601 UTC
  std::string reviewer;

  // "accepted_rank_<n>" or "expert_override".
  std::string SourceLabel() const;

  bool operator==(const MappingDecision &) const = default;
};

struct PipelineConfig {
  double datasheet_threshold = 0.5;
  int top_k = 5;
  std::vector<int> hits_at = {1, 5};
  int parallelism = 4;
};

struct ValidationError {
  std::string id;
  std::string field;
  std::string message;

  bool operator==(const ValidationError &) const = default;
};

// Invariant predicates. Each returns the list of violated rules; an empty
// list means the value is well formed.
std::vector<ValidationError> ValidateBom(const std::vector<BomEntry> &entries);
std::vector<ValidationError> ValidateActivities(
    const std::vector<LcaActivity> &activities);
std::vector<ValidationError> ValidateConfig(const PipelineConfig &config);
bool IsWellOrdered(const CandidateRanking &ranking, int top_k);

// JSON mappings used by every record-per-line file.
void to_json(nlohmann::json &j, const BomEntry &e);
void from_json(const nlohmann::json &j, BomEntry &e);
void to_json(nlohmann::json &j, const LcaActivity &a);
void from_json(const nlohmann::json &j, LcaActivity &a);
void to_json(nlohmann::json &j, const Datasheet &d);
void from_json(const nlohmann::json &j, Datasheet &d);
void to_json(nlohmann::json &j, const GoldLabel &g);
void from_json(const nlohmann::json &j, GoldLabel &g);
void to_json(nlohmann::json &j, const ScoredActivity &s);
void from_json(const nlohmann::json &j, ScoredActivity &s);
void to_json(nlohmann::json &j, const CandidateRanking &r);
void from_json(const nlohmann::json &j, CandidateRanking &r);
void to_json(nlohmann::json &j, const MappingDecision &d);
void from_json(const nlohmann::json &j, MappingDecision &d);

}  // namespace ecolink

#endif  // ECOLINK_CORE_MODEL_H_
