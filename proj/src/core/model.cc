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

#include "core/model.h"

#include <cmath>
#include <set>

#include "core/errors.h"

namespace ecolink {

using nlohmann::json;

std::string ModeName(Mode mode) {
  switch (mode) {
    case Mode::kSemanticOnly:
      return "semantic";
    case Mode::kLlm:
      return "llm";
    case Mode::kLlmDatasheet:
      return "llm-datasheet";
  }
  return "semantic";
}

std::optional<Mode> ParseMode(const std::string &name) {
  if (name == "semantic") return Mode::kSemanticOnly;
  if (name == "llm") return Mode::kLlm;
  if (name == "llm-datasheet") return Mode::kLlmDatasheet;
  return std::nullopt;
}

std::string MappingDecision::SourceLabel() const {
  if (source == DecisionSource::kAcceptedRank) {
    return "accepted_rank_" + std::to_string(rank);
  }
  return "expert_override";
}

std::vector<ValidationError> ValidateBom(const std::vector<BomEntry> &entries) {
  std::vector<ValidationError> errors;
  std::set<std::string> seen;
  for (const BomEntry &e : entries) {
    if (e.id.empty()) {
      errors.push_back({e.id, "id", "id is empty"});
    } else if (!seen.insert(e.id).second) {
      errors.push_back({e.id, "id", "duplicate id"});
    }
    if (e.name.empty()) errors.push_back({e.id, "name", "name is empty"});
    if (!(e.quantity >= 0.0) || !std::isfinite(e.quantity)) {
      errors.push_back({e.id, "quantity", "quantity must be finite and >= 0"});
    }
  }
  return errors;
}

std::vector<ValidationError> ValidateActivities(
    const std::vector<LcaActivity> &activities) {
  std::vector<ValidationError> errors;
  std::set<std::string> seen;
  for (const LcaActivity &a : activities) {
    if (a.id.empty()) {
      errors.push_back({a.id, "id", "id is empty"});
    } else if (!seen.insert(a.id).second) {
      errors.push_back({a.id, "id", "duplicate id"});
    }
    if (a.name.empty()) errors.push_back({a.id, "name", "name is empty"});
    if (!(a.emission_factor >= 0.0) || !std::isfinite(a.emission_factor)) {
      errors.push_back(
          {a.id, "emission_factor", "emission factor must be finite and >= 0"});
    }
  }
  return errors;
}

std::vector<ValidationError> ValidateConfig(const PipelineConfig &config) {
  std::vector<ValidationError> errors;
  if (!(config.datasheet_threshold >= -1.0 &&
        config.datasheet_threshold <= 1.0)) {
    errors.push_back({"config", "datasheet_threshold", "must be in [-1, 1]"});
  }
  if (config.top_k < 1) errors.push_back({"config", "top_k", "must be >= 1"});
  for (int n : config.hits_at) {
    if (n < 1) errors.push_back({"config", "hits_at", "entries must be >= 1"});
  }
  if (config.parallelism < 1) {
    errors.push_back({"config", "parallelism", "must be >= 1"});
  }
  return errors;
}

bool IsWellOrdered(const CandidateRanking &ranking, int top_k) {
  const auto &c = ranking.candidates;
  if (static_cast<int>(c.size()) > top_k) return false;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].score < -1.0 - 1e-6 || c[i].score > 1.0 + 1e-6) return false;
    if (i == 0) continue;
    if (c[i - 1].score < c[i].score) return false;
    if (c[i - 1].score == c[i].score &&
        !(c[i - 1].activity_id < c[i].activity_id)) {
      return false;
    }
  }
  return true;
}

// JSON mappings.

void to_json(json &j, const BomEntry &e) {
  j = json{{"id", e.id},
           {"name", e.name},
           {"material", e.material},
           {"supplier", e.supplier},
           {"quantity", e.quantity}};
}

void from_json(const json &j, BomEntry &e) {
  j.at("id").get_to(e.id);
  j.at("name").get_to(e.name);
  e.material = j.value("material", "");
  e.supplier = j.value("supplier", "");
  e.quantity = j.value("quantity", 1.0);
}

void to_json(json &j, const LcaActivity &a) {
  j = json{{"id", a.id},
           {"name", a.name},
           {"description", a.description},
           {"emission_factor", a.emission_factor},
           {"unit", a.unit}};
}

void from_json(const json &j, LcaActivity &a) {
  j.at("id").get_to(a.id);
  j.at("name").get_to(a.name);
  j.at("description").get_to(a.description);
  j.at("emission_factor").get_to(a.emission_factor);
  j.at("unit").get_to(a.unit);
}

void to_json(json &j, const Datasheet &d) {
  j = json{{"id", d.id}, {"filename", d.filename}, {"body", d.body}};
}

void from_json(const json &j, Datasheet &d) {
  d.id = j.value("id", "");
  j.at("filename").get_to(d.filename);
  j.at("body").get_to(d.body);
}

void to_json(json &j, const GoldLabel &g) {
  j = json{{"component_id", g.component_id}, {"activity_id", g.activity_id}};
}

void from_json(const json &j, GoldLabel &g) {
  j.at("component_id").get_to(g.component_id);
  j.at("activity_id").get_to(g.activity_id);
}

void to_json(json &j, const ScoredActivity &s) {
  j = json{{"activity_id", s.activity_id}, {"score", s.score}};
}

void from_json(const json &j, ScoredActivity &s) {
  j.at("activity_id").get_to(s.activity_id);
  j.at("score").get_to(s.score);
}

void to_json(json &j, const CandidateRanking &r) {
  j = json{{"component_id", r.component_id},
           {"mode", ModeName(r.mode)},
           {"query_text", r.query_text},
           {"candidates", r.candidates}};
}

void from_json(const json &j, CandidateRanking &r) {
  j.at("component_id").get_to(r.component_id);
  j.at("query_text").get_to(r.query_text);
  auto mode = ParseMode(j.at("mode").get<std::string>());
  if (!mode) {
    throw Error(ErrorCode::kParse,
                "unknown mode: " + j.at("mode").get<std::string>());
  }
  r.mode = *mode;
  j.at("candidates").get_to(r.candidates);
}

void to_json(json &j, const MappingDecision &d) {
  j = json{{"component_id", d.component_id},
           {"activity_id", d.chosen_activity_id},
           {"source", d.SourceLabel()}};
  if (d.source == DecisionSource::kAcceptedRank) j["rank"] = d.rank;
  j["reviewer"] = d.reviewer;
  j["decided_at"] = d.decided_at;
}

void from_json(const json &j, MappingDecision &d) {
  j.at("component_id").get_to(d.component_id);
  j.at("activity_id").get_to(d.chosen_activity_id);
  const std::string source = j.at("source").get<std::string>();
  if (source == "expert_override") {
    d.source = DecisionSource::kExpertOverride;
    d.rank = 0;
  } else if (source.rfind("accepted_rank_", 0) == 0) {
    d.source = DecisionSource::kAcceptedRank;
    d.rank = j.contains("rank") ? j.at("rank").get<int>()
                                : std::stoi(source.substr(14));
  } else {
    throw Error(ErrorCode::kParse, "unknown decision source: " + source);
  }
  d.reviewer = j.value("reviewer", "");
  d.decided_at = j.value("decided_at", "");
}

}  // namespace ecolink
