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

#ifndef ECOLINK_CORE_PIPELINE_H_
#define ECOLINK_CORE_PIPELINE_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "core/docmatch.h"
#include "core/embedding.h"
#include "core/llm.h"
#include "core/model.h"
#include "core/vector_index.h"

namespace ecolink {

struct Backends {
  EmbeddingBackend *embedder = nullptr;
  LlmBackend *llm = nullptr;  // unused in semantic mode
};

// Query for the semantic-only mode; the same text used for datasheet lookup.
std::string SemanticOnlyQuery(const BomEntry &entry);

struct DatasheetDecision {
  std::string filename;
  double score = 0.0;

  bool operator==(const DatasheetDecision &) const = default;
};

struct StageMillis {
  double datasheet = 0.0;
  double llm = 0.0;
  double ranking = 0.0;
};

// Outcome for one component. A failed component has an error and no
// candidates; ranking.query_text holds whatever query was built before the
// failure.
struct ComponentResult {
  CandidateRanking ranking;
  std::optional<DatasheetDecision> datasheet;
  std::optional<std::string> error;
  StageMillis millis;

  bool ok() const { return !error.has_value(); }
};

// Runs one component through the given mode. Backend failures are captured
// in the result rather than thrown. The matcher is only consulted in
// kLlmDatasheet mode and may be null otherwise.
ComponentResult RunComponent(const BomEntry &entry, Mode mode,
                             const ActivityIndex &index,
                             DatasheetMatcher *matcher,
                             const PipelineConfig &config,
                             const Backends &backends);

struct RunReport {
  Mode mode = Mode::kSemanticOnly;
  std::vector<ComponentResult> results;  // BOM order
  std::vector<std::string> warnings;

  std::vector<CandidateRanking> Rankings() const;  // successful ones only
  size_t failures() const;
};

// Processes every entry with up to config.parallelism workers. Results keep
// BOM order regardless of completion order.
RunReport RunBom(const std::vector<BomEntry> &entries, Mode mode,
                 const ActivityIndex &index,
                 const std::vector<Datasheet> &pool,
                 const PipelineConfig &config, const Backends &backends);

// One JSON record per component:
//   {component_id, mode, query_text, candidates, datasheet, error[, millis]}
// millis is written only when include_timings is set, so reports compare
// byte-for-byte across runs by default.
void WriteRunReport(std::ostream &out, const RunReport &report,
                    bool include_timings = false);
RunReport ParseRunReport(std::istream &in);

struct FootprintRow {
  std::string component_id;
  std::string activity_id;
  double quantity = 0.0;
  double emission_factor = 0.0;
  double kg_co2e = 0.0;
};

struct Footprint {
  double total_kg_co2e = 0.0;
  std::vector<FootprintRow> breakdown;  // BOM order
  std::vector<std::string> uncovered;   // BOM order
};

// Sums quantity x emission factor over decided components. When a component
// has several decisions the last one in the list wins. Throws Error(kNotFound)
// for a decision naming an unknown activity or component.
Footprint ComputeFootprint(const std::vector<MappingDecision> &decisions,
                           const std::vector<BomEntry> &bom,
                           const std::vector<LcaActivity> &db);

nlohmann::json FootprintJson(const Footprint &footprint);

}  // namespace ecolink

#endif  // ECOLINK_CORE_PIPELINE_H_
