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

#ifndef ECOLINK_CORE_EVAL_H_
#define ECOLINK_CORE_EVAL_H_

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "core/model.h"
#include "core/pipeline.h"

namespace ecolink {

struct HitCount {
  int n = 0;
  size_t numerator = 0;
  size_t denominator = 0;
  double ratio = 0.0;
};

struct EvalResult {
  Mode mode = Mode::kSemanticOnly;
  std::vector<HitCount> hits;  // one per requested n, ascending n
  // Gold rank (1-based) per evaluated component, nullopt when absent.
  std::map<std::string, std::optional<int>> gold_rank;
  // Gold components with no ranking; counted as misses.
  std::vector<std::string> missing;

  const HitCount &at(int n) const;
};

// Fraction of gold components whose gold activity is among the first n
// candidates of their ranking. When known_activities is given, a gold label
// naming an activity outside it raises Error(kValidation). Empty gold raises
// Error(kInvalidArgument, "no labels").
EvalResult HitsAt(const std::vector<CandidateRanking> &rankings,
                  const std::vector<GoldLabel> &gold, std::vector<int> ns,
                  const std::set<std::string> *known_activities = nullptr);

// Runs all three modes on the same inputs with one shared index and scores
// each against the gold labels.
struct AblationResult {
  std::vector<EvalResult> rows;   // semantic, llm, llm-datasheet
  std::vector<RunReport> reports;
  std::vector<std::string> warnings;
};

AblationResult AblationReport(const std::vector<BomEntry> &bom,
                              const std::vector<Datasheet> &pool,
                              const std::vector<LcaActivity> &db,
                              const ActivityIndex &index,
                              const std::vector<GoldLabel> &gold,
                              const PipelineConfig &config,
                              const Backends &backends);

// Human-readable table, ratios rounded to two decimals.
std::string RenderTable(const std::vector<EvalResult> &rows);

// {mode, n, numerator, denominator, ratio} per line, full precision.
void WriteEvalRecords(std::ostream &out, const std::vector<EvalResult> &rows);

// Display name used in the table, e.g. "LLM + Datasheet".
std::string ModeLabel(Mode mode);

}  // namespace ecolink

#endif  // ECOLINK_CORE_EVAL_H_
