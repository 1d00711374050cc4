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

#include "core/pipeline.h"

#include <atomic>
#include <chrono>
#include <map>
#include <thread>

#include "core/errors.h"

namespace ecolink {

using nlohmann::json;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double millis() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string SemanticOnlyQuery(const BomEntry &entry) {
  return DatasheetQueryText(entry);
}

ComponentResult RunComponent(const BomEntry &entry, Mode mode,
                             const ActivityIndex &index,
                             DatasheetMatcher *matcher,
                             const PipelineConfig &config,
                             const Backends &backends) {
  ComponentResult result;
  result.ranking.component_id = entry.id;
  result.ranking.mode = mode;
  try {
    if (backends.embedder == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "no embedding backend");
    }
    if (mode == Mode::kSemanticOnly) {
      result.ranking.query_text = SemanticOnlyQuery(entry);
    } else {
      std::optional<Datasheet> sheet;
      if (mode == Mode::kLlmDatasheet && matcher != nullptr) {
        Stopwatch watch;
        if (auto match = matcher->Select(entry, config.datasheet_threshold)) {
          result.datasheet = DatasheetDecision{match->sheet.filename, match->score};
          sheet = std::move(match->sheet);
        }
        result.millis.datasheet = watch.millis();
      }
      if (backends.llm == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "mode " + ModeName(mode) +
                                                     " requires an LLM backend");
      }
      Stopwatch watch;
      const std::string raw = backends.llm->Complete(BuildPrompt(entry, sheet));
      result.millis.llm = watch.millis();
      if (raw.empty()) throw BackendError("empty LLM response", 200, false);
      result.ranking.query_text = RankingQueryText(ParseLlmResponse(raw));
    }
    Stopwatch watch;
    const Embedding query = backends.embedder->EmbedOne(result.ranking.query_text);
    result.ranking.candidates = index.TopK(query, config.top_k);
    result.millis.ranking = watch.millis();
  } catch (const std::exception &e) {
    result.error = e.what();
    result.ranking.candidates.clear();
  }
  return result;
}

std::vector<CandidateRanking> RunReport::Rankings() const {
  std::vector<CandidateRanking> rankings;
  for (const ComponentResult &r : results) {
    if (r.ok()) rankings.push_back(r.ranking);
  }
  return rankings;
}

size_t RunReport::failures() const {
  size_t n = 0;
  for (const ComponentResult &r : results) n += r.ok() ? 0 : 1;
  return n;
}

RunReport RunBom(const std::vector<BomEntry> &entries, Mode mode,
                 const ActivityIndex &index,
                 const std::vector<Datasheet> &pool,
                 const PipelineConfig &config, const Backends &backends) {
  RunReport report;
  report.mode = mode;
  report.results.resize(entries.size());
  if (backends.embedder != nullptr &&
      backends.embedder->Fingerprint() != index.fingerprint()) {
    report.warnings.push_back("index fingerprint '" + index.fingerprint() +
                              "' does not match embedding backend '" +
                              backends.embedder->Fingerprint() + "'");
  }
  if (entries.empty()) return report;

  std::optional<DatasheetMatcher> matcher;
  if (mode == Mode::kLlmDatasheet && backends.embedder != nullptr) {
    matcher.emplace(pool, *backends.embedder);
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < entries.size(); i = next++) {
      report.results[i] = RunComponent(entries[i], mode, index,
                                       matcher ? &*matcher : nullptr, config,
                                       backends);
    }
  };
  const size_t workers =
      std::min<size_t>(entries.size(), std::max(1, config.parallelism));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
  }
  return report;
}

void WriteRunReport(std::ostream &out, const RunReport &report,
                    bool include_timings) {
  for (const ComponentResult &r : report.results) {
    json record = r.ranking;
    record["datasheet"] =
        r.datasheet ? json{{"filename", r.datasheet->filename},
                           {"score", r.datasheet->score}}
                    : json(nullptr);
    record["error"] = r.error ? json(*r.error) : json(nullptr);
    if (include_timings) {
      record["millis"] = {{"datasheet", r.millis.datasheet},
                          {"llm", r.millis.llm},
                          {"ranking", r.millis.ranking}};
    }
    out << record.dump() << '\n';
  }
}

RunReport ParseRunReport(std::istream &in) {
  RunReport report;
  std::string line;
  int line_no = 0;
  std::optional<Mode> mode;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ComponentResult result;
    try {
      const json record = json::parse(line);
      result.ranking = record.get<CandidateRanking>();
      if (record.contains("datasheet") && !record.at("datasheet").is_null()) {
        result.datasheet = DatasheetDecision{
            record.at("datasheet").at("filename").get<std::string>(),
            record.at("datasheet").at("score").get<double>()};
      }
      if (record.contains("error") && !record.at("error").is_null()) {
        result.error = record.at("error").get<std::string>();
      }
      if (record.contains("millis")) {
        const json &m = record.at("millis");
        result.millis = {m.value("datasheet", 0.0), m.value("llm", 0.0),
                         m.value("ranking", 0.0)};
      }
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kParse,
                  "report line " + std::to_string(line_no) + ": " + e.what());
    }
    if (mode && *mode != result.ranking.mode) {
      throw Error(ErrorCode::kParse, "report line " + std::to_string(line_no) +
                                         ": mixed modes in one report");
    }
    mode = result.ranking.mode;
    report.results.push_back(std::move(result));
  }
  if (mode) report.mode = *mode;
  return report;
}

Footprint ComputeFootprint(const std::vector<MappingDecision> &decisions,
                           const std::vector<BomEntry> &bom,
                           const std::vector<LcaActivity> &db) {
  std::map<std::string, const LcaActivity *> activities;
  for (const LcaActivity &a : db) activities[a.id] = &a;
  std::map<std::string, const BomEntry *> components;
  for (const BomEntry &e : bom) components[e.id] = &e;

  std::map<std::string, const MappingDecision *> latest;
  for (const MappingDecision &d : decisions) {
    if (!activities.count(d.chosen_activity_id)) {
      throw Error(ErrorCode::kNotFound,
                  "decision references unknown activity: " + d.chosen_activity_id);
    }
    if (!components.count(d.component_id)) {
      throw Error(ErrorCode::kNotFound,
                  "decision references unknown component: " + d.component_id);
    }
    latest[d.component_id] = &d;
  }

  // Summed in BOM order so the total does not depend on decision order.
  Footprint footprint;
  for (const BomEntry &entry : bom) {
    auto it = latest.find(entry.id);
    if (it == latest.end()) {
      footprint.uncovered.push_back(entry.id);
      continue;
    }
    const LcaActivity &activity = *activities.at(it->second->chosen_activity_id);
    FootprintRow row{entry.id, activity.id, entry.quantity,
                     activity.emission_factor,
                     entry.quantity * activity.emission_factor};
    footprint.total_kg_co2e += row.kg_co2e;
    footprint.breakdown.push_back(std::move(row));
  }
  return footprint;
}

json FootprintJson(const Footprint &footprint) {
  json breakdown = json::array();
  for (const FootprintRow &row : footprint.breakdown) {
    breakdown.push_back({{"component_id", row.component_id},
                         {"activity_id", row.activity_id},
                         {"quantity", row.quantity},
                         {"emission_factor", row.emission_factor},
                         {"kg_co2e", row.kg_co2e}});
  }
  return json{{"total_kg_co2e", footprint.total_kg_co2e},
              {"breakdown", breakdown},
              {"uncovered", footprint.uncovered}};
}

}  // namespace ecolink
