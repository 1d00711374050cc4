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

#include "core/eval.h"

#include <algorithm>
#include <cstdio>

#include "core/errors.h"

namespace ecolink {

const HitCount &EvalResult::at(int n) const {
  for (const HitCount &h : hits) {
    if (h.n == n) return h;
  }
  throw Error(ErrorCode::kNotFound, "no Hits@" + std::to_string(n) + " computed");
}

EvalResult HitsAt(const std::vector<CandidateRanking> &rankings,
                  const std::vector<GoldLabel> &gold, std::vector<int> ns,
                  const std::set<std::string> *known_activities) {
  if (gold.empty()) throw Error(ErrorCode::kInvalidArgument, "no labels");
  if (ns.empty()) throw Error(ErrorCode::kInvalidArgument, "no cutoffs given");
  for (int n : ns) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "cutoffs must be >= 1");
  }
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::map<std::string, const CandidateRanking *> by_component;
  for (const CandidateRanking &r : rankings) by_component.emplace(r.component_id, &r);

  EvalResult result;
  if (!rankings.empty()) result.mode = rankings.front().mode;
  for (const GoldLabel &label : gold) {
    if (known_activities && !known_activities->count(label.activity_id)) {
      throw Error(ErrorCode::kValidation,
                  "gold activity not in database: " + label.activity_id);
    }
  }

  std::vector<std::optional<int>> ranks;
  ranks.reserve(gold.size());
  for (const GoldLabel &label : gold) {
    std::optional<int> rank;
    auto it = by_component.find(label.component_id);
    if (it == by_component.end()) {
      result.missing.push_back(label.component_id);
    } else {
      const auto &candidates = it->second->candidates;
      for (size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].activity_id == label.activity_id) {
          rank = static_cast<int>(i) + 1;
          break;
        }
      }
    }
    result.gold_rank[label.component_id] = rank;
    ranks.push_back(rank);
  }

  for (int n : ns) {
    HitCount h;
    h.n = n;
    h.denominator = gold.size();
    for (const auto &rank : ranks) {
      if (rank && *rank <= n) ++h.numerator;
    }
    h.ratio = static_cast<double>(h.numerator) / static_cast<double>(h.denominator);
    result.hits.push_back(h);
  }
  return result;
}

AblationResult AblationReport(const std::vector<BomEntry> &bom,
                              const std::vector<Datasheet> &pool,
                              const std::vector<LcaActivity> &db,
                              const ActivityIndex &index,
                              const std::vector<GoldLabel> &gold,
                              const PipelineConfig &config,
                              const Backends &backends) {
  if (gold.empty()) throw Error(ErrorCode::kInvalidArgument, "no labels");
  std::set<std::string> known;
  for (const LcaActivity &a : db) known.insert(a.id);

  AblationResult result;
  for (Mode mode : {Mode::kSemanticOnly, Mode::kLlm, Mode::kLlmDatasheet}) {
    RunReport report = RunBom(bom, mode, index, pool, config, backends);
    for (const ComponentResult &r : report.results) {
      if (!r.ok()) {
        result.warnings.push_back(ModeName(mode) + ": component " +
                                  r.ranking.component_id +
                                  " failed and counts as a miss: " + *r.error);
      }
    }
    EvalResult row = HitsAt(report.Rankings(), gold, config.hits_at, &known);
    row.mode = mode;
    result.rows.push_back(std::move(row));
    result.reports.push_back(std::move(report));
  }
  return result;
}

std::string ModeLabel(Mode mode) {
  switch (mode) {
    case Mode::kSemanticOnly:
      return "Semantic similarity only";
    case Mode::kLlm:
      return "LLM";
    case Mode::kLlmDatasheet:
      return "LLM + Datasheet";
  }
  return "";
}

std::string RenderTable(const std::vector<EvalResult> &rows) {
  std::vector<int> ns;
  for (const EvalResult &row : rows) {
    for (const HitCount &h : row.hits) {
      if (std::find(ns.begin(), ns.end(), h.n) == ns.end()) ns.push_back(h.n);
    }
  }
  std::sort(ns.begin(), ns.end());

  size_t width = std::string("Method").size();
  for (const EvalResult &row : rows) width = std::max(width, ModeLabel(row.mode).size());

  auto pad = [](std::string s, size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  auto column = [](int n) { return std::max<size_t>(7, 5 + std::to_string(n).size()); };
  auto end_line = [](std::string &s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    s += "\n";
  };
  std::string out = pad("Method", width);
  for (int n : ns) out += " | " + pad("Hits@" + std::to_string(n), column(n));
  end_line(out);
  out += std::string(width, '-');
  for (int n : ns) out += "-+-" + std::string(column(n), '-');
  out += "\n";
  for (const EvalResult &row : rows) {
    out += pad(ModeLabel(row.mode), width);
    for (int n : ns) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.2f", row.at(n).ratio);
      out += " | " + pad(buf, column(n));
    }
    end_line(out);
  }
  return out;
}

void WriteEvalRecords(std::ostream &out, const std::vector<EvalResult> &rows) {
  for (const EvalResult &row : rows) {
    for (const HitCount &h : row.hits) {
      out << nlohmann::json{{"mode", ModeName(row.mode)},
                            {"n", h.n},
                            {"numerator", h.numerator},
                            {"denominator", h.denominator},
                            {"ratio", h.ratio}}
                 .dump()
          << '\n';
    }
  }
}

}  // namespace ecolink
