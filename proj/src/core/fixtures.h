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

#ifndef ECOLINK_CORE_FIXTURES_H_
#define ECOLINK_CORE_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "core/model.h"

namespace ecolink {

// Self-contained synthetic corpus for offline runs: the eight BOM rows of a
// pump assembly, 25 LCA activities, 4 datasheets, gold labels and canned LLM
// responses for every prompt the llm and llm-datasheet modes issue with the
// default local-hash backend (dim 256, threshold 0.5).
//
// The seed only varies quantities and emission factors, so prompts and
// rankings are seed-independent. Gold labels and canned responses are
// engineered so that semantic-only ranking scores below the LLM modes; the
// corpus demonstrates the harness, it measures nothing.
struct DemoCorpus {
  std::vector<BomEntry> bom;
  std::vector<LcaActivity> activities;
  std::vector<Datasheet> datasheets;
  std::vector<GoldLabel> gold;
  std::map<std::string, std::string> llm_fixtures;  // prompt sha256 -> response
};

inline constexpr uint64_t kDefaultDemoSeed = 42;

DemoCorpus GenerateDemoCorpus(uint64_t seed = kDefaultDemoSeed);

// Writes bom.csv, lca_db.jsonl, datasheets/, gold.jsonl and
// llm_fixtures.jsonl under dir.
void WriteDemoCorpus(const DemoCorpus &corpus, const std::filesystem::path &dir);

}  // namespace ecolink

#endif  // ECOLINK_CORE_FIXTURES_H_
