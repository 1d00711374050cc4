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

#ifndef ECOLINK_CORE_DOCMATCH_H_
#define ECOLINK_CORE_DOCMATCH_H_

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/embedding.h"
#include "core/model.h"

namespace ecolink {

// name, supplier and material, one per line. Empty fields keep their line.
std::string DatasheetQueryText(const BomEntry &entry);

// filename, a newline, then the body.
std::string DatasheetDocText(const Datasheet &sheet);

struct DatasheetMatch {
  Datasheet sheet;
  double score = 0.0;
};

// Inclusive: a score equal to the threshold is a match.
inline bool MeetsThreshold(double score, double threshold) {
  return score >= threshold;
}

// Picks the datasheet for a component from a fixed pool. Pool embeddings are
// computed once, on first use, and shared by every Select call.
class DatasheetMatcher {
 public:
  DatasheetMatcher(std::vector<Datasheet> pool, EmbeddingBackend &backend);

  // Highest-cosine sheet if its score reaches the threshold; ties go to the
  // lexicographically smaller filename. An empty pool never matches.
  std::optional<DatasheetMatch> Select(const BomEntry &entry, double threshold);

  // Best candidate regardless of threshold, for diagnostics.
  std::optional<DatasheetMatch> Best(const BomEntry &entry);

  const std::vector<Datasheet> &pool() const { return pool_; }

 private:
  void EnsureEmbedded();

  std::vector<Datasheet> pool_;
  EmbeddingBackend &backend_;
  std::once_flag embedded_once_;
  std::vector<Embedding> pool_vectors_;
};

std::optional<DatasheetMatch> SelectDatasheet(const BomEntry &entry,
                                              const std::vector<Datasheet> &pool,
                                              EmbeddingBackend &backend,
                                              double threshold);

}  // namespace ecolink

#endif  // ECOLINK_CORE_DOCMATCH_H_
