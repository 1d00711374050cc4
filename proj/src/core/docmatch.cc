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

#include "core/docmatch.h"

#include "core/errors.h"

namespace ecolink {

std::string DatasheetQueryText(const BomEntry &entry) {
  return entry.name + "\n" + entry.supplier + "\n" + entry.material;
}

std::string DatasheetDocText(const Datasheet &sheet) {
  return sheet.filename + "\n" + sheet.body;
}

DatasheetMatcher::DatasheetMatcher(std::vector<Datasheet> pool,
                                   EmbeddingBackend &backend)
    : pool_(std::move(pool)), backend_(backend) {}

void DatasheetMatcher::EnsureEmbedded() {
  std::call_once(embedded_once_, [this] {
    if (pool_.empty()) return;
    std::vector<std::string> texts;
    texts.reserve(pool_.size());
    for (const Datasheet &sheet : pool_) texts.push_back(DatasheetDocText(sheet));
    pool_vectors_ = backend_.Embed(texts);
  });
}

std::optional<DatasheetMatch> DatasheetMatcher::Best(const BomEntry &entry) {
  if (pool_.empty()) return std::nullopt;
  EnsureEmbedded();
  const Embedding query = backend_.EmbedOne(DatasheetQueryText(entry));
  std::optional<size_t> best;
  double best_score = 0.0;
  for (size_t i = 0; i < pool_.size(); ++i) {
    const double score = Cosine(query, pool_vectors_[i]);
    if (!best || score > best_score ||
        (score == best_score && pool_[i].filename < pool_[*best].filename)) {
      best = i;
      best_score = score;
    }
  }
  return DatasheetMatch{pool_[*best], best_score};
}

std::optional<DatasheetMatch> DatasheetMatcher::Select(const BomEntry &entry,
                                                       double threshold) {
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be in [-1, 1]");
  }
  auto best = Best(entry);
  if (best && MeetsThreshold(best->score, threshold)) return best;
  return std::nullopt;
}

std::optional<DatasheetMatch> SelectDatasheet(const BomEntry &entry,
                                              const std::vector<Datasheet> &pool,
                                              EmbeddingBackend &backend,
                                              double threshold) {
  DatasheetMatcher matcher(pool, backend);
  return matcher.Select(entry, threshold);
}

}  // namespace ecolink
