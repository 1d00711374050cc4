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

#ifndef ECOLINK_CORE_VECTOR_INDEX_H_
#define ECOLINK_CORE_VECTOR_INDEX_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/embedding.h"
#include "core/model.h"

namespace ecolink {

// Exact flat cosine index over embedded LCA activities. Immutable once built;
// concurrent TopK calls are safe.
class ActivityIndex {
 public:
  ActivityIndex() = default;
  ActivityIndex(size_t dim, std::string fingerprint);

  // Appends a normalized vector. Throws on duplicate id, wrong dimension or a
  // vector whose norm is not 1 within 1e-6.
  void Add(const std::string &activity_id, std::span<const float> vector);

  // The k best entries by cosine to the query, descending, ties broken by
  // ascending activity id. k larger than the corpus returns every entry.
  std::vector<ScoredActivity> TopK(std::span<const float> query, int k) const;
  std::vector<ScoredActivity> TopK(const Embedding &query, int k) const {
    return TopK(std::span<const float>(query.values), k);
  }

  // Score of one stored entry, computed exactly as TopK computes it.
  double Score(std::span<const float> query, size_t entry) const;

  size_t size() const { return ids_.size(); }
  size_t dim() const { return dim_; }
  const std::string &fingerprint() const { return fingerprint_; }
  const std::string &id(size_t i) const { return ids_[i]; }
  std::span<const float> vector(size_t i) const {
    return {vectors_.data() + i * dim_, dim_};
  }
  bool Contains(const std::string &activity_id) const;

  bool operator==(const ActivityIndex &) const = default;

 private:
  size_t dim_ = 0;
  std::string fingerprint_;
  std::vector<std::string> ids_;
  std::vector<float> vectors_;  // row-major, size() x dim_
  std::unordered_map<std::string, size_t> positions_;
};

// Text embedded for an activity: name, a newline, then the description.
std::string ActivityText(const LcaActivity &activity);

// Embeds every activity in input order.
ActivityIndex BuildIndex(const std::vector<LcaActivity> &activities,
                         EmbeddingBackend &backend);

// Binary layout, all integers little-endian:
//   "ECOLIDX\0" | u32 version | u32 dim | u64 count | u32 fp_len | fp bytes |
//   u32 crc32 | count x (u32 id_len | id bytes | dim x f32)
// The CRC-32 covers every byte of the file except the checksum itself.
void SaveIndex(const ActivityIndex &index, const std::filesystem::path &path);

struct LoadedIndex {
  ActivityIndex index;
  // Set when the stored fingerprint differs from the live backend's.
  bool fingerprint_mismatch = false;
  std::string warning;
};

// Throws Error(kIntegrity) on a truncated or corrupted file.
LoadedIndex LoadIndex(const std::filesystem::path &path,
                      const std::optional<std::string> &live_fingerprint = {});

}  // namespace ecolink

#endif  // ECOLINK_CORE_VECTOR_INDEX_H_
