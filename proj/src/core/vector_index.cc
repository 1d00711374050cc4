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

#include "core/vector_index.h"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "core/errors.h"
#include "core/ingest.h"

namespace ecolink {

namespace {

constexpr char kMagic[8] = {'E', 'C', 'O', 'L', 'I', 'D', 'X', '\0'};
constexpr uint32_t kVersion = 1;
constexpr size_t kEmbedBatch = 64;

bool Better(const ScoredActivity &a, const ScoredActivity &b) {
  if (a.score != b.score) return a.score > b.score;
  return a.activity_id < b.activity_id;
}

class Writer {
 public:
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void F32(float f) { U32(std::bit_cast<uint32_t>(f)); }
  void Bytes(std::string_view s) { buf_.append(s.data(), s.size()); }
  size_t size() const { return buf_.size(); }
  std::string &buffer() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  uint64_t U64() {
    const uint64_t lo = U32();
    const uint64_t hi = U32();
    return lo | (hi << 32);
  }
  float F32() { return std::bit_cast<float>(U32()); }
  std::string_view Bytes(size_t n) {
    Need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  size_t pos() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  void Need(size_t n) const {
    if (data_.size() - pos_ < n) {
      throw Error(ErrorCode::kIntegrity, "index file is truncated");
    }
  }

  std::string_view data_;
  size_t pos_ = 0;
};

uint32_t Crc(std::string_view a, std::string_view b) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef *>(a.data()), static_cast<uInt>(a.size()));
  // Payloads may exceed 4 GiB; feed in chunks.
  size_t off = 0;
  while (off < b.size()) {
    const size_t n = std::min<size_t>(b.size() - off, 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef *>(b.data() + off), static_cast<uInt>(n));
    off += n;
  }
  return static_cast<uint32_t>(crc);
}

}  // namespace

ActivityIndex::ActivityIndex(size_t dim, std::string fingerprint)
    : dim_(dim), fingerprint_(std::move(fingerprint)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "index dimension must be > 0");
}

void ActivityIndex::Add(const std::string &activity_id,
                        std::span<const float> vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorCode::kInvalidArgument,
                "activity " + activity_id + ": dimension " +
                    std::to_string(vector.size()) + " != index dimension " +
                    std::to_string(dim_));
  }
  if (Contains(activity_id)) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate activity id: " + activity_id);
  }
  const double norm = std::sqrt(Dot(vector, vector));
  if (std::abs(norm - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument,
                "activity " + activity_id + ": vector is not normalized");
  }
  positions_.emplace(activity_id, ids_.size());
  ids_.push_back(activity_id);
  vectors_.insert(vectors_.end(), vector.begin(), vector.end());
}

bool ActivityIndex::Contains(const std::string &activity_id) const {
  return positions_.count(activity_id) > 0;
}

double ActivityIndex::Score(std::span<const float> query, size_t entry) const {
  const double qnorm = std::sqrt(Dot(query, query));
  if (qnorm == 0.0) throw Error(ErrorCode::kInvalidArgument, "zero query vector");
  return std::clamp(Dot(query, vector(entry)) / qnorm, -1.0, 1.0);
}

std::vector<ScoredActivity> ActivityIndex::TopK(std::span<const float> query,
                                                int k) const {
  if (query.size() != dim_) {
    throw Error(ErrorCode::kInvalidArgument,
                "query dimension " + std::to_string(query.size()) +
                    " != index dimension " + std::to_string(dim_));
  }
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const double qnorm = std::sqrt(Dot(query, query));
  if (qnorm == 0.0) throw Error(ErrorCode::kInvalidArgument, "zero query vector");

  std::vector<ScoredActivity> scored;
  scored.reserve(size());
  for (size_t i = 0; i < size(); ++i) {
    const double s = std::clamp(Dot(query, vector(i)) / qnorm, -1.0, 1.0);
    scored.push_back({ids_[i], s});
  }
  const size_t n = std::min(scored.size(), static_cast<size_t>(k));
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(), Better);
  scored.resize(n);
  return scored;
}

std::string ActivityText(const LcaActivity &activity) {
  return activity.name + "\n" + activity.description;
}

ActivityIndex BuildIndex(const std::vector<LcaActivity> &activities,
                         EmbeddingBackend &backend) {
  if (activities.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot index an empty database");
  }
  std::optional<ActivityIndex> index;
  for (size_t start = 0; start < activities.size(); start += kEmbedBatch) {
    const size_t end = std::min(activities.size(), start + kEmbedBatch);
    std::vector<std::string> texts;
    for (size_t i = start; i < end; ++i) texts.push_back(ActivityText(activities[i]));
    std::vector<Embedding> vectors;
    try {
      vectors = backend.Embed(texts);
    } catch (const BackendError &e) {
      throw BackendError("embedding activities " + activities[start].id + ".." +
                             activities[end - 1].id + ": " + e.what(),
                         e.status(), e.retryable());
    } catch (const Error &e) {
      throw Error(e.code(), "embedding activities " + activities[start].id +
                                ".." + activities[end - 1].id + ": " + e.what());
    }
    if (!index) index.emplace(vectors.front().dim(), backend.Fingerprint());
    for (size_t i = start; i < end; ++i) {
      index->Add(activities[i].id, vectors[i - start].values);
    }
  }
  return std::move(*index);
}

void SaveIndex(const ActivityIndex &index, const std::filesystem::path &path) {
  Writer head;
  head.Bytes(std::string_view(kMagic, sizeof(kMagic)));
  head.U32(kVersion);
  head.U32(static_cast<uint32_t>(index.dim()));
  head.U64(index.size());
  head.U32(static_cast<uint32_t>(index.fingerprint().size()));
  head.Bytes(index.fingerprint());

  Writer body;
  for (size_t i = 0; i < index.size(); ++i) {
    body.U32(static_cast<uint32_t>(index.id(i).size()));
    body.Bytes(index.id(i));
    for (float f : index.vector(i)) body.F32(f);
  }

  Writer crc;
  crc.U32(Crc(head.buffer(), body.buffer()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(head.buffer().data(), static_cast<std::streamsize>(head.size()));
  out.write(crc.buffer().data(), static_cast<std::streamsize>(crc.size()));
  out.write(body.buffer().data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

LoadedIndex LoadIndex(const std::filesystem::path &path,
                      const std::optional<std::string> &live_fingerprint) {
  const std::string data = ReadFile(path);
  Reader r(data);
  if (r.Bytes(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw Error(ErrorCode::kIntegrity, "not an index file: " + path.string());
  }
  const uint32_t version = r.U32();
  if (version != kVersion) {
    throw Error(ErrorCode::kIntegrity,
                "unsupported index version " + std::to_string(version));
  }
  const uint32_t dim = r.U32();
  const uint64_t count = r.U64();
  const uint32_t fp_len = r.U32();
  const std::string fingerprint(r.Bytes(fp_len));
  const size_t head_size = r.pos();
  const uint32_t stored_crc = r.U32();
  const std::string_view body = std::string_view(data).substr(r.pos());
  if (Crc(std::string_view(data).substr(0, head_size), body) != stored_crc) {
    throw Error(ErrorCode::kIntegrity, "index checksum mismatch: " + path.string());
  }
  if (dim == 0) throw Error(ErrorCode::kIntegrity, "index dimension is zero");

  LoadedIndex loaded;
  loaded.index = ActivityIndex(dim, fingerprint);
  std::vector<float> v(dim);
  for (uint64_t i = 0; i < count; ++i) {
    const uint32_t id_len = r.U32();
    const std::string id(r.Bytes(id_len));
    for (uint32_t d = 0; d < dim; ++d) v[d] = r.F32();
    try {
      loaded.index.Add(id, v);
    } catch (const Error &e) {
      throw Error(ErrorCode::kIntegrity, std::string("bad index entry: ") + e.what());
    }
  }
  if (r.remaining() != 0) {
    throw Error(ErrorCode::kIntegrity, "trailing bytes in index file");
  }
  if (live_fingerprint && *live_fingerprint != fingerprint) {
    loaded.fingerprint_mismatch = true;
    loaded.warning = "index was built with '" + fingerprint +
                     "' but the live embedding backend is '" +
                     *live_fingerprint + "'";
  }
  return loaded;
}

}  // namespace ecolink
