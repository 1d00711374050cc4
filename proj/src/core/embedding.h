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

#ifndef ECOLINK_CORE_EMBEDDING_H_
#define ECOLINK_CORE_EMBEDDING_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/http_client.h"
#include "core/model.h"

namespace ecolink {

// Text embedding backend. Implementations return one L2-normalized vector per
// input text, in input order, and must be safe to call concurrently.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  // Throws Error(kInvalidArgument) naming the index of an empty text.
  std::vector<Embedding> Embed(const std::vector<std::string> &texts);
  Embedding EmbedOne(const std::string &text);

  // Identifies backend and model, e.g. "local-hash-256".
  virtual std::string Fingerprint() const = 0;

 protected:
  virtual std::vector<Embedding> EmbedChecked(
      const std::vector<std::string> &texts) = 0;
};

// Deterministic signed character 3-gram hashing embedder.
//
// The text is decoded from UTF-8 into code points and lowercased (ASCII and
// Latin-1 letters). Every window of three consecutive code points is
// re-encoded as UTF-8 and hashed with 64-bit FNV-1a; the hash modulo dim
// selects a bucket, which receives +1 when the top hash bit is clear and -1
// otherwise. Texts shorter than three code points form a single gram. The
// accumulated vector is L2-normalized.
class LocalHashEmbedder : public EmbeddingBackend {
 public:
  static constexpr int kDefaultDim = 256;
  static constexpr int kMinDim = 8;

  explicit LocalHashEmbedder(int dim = kDefaultDim);

  int dim() const { return dim_; }
  std::string Fingerprint() const override;

  // Exposed for tests.
  static uint64_t Fnv1a64(std::string_view bytes);

 protected:
  std::vector<Embedding> EmbedChecked(
      const std::vector<std::string> &texts) override;

 private:
  Embedding EmbedText(const std::string &text) const;

  int dim_;
};

struct RemoteEmbedderOptions {
  std::string endpoint;
  std::string model = "gte-large-en-v1.5";
  std::string api_key;  // defaults to $ECOLINK_EMBED_API_KEY when empty
  size_t batch_size = 32;
  RetryPolicy retry;
};

// Client for an embedding service speaking
//   POST {model, input:[...]} -> {data:[{index, embedding:[...]}]}.
// Responses are memoized by exact input text for the lifetime of the object.
class RemoteEmbedder : public EmbeddingBackend {
 public:
  explicit RemoteEmbedder(RemoteEmbedderOptions options);

  std::string Fingerprint() const override;
  size_t requests_sent() const;

 protected:
  std::vector<Embedding> EmbedChecked(
      const std::vector<std::string> &texts) override;

 private:
  std::vector<Embedding> Fetch(const std::vector<std::string> &batch);

  RemoteEmbedderOptions options_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, Embedding> cache_;
  size_t requests_ = 0;
  size_t dim_ = 0;
};

// Cosine similarity. Throws Error(kInvalidArgument) on dimension mismatch or
// a zero vector.
double Cosine(std::span<const float> a, std::span<const float> b);
double Cosine(const Embedding &a, const Embedding &b);

// Plain dot product accumulated in double, in index order.
double Dot(std::span<const float> a, std::span<const float> b);

// Returns the unit-length single-precision copy; throws on a zero vector.
Embedding Normalize(std::span<const double> values);

}  // namespace ecolink

#endif  // ECOLINK_CORE_EMBEDDING_H_
