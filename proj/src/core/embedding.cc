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

#include "core/embedding.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "core/errors.h"

namespace ecolink {

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr char32_t kReplacement = 0xFFFD;

bool IsBlank(const std::string &text) {
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Lenient UTF-8 decoder; malformed sequences become U+FFFD.
std::vector<char32_t> DecodeUtf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void AppendUtf8(char32_t cp, std::string &out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t Lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

}  // namespace

std::vector<Embedding> EmbeddingBackend::Embed(
    const std::vector<std::string> &texts) {
  if (texts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no texts to embed");
  }
  for (size_t i = 0; i < texts.size(); ++i) {
    if (IsBlank(texts[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "text " + std::to_string(i) + " is empty");
    }
  }
  return EmbedChecked(texts);
}

Embedding EmbeddingBackend::EmbedOne(const std::string &text) {
  return Embed({text}).front();
}

LocalHashEmbedder::LocalHashEmbedder(int dim) : dim_(dim) {
  if (dim < kMinDim) {
    throw Error(ErrorCode::kInvalidArgument,
                "local-hash dimension must be >= " + std::to_string(kMinDim));
  }
}

std::string LocalHashEmbedder::Fingerprint() const {
  return "local-hash-" + std::to_string(dim_);
}

uint64_t LocalHashEmbedder::Fnv1a64(std::string_view bytes) {
  uint64_t h = kFnvOffset;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

std::vector<Embedding> LocalHashEmbedder::EmbedChecked(
    const std::vector<std::string> &texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const std::string &text : texts) out.push_back(EmbedText(text));
  return out;
}

Embedding LocalHashEmbedder::EmbedText(const std::string &text) const {
  std::vector<char32_t> cps = DecodeUtf8(text);
  for (char32_t &cp : cps) cp = Lower(cp);

  std::vector<double> acc(dim_, 0.0);
  auto add_gram = [&](size_t begin, size_t end) {
    std::string gram;
    for (size_t i = begin; i < end; ++i) AppendUtf8(cps[i], gram);
    const uint64_t h = Fnv1a64(gram);
    acc[h % static_cast<uint64_t>(dim_)] += (h >> 63) == 0 ? 1.0 : -1.0;
  };
  if (cps.size() < 3) {
    add_gram(0, cps.size());
  } else {
    for (size_t i = 0; i + 3 <= cps.size(); ++i) add_gram(i, i + 3);
  }
  return Normalize(acc);
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderOptions options)
    : options_(std::move(options)) {
  if (options_.endpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "remote embedding backend requires an endpoint");
  }
  if (options_.api_key.empty()) options_.api_key = GetEnv("ECOLINK_EMBED_API_KEY");
  if (options_.batch_size == 0) options_.batch_size = 1;
}

std::string RemoteEmbedder::Fingerprint() const {
  return "remote:" + options_.model;
}

size_t RemoteEmbedder::requests_sent() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_;
}

std::vector<Embedding> RemoteEmbedder::EmbedChecked(
    const std::vector<std::string> &texts) {
  std::vector<std::string> missing;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const std::string &t : texts) {
      if (!cache_.count(t) &&
          std::find(missing.begin(), missing.end(), t) == missing.end()) {
        missing.push_back(t);
      }
    }
  }
  for (size_t start = 0; start < missing.size(); start += options_.batch_size) {
    const size_t end = std::min(missing.size(), start + options_.batch_size);
    std::vector<std::string> batch(missing.begin() + start, missing.begin() + end);
    std::vector<Embedding> fetched = Fetch(batch);
    std::lock_guard<std::mutex> lock(mu_);
    for (size_t i = 0; i < batch.size(); ++i) {
      // First writer wins so concurrent callers observe one value per text.
      cache_.emplace(batch[i], std::move(fetched[i]));
    }
  }
  std::vector<Embedding> out;
  out.reserve(texts.size());
  std::lock_guard<std::mutex> lock(mu_);
  for (const std::string &t : texts) out.push_back(cache_.at(t));
  return out;
}

std::vector<Embedding> RemoteEmbedder::Fetch(
    const std::vector<std::string> &batch) {
  const nlohmann::json request = {{"model", options_.model}, {"input", batch}};
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++requests_;
  }
  nlohmann::json response = CallWithRetry(options_.retry, [&] {
    return PostJson(options_.endpoint, request, options_.api_key);
  });

  std::vector<Embedding> out(batch.size());
  std::vector<bool> filled(batch.size(), false);
  try {
    const auto &data = response.at("data");
    for (size_t pos = 0; pos < data.size(); ++pos) {
      const auto &item = data.at(pos);
      const size_t index = item.contains("index") ? item.at("index").get<size_t>() : pos;
      if (index >= batch.size()) {
        throw BackendError("embedding index out of range", 200, false);
      }
      const auto raw = item.at("embedding").get<std::vector<double>>();
      out[index] = Normalize(raw);
      filled[index] = true;
    }
  } catch (const nlohmann::json::exception &e) {
    throw BackendError(std::string("malformed embedding response: ") + e.what(),
                       200, false);
  } catch (const BackendError &) {
    throw;
  } catch (const Error &e) {
    throw BackendError(std::string("bad embedding in response: ") + e.what(),
                       200, false);
  }
  for (size_t i = 0; i < batch.size(); ++i) {
    if (!filled[i]) {
      throw BackendError("response missing embedding " + std::to_string(i), 200,
                         false);
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  for (const Embedding &e : out) {
    if (dim_ == 0) dim_ = e.dim();
    if (e.dim() != dim_) {
      throw BackendError("embedding dimension changed from " +
                             std::to_string(dim_) + " to " +
                             std::to_string(e.dim()),
                         200, false);
    }
  }
  return out;
}

double Dot(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

double Cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dimension mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  const double na = std::sqrt(Dot(a, a));
  const double nb = std::sqrt(Dot(b, b));
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "cosine of a zero vector");
  }
  const double c = Dot(a, b) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

double Cosine(const Embedding &a, const Embedding &b) {
  return Cosine(std::span<const float>(a.values), std::span<const float>(b.values));
}

Embedding Normalize(std::span<const double> values) {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  if (sq == 0.0 || !std::isfinite(sq)) {
    throw Error(ErrorCode::kInvalidArgument, "cannot normalize a zero vector");
  }
  const double norm = std::sqrt(sq);
  Embedding e;
  e.values.reserve(values.size());
  for (double v : values) e.values.push_back(static_cast<float>(v / norm));
  return e;
}

}  // namespace ecolink
