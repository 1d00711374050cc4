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

#ifndef ECOLINK_CORE_LLM_H_
#define ECOLINK_CORE_LLM_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>

#include "core/http_client.h"
#include "core/model.h"

namespace ecolink {

// Identifies the prompt template; bump when the template text changes.
inline constexpr const char *kPromptTemplateVersion = "ecolink-prompt-v1";

// Prompt asking the model to describe how the component is manufactured,
// answering with "Activity name:" and "Activity information:" sections. The
// datasheet body, when given, is appended between explicit delimiters.
std::string BuildPrompt(const BomEntry &entry,
                        const std::optional<Datasheet> &datasheet);

struct LlmResponse {
  std::string activity_name;
  std::string activity_information;
  std::string raw;
  bool parsed = false;  // both labels were found
};

LlmResponse ParseLlmResponse(const std::string &raw);

// "<name>\n<information>" for parsed responses, the raw text otherwise.
std::string RankingQueryText(const LlmResponse &response);

// Lowercase hex SHA-256 of the UTF-8 prompt bytes.
std::string PromptHash(const std::string &prompt);
std::string Sha256Hex(std::string_view bytes);

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;

  // Returns the assistant message text. Safe to call concurrently.
  virtual std::string Complete(const std::string &prompt) = 0;
};

// Replays recorded responses keyed by PromptHash. Unknown prompts raise
// Error(kFixtureMissing) naming the hash.
class CannedLlm : public LlmBackend {
 public:
  explicit CannedLlm(std::map<std::string, std::string> responses);

  // Fixture file: one {"prompt_sha256", "response"} record per line.
  static CannedLlm FromFile(const std::filesystem::path &path);

  std::string Complete(const std::string &prompt) override;
  size_t size() const { return responses_.size(); }

 private:
  std::map<std::string, std::string> responses_;
};

void WriteCannedFixtures(std::ostream &out,
                         const std::map<std::string, std::string> &responses);

struct RemoteLlmOptions {
  std::string endpoint;
  std::string model = "llama-3.1-8b-instruct";
  std::string api_key;  // defaults to $ECOLINK_LLM_API_KEY when empty
  std::optional<int> seed = 0;
  int max_in_flight = 4;
  RetryPolicy retry;
};

// Chat-completions client:
//   POST {model, messages:[{role, content}], temperature: 0, seed}
//     -> {choices:[{message:{content}}]}
class RemoteLlm : public LlmBackend {
 public:
  explicit RemoteLlm(RemoteLlmOptions options);

  std::string Complete(const std::string &prompt) override;
  nlohmann::json RequestBody(const std::string &prompt) const;

 private:
  RemoteLlmOptions options_;
  std::counting_semaphore<> in_flight_;
};

}  // namespace ecolink

#endif  // ECOLINK_CORE_LLM_H_
