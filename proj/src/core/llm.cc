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

#include "core/llm.h"

#include <openssl/evp.h>

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "core/errors.h"
#include "core/ingest.h"

namespace ecolink {

namespace {

constexpr const char *kInstructions =
    "You are an expert in industrial manufacturing and life cycle "
    "assessment.\n"
    "Describe the manufacturing process used to create the component below, "
    "so that it can be matched to a production activity in a life cycle "
    "assessment database.\n"
    "Answer with exactly two labeled sections and nothing else:\n"
    "Activity name: <name of the production activity>\n"
    "Activity information: <description of the manufacturing process and "
    "the materials involved>\n";

constexpr const char *kDatasheetBegin = "<<<DATASHEET";
constexpr const char *kDatasheetEnd = "DATASHEET>>>";

constexpr std::string_view kNameLabel = "activity name:";
constexpr std::string_view kInfoLabel = "activity information:";

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Skips indentation and markdown decoration in front of a label.
size_t LabelStart(std::string_view line) {
  size_t i = 0;
  while (i < line.size() &&
         (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == '*' ||
          line[i] == '#' || line[i] == '-' || line[i] == '>')) {
    ++i;
  }
  return i;
}

bool StartsWithLabel(std::string_view line, std::string_view label,
                     std::string *rest) {
  const size_t start = LabelStart(line);
  if (line.size() - start < label.size()) return false;
  for (size_t i = 0; i < label.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(line[start + i])) != label[i]) {
      return false;
    }
  }
  std::string_view tail = line.substr(start + label.size());
  // Closing markdown emphasis, e.g. "**Activity name:** X".
  while (!tail.empty() && tail.front() == '*') tail.remove_prefix(1);
  *rest = std::string(tail);
  return true;
}

std::vector<std::string> SplitLines(const std::string &text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string BuildPrompt(const BomEntry &entry,
                        const std::optional<Datasheet> &datasheet) {
  std::string prompt = kInstructions;
  prompt += "\nComponent name: " + entry.name + "\n";
  prompt += "Supplier: " + entry.supplier + "\n";
  prompt += "Material: " + entry.material + "\n";
  if (datasheet) {
    prompt += "\nTechnical datasheet (" + datasheet->filename + "):\n";
    prompt += kDatasheetBegin;
    prompt += "\n" + datasheet->body;
    if (datasheet->body.empty() || datasheet->body.back() != '\n') prompt += "\n";
    prompt += kDatasheetEnd;
    prompt += "\n";
  }
  return prompt;
}

LlmResponse ParseLlmResponse(const std::string &raw) {
  LlmResponse response;
  response.raw = raw;
  const std::vector<std::string> lines = SplitLines(raw);

  std::optional<size_t> name_line, info_line;
  std::string name_rest, info_rest;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string rest;
    if (!name_line && StartsWithLabel(lines[i], kNameLabel, &rest)) {
      name_line = i;
      name_rest = rest;
    } else if (!info_line && StartsWithLabel(lines[i], kInfoLabel, &rest)) {
      info_line = i;
      info_rest = rest;
    }
  }
  if (!name_line || !info_line) return response;

  response.activity_name = Trim(name_rest);
  std::string info = info_rest;
  for (size_t i = *info_line + 1; i < lines.size(); ++i) {
    std::string ignored;
    if (StartsWithLabel(lines[i], kNameLabel, &ignored) ||
        StartsWithLabel(lines[i], kInfoLabel, &ignored)) {
      break;
    }
    info += "\n" + lines[i];
  }
  response.activity_information = Trim(info);
  response.parsed = true;
  return response;
}

std::string RankingQueryText(const LlmResponse &response) {
  if (!response.parsed ||
      (response.activity_name.empty() && response.activity_information.empty())) {
    return response.raw;
  }
  return response.activity_name + "\n" + response.activity_information;
}

std::string PromptHash(const std::string &prompt) { return Sha256Hex(prompt); }

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

CannedLlm::CannedLlm(std::map<std::string, std::string> responses)
    : responses_(std::move(responses)) {}

CannedLlm CannedLlm::FromFile(const std::filesystem::path &path) {
  std::istringstream in(ReadFile(path));
  std::map<std::string, std::string> responses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      responses[record.at("prompt_sha256").get<std::string>()] =
          record.at("response").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kParse, path.string() + ": line " +
                                         std::to_string(line_no) + ": " +
                                         e.what());
    }
  }
  return CannedLlm(std::move(responses));
}

std::string CannedLlm::Complete(const std::string &prompt) {
  if (prompt.empty()) throw Error(ErrorCode::kInvalidArgument, "empty prompt");
  const std::string hash = PromptHash(prompt);
  auto it = responses_.find(hash);
  if (it == responses_.end()) {
    throw Error(ErrorCode::kFixtureMissing, "no canned response for prompt " + hash);
  }
  return it->second;
}

void WriteCannedFixtures(std::ostream &out,
                         const std::map<std::string, std::string> &responses) {
  for (const auto &[hash, response] : responses) {
    out << nlohmann::json{{"prompt_sha256", hash}, {"response", response}}.dump()
        << '\n';
  }
}

RemoteLlm::RemoteLlm(RemoteLlmOptions options)
    : options_(std::move(options)),
      in_flight_(std::max(1, options_.max_in_flight)) {
  if (options_.endpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "remote LLM backend requires an endpoint");
  }
  if (options_.api_key.empty()) options_.api_key = GetEnv("ECOLINK_LLM_API_KEY");
}

nlohmann::json RemoteLlm::RequestBody(const std::string &prompt) const {
  nlohmann::json body = {
      {"model", options_.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", 0},
  };
  if (options_.seed) body["seed"] = *options_.seed;
  return body;
}

std::string RemoteLlm::Complete(const std::string &prompt) {
  if (prompt.empty()) throw Error(ErrorCode::kInvalidArgument, "empty prompt");
  const nlohmann::json body = RequestBody(prompt);
  in_flight_.acquire();
  nlohmann::json response;
  try {
    response = CallWithRetry(options_.retry, [&] {
      return PostJson(options_.endpoint, body, options_.api_key);
    });
  } catch (...) {
    in_flight_.release();
    throw;
  }
  in_flight_.release();
  try {
    return response.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw BackendError(std::string("malformed chat response: ") + e.what(), 200,
                       false);
  }
}

}  // namespace ecolink
