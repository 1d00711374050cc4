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

#include "httplib.h"

#include "core/http_client.h"

#include <cstdlib>
#include <thread>

#include "core/errors.h"

namespace ecolink {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl Split(const std::string &url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint is not a URL: " + url);
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool RetryableStatus(int status) { return status == 429 || status >= 500; }

}  // namespace

nlohmann::json PostJson(const std::string &url, const nlohmann::json &body,
                        const std::string &bearer_token,
                        std::chrono::seconds timeout) {
  const SplitUrl target = Split(url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + bearer_token);
  }
  auto result = client.Post(target.path, headers, body.dump(), "application/json");
  if (!result) {
    throw BackendError("request to " + url + " failed: " +
                           httplib::to_string(result.error()),
                       0, true);
  }
  if (result->status < 200 || result->status >= 300) {
    throw BackendError("request to " + url + " returned status " +
                           std::to_string(result->status),
                       result->status, RetryableStatus(result->status));
  }
  try {
    return nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::parse_error &e) {
    throw BackendError("unparsable response from " + url + ": " + e.what(),
                       result->status, false);
  }
}

nlohmann::json CallWithRetry(const RetryPolicy &policy,
                             const std::function<nlohmann::json()> &fn) {
  std::chrono::milliseconds backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const BackendError &e) {
      if (!e.retryable() || attempt >= policy.max_attempts) throw;
    }
    if (policy.sleep) {
      policy.sleep(backoff);
    } else {
      std::this_thread::sleep_for(backoff);
    }
    backoff *= 2;
  }
}

std::string GetEnv(const char *name) {
  const char *value = std::getenv(name);
  return value == nullptr ? std::string() : std::string(value);
}

}  // namespace ecolink
