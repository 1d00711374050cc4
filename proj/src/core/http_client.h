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

#ifndef ECOLINK_CORE_HTTP_CLIENT_H_
#define ECOLINK_CORE_HTTP_CLIENT_H_

#include <chrono>
#include <functional>
#include <string>

#include "json.hpp"

namespace ecolink {

// Posts a JSON body to an http(s) URL and returns the parsed JSON response.
// Throws BackendError on transport failure, non-2xx status or an unparsable
// body. The bearer token is omitted when empty.
nlohmann::json PostJson(const std::string &url, const nlohmann::json &body,
                        const std::string &bearer_token,
                        std::chrono::seconds timeout = std::chrono::seconds(120));

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  // Replaceable for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// Runs fn, retrying retryable BackendErrors with exponential backoff
// (initial, 2x initial, ...). The last error is rethrown.
nlohmann::json CallWithRetry(const RetryPolicy &policy,
                             const std::function<nlohmann::json()> &fn);

// Reads an environment variable, empty when unset.
std::string GetEnv(const char *name);

}  // namespace ecolink

#endif  // ECOLINK_CORE_HTTP_CLIENT_H_
