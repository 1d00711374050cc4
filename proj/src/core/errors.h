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

#ifndef ECOLINK_CORE_ERRORS_H_
#define ECOLINK_CORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ecolink {

// Error categories. They map one-to-one onto the C API status codes.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kValidation = 4,
  kBackend = 5,
  kIntegrity = 6,
  kNotFound = 7,
  kConflict = 8,
  kFixtureMissing = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Transport-level backend failure. retryable() is true for connection
// errors, 429 and 5xx responses.
class BackendError : public Error {
 public:
  BackendError(const std::string &message, int status, bool retryable)
      : Error(ErrorCode::kBackend, message),
        status_(status),
        retryable_(retryable) {}

  int status() const { return status_; }
  bool retryable() const { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

}  // namespace ecolink

#endif  // ECOLINK_CORE_ERRORS_H_
