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

#ifndef ECOLINK_CORE_DECISION_LOG_H_
#define ECOLINK_CORE_DECISION_LOG_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "core/model.h"

namespace ecolink {

struct ReplayResult {
  std::vector<MappingDecision> decisions;  // file order
  size_t discarded = 0;                    // unparsable or partial lines
};

// Parses decision log text. A trailing record without a newline is kept when
// it parses as a whole record, and discarded otherwise.
ReplayResult ReplayDecisions(std::string_view text);

// Latest decision per component; later entries supersede earlier ones.
std::map<std::string, MappingDecision> LatestWins(
    const std::vector<MappingDecision> &decisions);

// Append-only JSON-lines decision store. Every append is written with a
// single write(2) and fsync'ed before returning. On open, a file that does
// not end in a newline gets one appended so a torn record from a crash stays
// isolated on its own line; the file never shrinks.
class DecisionLog {
 public:
  explicit DecisionLog(std::filesystem::path path);
  ~DecisionLog();

  DecisionLog(const DecisionLog &) = delete;
  DecisionLog &operator=(const DecisionLog &) = delete;

  void Append(const MappingDecision &decision);

  std::vector<MappingDecision> History() const;
  size_t discarded() const { return discarded_; }
  const std::filesystem::path &path() const { return path_; }

 private:
  void WriteAll(std::string_view bytes);

  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex mu_;
  std::vector<MappingDecision> history_;
  size_t discarded_ = 0;
};

}  // namespace ecolink

#endif  // ECOLINK_CORE_DECISION_LOG_H_
