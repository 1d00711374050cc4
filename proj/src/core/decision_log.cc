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

#include "core/decision_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "core/errors.h"
#include "core/ingest.h"

namespace ecolink {

namespace {

std::string ErrnoText() { return std::strerror(errno); }

}  // namespace

ReplayResult ReplayDecisions(std::string_view text) {
  ReplayResult result;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    const bool complete = end != std::string_view::npos;
    if (!complete) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = complete ? end + 1 : end;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      result.decisions.push_back(
          nlohmann::json::parse(line).get<MappingDecision>());
    } catch (const std::exception &) {
      ++result.discarded;
    }
  }
  return result;
}

std::map<std::string, MappingDecision> LatestWins(
    const std::vector<MappingDecision> &decisions) {
  std::map<std::string, MappingDecision> latest;
  for (const MappingDecision &d : decisions) latest[d.component_id] = d;
  return latest;
}

DecisionLog::DecisionLog(std::filesystem::path path) : path_(std::move(path)) {
  std::string existing;
  std::error_code ec;
  if (std::filesystem::exists(path_, ec)) existing = ReadFile(path_);
  ReplayResult replay = ReplayDecisions(existing);
  history_ = std::move(replay.decisions);
  discarded_ = replay.discarded;

  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorCode::kIo, "cannot open " + path_.string() + ": " + ErrnoText());
  }
  if (!existing.empty() && existing.back() != '\n') WriteAll("\n");
}

DecisionLog::~DecisionLog() {
  if (fd_ >= 0) ::close(fd_);
}

void DecisionLog::WriteAll(std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd_, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, "write to " + path_.string() + ": " + ErrnoText());
    }
    bytes.remove_prefix(static_cast<size_t>(n));
  }
  if (::fsync(fd_) != 0) {
    throw Error(ErrorCode::kIo, "fsync " + path_.string() + ": " + ErrnoText());
  }
}

void DecisionLog::Append(const MappingDecision &decision) {
  const std::string line = nlohmann::json(decision).dump() + "\n";
  std::lock_guard<std::mutex> lock(mu_);
  WriteAll(line);
  history_.push_back(decision);
}

std::vector<MappingDecision> DecisionLog::History() const {
  std::lock_guard<std::mutex> lock(mu_);
  return history_;
}

}  // namespace ecolink
