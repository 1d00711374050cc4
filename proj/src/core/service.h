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

#ifndef ECOLINK_CORE_SERVICE_H_
#define ECOLINK_CORE_SERVICE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "core/decision_log.h"
#include "core/model.h"
#include "core/pipeline.h"

namespace httplib {
class Server;
}

namespace ecolink {

// Response of a service call: HTTP-style status plus a JSON body. Every body
// carries "v": 1.
struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  std::filesystem::path data_dir;
  std::string default_reviewer = "expert";
  // Returns the current time as ISO-8601 UTC; replaceable for tests.
  std::function<std::string()> clock;
};

// Review workflow over one completed pipeline run: shortlists per component,
// confirm/override decisions persisted to an append-only log, and the running
// footprint. GETs are side-effect free; decisions are serialized through the
// log's single writer and visible to any call that starts after Decide
// returns.
class ReviewService {
 public:
  explicit ReviewService(ServiceOptions options);
  ~ReviewService();

  // Opens (or replays) <data_dir>/decisions.jsonl. Replayed decisions naming
  // components or activities outside this session are ignored with a warning.
  void LoadSession(std::vector<BomEntry> bom, std::vector<LcaActivity> db,
                   RunReport report);

  bool loaded() const;
  std::string session_id() const;
  std::vector<std::string> warnings() const;

  // A session id of nullopt addresses the loaded session.
  ServiceResponse Health() const;
  ServiceResponse Components(const std::optional<std::string> &session) const;
  ServiceResponse Candidates(const std::optional<std::string> &session,
                             const std::string &component_id) const;
  ServiceResponse Decide(const std::optional<std::string> &session,
                         const std::string &component_id,
                         const nlohmann::json &body);
  ServiceResponse FootprintSummary(const std::optional<std::string> &session) const;
  ServiceResponse Activities(const std::optional<std::string> &session) const;

  // Latest-wins decisions currently in effect, in BOM order.
  std::vector<MappingDecision> CurrentDecisions() const;
  std::filesystem::path log_path() const;

 private:
  struct Session;

  std::optional<ServiceResponse> CheckSession(
      const std::optional<std::string> &session) const;

  ServiceOptions options_;
  mutable std::shared_mutex mu_;
  std::unique_ptr<Session> session_;
};

std::string NowIso8601();

// HTTP/1.1 front end for ReviewService.
class ReviewServer {
 public:
  explicit ReviewServer(ReviewService &service);
  ~ReviewServer();

  // Serves files under dir at "/" (e.g. a built review UI bundle).
  bool MountStatic(const std::filesystem::path &dir);

  // Binds host:port; port 0 picks a free port. Returns false on failure.
  bool Bind(const std::string &host, int port);
  int port() const { return port_; }

  // Blocks until Stop() is called.
  bool Serve();
  // Returns once Serve() is accepting connections.
  void WaitUntilReady() const;
  void Stop();

 private:
  ReviewService &service_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

}  // namespace ecolink

#endif  // ECOLINK_CORE_SERVICE_H_
