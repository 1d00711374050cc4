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

#include "core/service.h"

#include "httplib.h"

#include <chrono>
#include <ctime>
#include <regex>
#include <set>
#include <sstream>

#include "core/errors.h"
#include "core/llm.h"

namespace ecolink {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

ServiceResponse Reply(int status, json body) {
  body["v"] = kSchemaVersion;
  return {status, std::move(body)};
}

ServiceResponse Fail(int status, const std::string &message) {
  return Reply(status, json{{"error", message}});
}

}  // namespace

std::string NowIso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()) % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(ms.count()));
  return buf;
}

struct ReviewService::Session {
  std::string id;
  std::vector<BomEntry> bom;
  std::vector<LcaActivity> db;
  RunReport report;
  std::map<std::string, const BomEntry *> components;
  std::map<std::string, const LcaActivity *> activities;
  std::map<std::string, const ComponentResult *> results;
  std::unique_ptr<DecisionLog> log;
  std::map<std::string, MappingDecision> latest;
  std::vector<std::string> warnings;

  json TopCandidate(const std::string &component_id) const {
    auto it = results.find(component_id);
    if (it == results.end() || it->second->ranking.candidates.empty()) return nullptr;
    const ScoredActivity &top = it->second->ranking.candidates.front();
    return json{{"activity_id", top.activity_id},
                {"name", activities.at(top.activity_id)->name},
                {"score", top.score}};
  }

  json DecisionJson(const std::string &component_id) const {
    auto it = latest.find(component_id);
    if (it == latest.end()) return nullptr;
    return it->second;
  }
};

ReviewService::ReviewService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.clock) options_.clock = NowIso8601;
}

ReviewService::~ReviewService() = default;

void ReviewService::LoadSession(std::vector<BomEntry> bom,
                                std::vector<LcaActivity> db, RunReport report) {
  auto session = std::make_unique<Session>();
  session->bom = std::move(bom);
  session->db = std::move(db);
  session->report = std::move(report);
  for (const BomEntry &e : session->bom) session->components[e.id] = &e;
  for (const LcaActivity &a : session->db) session->activities[a.id] = &a;
  for (const ComponentResult &r : session->report.results) {
    if (!session->components.count(r.ranking.component_id)) {
      session->warnings.push_back("report component not in BOM: " +
                                  r.ranking.component_id);
      continue;
    }
    for (const ScoredActivity &c : r.ranking.candidates) {
      if (!session->activities.count(c.activity_id)) {
        throw Error(ErrorCode::kValidation,
                    "report references unknown activity: " + c.activity_id);
      }
    }
    session->results[r.ranking.component_id] = &r;
  }

  std::ostringstream report_text;
  WriteRunReport(report_text, session->report);
  session->id = "s-" + Sha256Hex(report_text.str()).substr(0, 12);

  std::filesystem::create_directories(options_.data_dir);
  session->log = std::make_unique<DecisionLog>(options_.data_dir / "decisions.jsonl");
  if (session->log->discarded() > 0) {
    session->warnings.push_back(std::to_string(session->log->discarded()) +
                                " unreadable decision record(s) skipped");
  }
  for (const MappingDecision &d : session->log->History()) {
    if (!session->components.count(d.component_id) ||
        !session->activities.count(d.chosen_activity_id)) {
      session->warnings.push_back("ignoring logged decision for " + d.component_id +
                                  " -> " + d.chosen_activity_id);
      continue;
    }
    session->latest[d.component_id] = d;
  }

  std::unique_lock lock(mu_);
  session_ = std::move(session);
}

bool ReviewService::loaded() const {
  std::shared_lock lock(mu_);
  return session_ != nullptr;
}

std::string ReviewService::session_id() const {
  std::shared_lock lock(mu_);
  return session_ ? session_->id : std::string();
}

std::vector<std::string> ReviewService::warnings() const {
  std::shared_lock lock(mu_);
  return session_ ? session_->warnings : std::vector<std::string>{};
}

std::filesystem::path ReviewService::log_path() const {
  std::shared_lock lock(mu_);
  return session_ ? session_->log->path() : std::filesystem::path();
}

std::optional<ServiceResponse> ReviewService::CheckSession(
    const std::optional<std::string> &session) const {
  if (session && (!session_ || *session != session_->id)) {
    return Fail(404, "unknown session: " + *session);
  }
  if (!session_) return Fail(409, "no run loaded");
  return std::nullopt;
}

ServiceResponse ReviewService::Health() const {
  return Reply(200, json{{"status", "ok"}});
}

ServiceResponse ReviewService::Components(
    const std::optional<std::string> &session) const {
  std::shared_lock lock(mu_);
  if (auto err = CheckSession(session)) return *err;
  json items = json::array();
  for (const BomEntry &e : session_->bom) {
    const bool decided = session_->latest.count(e.id) > 0;
    items.push_back({{"component", e},
                     {"status", decided ? "decided" : "pending"},
                     {"top_candidate", session_->TopCandidate(e.id)},
                     {"decision", session_->DecisionJson(e.id)}});
  }
  return Reply(200, json{{"session", session_->id},
                         {"mode", ModeName(session_->report.mode)},
                         {"components", items}});
}

ServiceResponse ReviewService::Candidates(
    const std::optional<std::string> &session,
    const std::string &component_id) const {
  std::shared_lock lock(mu_);
  if (auto err = CheckSession(session)) return *err;
  auto component = session_->components.find(component_id);
  if (component == session_->components.end()) {
    return Fail(404, "unknown component: " + component_id);
  }
  json body = {{"component", *component->second}};
  auto it = session_->results.find(component_id);
  if (it == session_->results.end()) {
    body["mode"] = ModeName(session_->report.mode);
    body["query_text"] = "";
    body["candidates"] = json::array();
    body["datasheet"] = nullptr;
    body["error"] = "component not in run report";
  } else {
    const ComponentResult &r = *it->second;
    json candidates = json::array();
    for (size_t i = 0; i < r.ranking.candidates.size(); ++i) {
      const ScoredActivity &c = r.ranking.candidates[i];
      const LcaActivity &a = *session_->activities.at(c.activity_id);
      candidates.push_back({{"rank", i + 1},
                            {"activity_id", c.activity_id},
                            {"name", a.name},
                            {"description", a.description},
                            {"emission_factor", a.emission_factor},
                            {"unit", a.unit},
                            {"score", c.score}});
    }
    body["mode"] = ModeName(r.ranking.mode);
    body["query_text"] = r.ranking.query_text;
    body["candidates"] = candidates;
    body["datasheet"] = r.datasheet ? json{{"filename", r.datasheet->filename},
                                           {"score", r.datasheet->score}}
                                    : json(nullptr);
    body["error"] = r.error ? json(*r.error) : json(nullptr);
  }
  body["decision"] = session_->DecisionJson(component_id);
  return Reply(200, std::move(body));
}

ServiceResponse ReviewService::Decide(const std::optional<std::string> &session,
                                      const std::string &component_id,
                                      const json &body) {
  std::unique_lock lock(mu_);
  if (auto err = CheckSession(session)) return *err;
  if (!session_->components.count(component_id)) {
    return Fail(404, "unknown component: " + component_id);
  }
  if (!body.is_object() || !body.contains("activity_id") ||
      !body.at("activity_id").is_string()) {
    return Fail(422, "activity_id (string) is required");
  }
  const std::string activity_id = body.at("activity_id").get<std::string>();
  if (!session_->activities.count(activity_id)) {
    return Fail(422, "unknown activity: " + activity_id);
  }
  if (body.contains("source")) {
    const json &source = body.at("source");
    static const std::regex kSource("accepted|accepted_rank_[1-9][0-9]*|expert_override");
    if (!source.is_string() || !std::regex_match(source.get<std::string>(), kSource)) {
      return Fail(422, "invalid source");
    }
  }
  if (body.contains("reviewer") && !body.at("reviewer").is_string()) {
    return Fail(422, "reviewer must be a string");
  }

  MappingDecision decision;
  decision.component_id = component_id;
  decision.chosen_activity_id = activity_id;
  decision.source = DecisionSource::kExpertOverride;
  // The recorded source follows from the shortlist, whatever the client says.
  if (auto it = session_->results.find(component_id); it != session_->results.end()) {
    const auto &candidates = it->second->ranking.candidates;
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].activity_id == activity_id) {
        decision.source = DecisionSource::kAcceptedRank;
        decision.rank = static_cast<int>(i) + 1;
        break;
      }
    }
  }
  decision.reviewer = body.value("reviewer", options_.default_reviewer);
  decision.decided_at = options_.clock();

  try {
    session_->log->Append(decision);
  } catch (const Error &e) {
    return Fail(500, e.what());
  }
  session_->latest[component_id] = decision;
  return Reply(200, json{{"decision", decision}});
}

std::vector<MappingDecision> ReviewService::CurrentDecisions() const {
  std::shared_lock lock(mu_);
  std::vector<MappingDecision> out;
  if (!session_) return out;
  for (const BomEntry &e : session_->bom) {
    auto it = session_->latest.find(e.id);
    if (it != session_->latest.end()) out.push_back(it->second);
  }
  return out;
}

ServiceResponse ReviewService::FootprintSummary(
    const std::optional<std::string> &session) const {
  std::shared_lock lock(mu_);
  if (auto err = CheckSession(session)) return *err;
  std::vector<MappingDecision> decisions;
  for (const auto &[id, d] : session_->latest) decisions.push_back(d);
  const Footprint footprint = ComputeFootprint(decisions, session_->bom, session_->db);
  return Reply(200, FootprintJson(footprint));
}

ServiceResponse ReviewService::Activities(
    const std::optional<std::string> &session) const {
  std::shared_lock lock(mu_);
  if (auto err = CheckSession(session)) return *err;
  json items = json::array();
  for (const LcaActivity &a : session_->db) {
    items.push_back({{"activity_id", a.id},
                     {"name", a.name},
                     {"emission_factor", a.emission_factor},
                     {"unit", a.unit}});
  }
  return Reply(200, json{{"activities", items}});
}

// HTTP front end.

namespace {

void Send(httplib::Response &res, const ServiceResponse &r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

std::optional<std::string> SessionParam(const httplib::Request &req) {
  if (req.matches.size() > 1 && req.matches[1].matched) {
    return req.matches[1].str();
  }
  return std::nullopt;
}

}  // namespace

ReviewServer::ReviewServer(ReviewService &service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  constexpr const char *kPrefix = "(?:/sessions/([^/]+))?";
  auto &s = *server_;
  // Plain SO_REUSEADDR so a second server cannot share an occupied port.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  s.Get("/health", [this](const httplib::Request &, httplib::Response &res) {
    Send(res, service_.Health());
  });
  s.Get(std::string(kPrefix) + "/components",
        [this](const httplib::Request &req, httplib::Response &res) {
          Send(res, service_.Components(SessionParam(req)));
        });
  s.Get(std::string(kPrefix) + "/components/([^/]+)/candidates",
        [this](const httplib::Request &req, httplib::Response &res) {
          Send(res, service_.Candidates(SessionParam(req), req.matches[2].str()));
        });
  s.Post(std::string(kPrefix) + "/components/([^/]+)/decision",
         [this](const httplib::Request &req, httplib::Response &res) {
           json body;
           try {
             body = json::parse(req.body);
           } catch (const json::parse_error &e) {
             Send(res, Fail(422, std::string("malformed JSON body: ") + e.what()));
             return;
           }
           Send(res, service_.Decide(SessionParam(req), req.matches[2].str(), body));
         });
  s.Get(std::string(kPrefix) + "/footprint",
        [this](const httplib::Request &req, httplib::Response &res) {
          Send(res, service_.FootprintSummary(SessionParam(req)));
        });
  s.Get(std::string(kPrefix) + "/activities",
        [this](const httplib::Request &req, httplib::Response &res) {
          Send(res, service_.Activities(SessionParam(req)));
        });
  s.set_exception_handler(
      [](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception &e) {
          message = e.what();
        } catch (...) {
        }
        Send(res, Fail(500, message));
      });
}

ReviewServer::~ReviewServer() { Stop(); }

bool ReviewServer::MountStatic(const std::filesystem::path &dir) {
  return server_->set_mount_point("/", dir.string());
}

bool ReviewServer::Bind(const std::string &host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    return port_ > 0;
  }
  if (!server_->bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

bool ReviewServer::Serve() { return server_->listen_after_bind(); }

void ReviewServer::WaitUntilReady() const { server_->wait_until_ready(); }

void ReviewServer::Stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace ecolink
