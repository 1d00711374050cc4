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


#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <regex>
#include <sstream>
#include <thread>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "support/temp_dir.h"

extern char **environ;

namespace {

using ecolink::testing::Slurp;
using ecolink::testing::Spit;
using ecolink::testing::TempDir;

const std::string kCli = ECOLINK_CLI;
const std::filesystem::path kDemo = std::filesystem::path(ECOLINK_SOURCE_DIR) / "data" / "demo";
const std::filesystem::path kGolden = std::filesystem::path(ECOLINK_SOURCE_DIR) / "tests" / "golden";

struct Result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Quote(const std::string &arg) {
  std::string q = "'";
  for (char c : arg) {
    if (c == '\'') q += "'\\''";
    else q.push_back(c);
  }
  return q + "'";
}

Result Run(const TempDir &dir, const std::vector<std::string> &args) {
  std::string command = Quote(kCli);
  for (const std::string &a : args) command += " " + Quote(a);
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  command += " >" + Quote(out.string()) + " 2>" + Quote(err.string());
  const int status = std::system(command.c_str());
  Result r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

std::string Demo(const std::string &name) { return (kDemo / name).string(); }

std::string BuildDemoIndex(const TempDir &dir) {
  const std::string path = (dir / "demo.idx").string();
  const Result r = Run(dir, {"index", "--db", Demo("lca_db.jsonl"), "--out", path});
  REQUIRE(r.exit_code == 0);
  return path;
}

// A background `ecolink serve` process.
class ServeProcess {
 public:
  ServeProcess(const TempDir &dir, const std::vector<std::string> &args) : log_(dir / "serve.log") {
    std::vector<std::string> argv_strings = {kCli, "serve"};
    argv_strings.insert(argv_strings.end(), args.begin(), args.end());
    argv_strings.push_back("--listen");
    argv_strings.push_back("127.0.0.1:0");
    std::vector<char *> argv;
    for (std::string &s : argv_strings) argv.push_back(s.data());
    argv.push_back(nullptr);
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 1, log_.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_addopen(&actions, 2, (log_.string() + ".err").c_str(),
                                     O_WRONLY | O_CREAT | O_TRUNC, 0644);
    REQUIRE(posix_spawn(&pid_, kCli.c_str(), &actions, nullptr, argv.data(), environ) == 0);
    posix_spawn_file_actions_destroy(&actions);

    const std::regex ready("serving session (s-[0-9a-f]{12}) on http://127\\.0\\.0\\.1:([0-9]+)");
    for (int i = 0; i < 200 && port_ == 0; ++i) {
      std::smatch m;
      const std::string text = Slurp(log_);
      if (std::regex_search(text, m, ready)) {
        session_ = m[1];
        port_ = std::stoi(m[2]);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(25));
    }
    REQUIRE(port_ > 0);
  }

  ~ServeProcess() {
    if (pid_ > 0) Stop();
  }

  int Stop() {
    kill(pid_, SIGTERM);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  int port() const { return port_; }
  const std::string &session() const { return session_; }

 private:
  std::filesystem::path log_;
  pid_t pid_ = -1;
  int port_ = 0;
  std::string session_;
};

TEST_SUITE("cli") {

TEST_CASE("index prints count and fingerprint") {
  TempDir dir;
  std::ostringstream db;
  for (int i = 1; i <= 8; ++i) {
    db << nlohmann::json{{"id", "a" + std::to_string(i)},
                         {"name", "activity " + std::to_string(i)},
                         {"description", "synthetic"},
                         {"emission_factor", i},
                         {"unit", "kg CO2e/kg"}}
              .dump()
       << "\n";
  }
  Spit(dir / "db.jsonl", db.str());
  const Result r = Run(dir, {"index", "--db", (dir / "db.jsonl").string(), "--out",
                             (dir / "a.idx").string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out == "indexed 8 activities\nfingerprint local-hash-256\n");
  Run(dir, {"index", "--db", (dir / "db.jsonl").string(), "--out", (dir / "b.idx").string()});
  CHECK(Slurp(dir / "a.idx") == Slurp(dir / "b.idx"));
}

TEST_CASE("index exit codes") {
  TempDir dir;
  Result r = Run(dir, {"index", "--db", "/nonexistent/db.jsonl", "--out", (dir / "x").string()});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("/nonexistent/db.jsonl") != std::string::npos);
  r = Run(dir, {"index", "--db", Demo("lca_db.jsonl")});
  CHECK(r.exit_code == 64);
  r = Run(dir, {"index", "--db", Demo("lca_db.jsonl"), "--out", (dir / "x").string(), "--backend",
                "remote", "--embed-endpoint", "http://127.0.0.1:1/v1/embeddings"});
  CHECK(r.exit_code == 2);
  r = Run(dir, {"index", "--db", Demo("lca_db.jsonl"), "--out", (dir / "x").string(), "--backend",
                "remote"});
  CHECK(r.exit_code == 64);
}

TEST_CASE("match in semantic mode needs no LLM flags") {
  TempDir dir;
  const std::string index = BuildDemoIndex(dir);
  const Result r = Run(dir, {"match", "--bom", Demo("bom.csv"), "--index", index, "--mode",
                             "semantic", "--report", (dir / "r.jsonl").string()});
  CHECK(r.exit_code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 8);
  CHECK(Slurp(dir / "r.jsonl").find("\"mode\":\"semantic\"") != std::string::npos);
}

TEST_CASE("match usage errors") {
  TempDir dir;
  const std::string index = BuildDemoIndex(dir);
  Result r = Run(dir, {"match", "--bom", Demo("bom.csv"), "--index", index, "--mode", "fuzzy",
                       "--report", (dir / "r.jsonl").string()});
  CHECK(r.exit_code == 64);
  CHECK(r.err.find("fuzzy") != std::string::npos);
  r = Run(dir, {"match", "--bom", Demo("bom.csv"), "--index", index, "--mode", "llm", "--report",
                (dir / "r.jsonl").string()});
  CHECK(r.exit_code == 64);
  r = Run(dir, {"frobnicate"});
  CHECK(r.exit_code == 64);
  r = Run(dir, {});
  CHECK(r.exit_code == 64);
}

TEST_CASE("match setup failures exit 1, component failures exit 0") {
  TempDir dir;
  const std::string index = BuildDemoIndex(dir);
  Result r = Run(dir, {"match", "--bom", "/nonexistent.csv", "--index", index, "--mode",
                       "semantic", "--report", (dir / "r.jsonl").string()});
  CHECK(r.exit_code == 1);
  Spit(dir / "corrupt.idx", Slurp(index).substr(0, 100));
  r = Run(dir, {"match", "--bom", Demo("bom.csv"), "--index", (dir / "corrupt.idx").string(),
                "--mode", "semantic", "--report", (dir / "r.jsonl").string()});
  CHECK(r.exit_code == 1);

  Spit(dir / "empty.jsonl", "");
  r = Run(dir, {"match", "--bom", Demo("bom.csv"), "--index", index, "--mode", "llm",
                "--llm-fixtures", (dir / "empty.jsonl").string(), "--report",
                (dir / "r.jsonl").string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("FAILED") != std::string::npos);
  CHECK(Slurp(dir / "r.jsonl").find("no canned response") != std::string::npos);
}

TEST_CASE("match writes timings only on request") {
  TempDir dir;
  const std::string index = BuildDemoIndex(dir);
  Run(dir, {"match", "--bom", Demo("bom.csv"), "--index", index, "--mode", "semantic",
            "--report", (dir / "r.jsonl").string(), "--timings"});
  CHECK(Slurp(dir / "r.jsonl").find("\"millis\"") != std::string::npos);
}

TEST_CASE("eval over the golden report") {
  TempDir dir;
  const std::string golden = (kGolden / "report-llm-datasheet.jsonl").string();
  Result r = Run(dir, {"eval", "--report", golden, "--gold", Demo("gold.jsonl"), "--db",
                       Demo("lca_db.jsonl"), "--out", (dir / "rec.jsonl").string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out == Slurp(kGolden / "eval-table.txt"));
  CHECK(Slurp(dir / "rec.jsonl") == Slurp(kGolden / "eval-records.jsonl"));

  r = Run(dir, {"eval", "--report", golden, "--gold", Demo("gold.jsonl"), "--n", "1"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Hits@5") == std::string::npos);
  CHECK(r.out.find("Hits@1") != std::string::npos);

  r = Run(dir, {"eval", "--report", golden, "--gold", Demo("gold.jsonl"), "--n", "1,x"});
  CHECK(r.exit_code == 64);
}

TEST_CASE("eval input errors exit 1") {
  TempDir dir;
  const std::string golden = (kGolden / "report-llm-datasheet.jsonl").string();
  Spit(dir / "empty.jsonl", "");
  Result r = Run(dir, {"eval", "--report", golden, "--gold", (dir / "empty.jsonl").string()});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("no labels") != std::string::npos);

  Spit(dir / "corrupt.jsonl", "{\"component_id\":\"c1\",\"activity_id\":\"a06\"}\n{oops\n");
  r = Run(dir, {"eval", "--report", golden, "--gold", (dir / "corrupt.jsonl").string()});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("line 2") != std::string::npos);

  Spit(dir / "unknown.jsonl", "{\"component_id\":\"c1\",\"activity_id\":\"a99\"}\n");
  r = Run(dir, {"eval", "--report", golden, "--gold", (dir / "unknown.jsonl").string(), "--db",
                Demo("lca_db.jsonl")});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("a99") != std::string::npos);
}

TEST_CASE("ablate prints all three rows") {
  TempDir dir;
  const std::string index = BuildDemoIndex(dir);
  const Result r = Run(dir, {"ablate", "--bom", Demo("bom.csv"), "--db", Demo("lca_db.jsonl"),
                             "--index", index, "--datasheets", Demo("datasheets"), "--gold",
                             Demo("gold.jsonl"), "--llm-fixtures", Demo("llm_fixtures.jsonl")});
  CHECK(r.exit_code == 0);
  CHECK(r.out == Slurp(kGolden / "ablation-table.txt"));
}

TEST_CASE("generate-demo reproduces the bundled corpus") {
  TempDir dir;
  const Result r = Run(dir, {"generate-demo", "--out", (dir / "demo").string()});
  CHECK(r.exit_code == 0);
  for (const char *name : {"bom.csv", "lca_db.jsonl", "gold.jsonl", "llm_fixtures.jsonl"}) {
    CHECK(Slurp(dir / "demo" / name) == Slurp(kDemo / name));
  }
}

TEST_CASE("serve answers health and lists the demo components") {
  TempDir dir;
  const std::string golden = (kGolden / "report-llm-datasheet.jsonl").string();
  const std::vector<std::string> args = {"--report", golden, "--bom", Demo("bom.csv"), "--db",
                                         Demo("lca_db.jsonl"), "--data", (dir / "data").string()};
  std::string first_body;
  {
    ServeProcess serve(dir, args);
    httplib::Client client("127.0.0.1", serve.port());
    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(nlohmann::json::parse(health->body).at("status") == "ok");
    auto components = client.Get("/components");
    REQUIRE(components);
    const auto body = nlohmann::json::parse(components->body);
    CHECK(body.at("components").size() == 8);
    auto posted = client.Post("/sessions/" + serve.session() + "/components/c3/decision",
                              R"({"activity_id":"a04"})", "application/json");
    REQUIRE(posted);
    CHECK(posted->status == 200);
    first_body = client.Get("/components")->body;
    CHECK(serve.Stop() == 0);
  }
  // Restarting over the same data directory restores the decided status.
  ServeProcess again(dir, args);
  httplib::Client client("127.0.0.1", again.port());
  auto components = client.Get("/components");
  REQUIRE(components);
  CHECK(components->body == first_body);
  CHECK(nlohmann::json::parse(components->body)["components"][2]["status"] == "decided");
}

TEST_CASE("serve exits 1 when the port is taken") {
  TempDir dir;
  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  const Result r = Run(dir, {"serve", "--report", (kGolden / "report-llm-datasheet.jsonl").string(),
                             "--bom", Demo("bom.csv"), "--db", Demo("lca_db.jsonl"), "--data",
                             (dir / "data").string(), "--listen",
                             "127.0.0.1:" + std::to_string(port)});
  CHECK(r.exit_code == 1);
}

}  // TEST_SUITE

}  // namespace
