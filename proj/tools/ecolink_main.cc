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

// Command-line front end. Talks to the library only through the C API.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>

#include "CLI11.hpp"
#include "ecolink/ecolink.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBackend = 2;
constexpr int kExitUsage = 64;

// Owning wrappers for the C handles.
struct EmbedderDeleter {
  void operator()(ecolink_embedder *p) const { ecolink_embedder_destroy(p); }
};
struct LlmDeleter {
  void operator()(ecolink_llm *p) const { ecolink_llm_destroy(p); }
};
struct IndexDeleter {
  void operator()(ecolink_index *p) const { ecolink_index_destroy(p); }
};
struct RunDeleter {
  void operator()(ecolink_run *p) const { ecolink_run_destroy(p); }
};
struct ServerDeleter {
  void operator()(ecolink_server *p) const { ecolink_server_destroy(p); }
};
struct StringDeleter {
  void operator()(char *p) const { ecolink_string_free(p); }
};
using Embedder = std::unique_ptr<ecolink_embedder, EmbedderDeleter>;
using Llm = std::unique_ptr<ecolink_llm, LlmDeleter>;
using Index = std::unique_ptr<ecolink_index, IndexDeleter>;
using Run = std::unique_ptr<ecolink_run, RunDeleter>;
using Server = std::unique_ptr<ecolink_server, ServerDeleter>;
using CString = std::unique_ptr<char, StringDeleter>;

// Thrown to unwind with an exit code after the message has been printed.
struct Exit {
  int code;
};

int ExitCodeFor(ecolink_status status) {
  switch (status) {
    case ECOLINK_OK:
      return kExitOk;
    case ECOLINK_ERROR_BACKEND:
    case ECOLINK_ERROR_FIXTURE_MISSING:
      return kExitBackend;
    default:
      return kExitInput;
  }
}

void Check(ecolink_status status, const std::string &what) {
  if (status == ECOLINK_OK) return;
  std::cerr << "ecolink: " << what << ": " << ecolink_last_error() << "\n";
  throw Exit{ExitCodeFor(status)};
}

[[noreturn]] void Usage(const std::string &message) {
  std::cerr << "ecolink: " << message << "\n";
  throw Exit{kExitUsage};
}

struct BackendFlags {
  std::string backend;  // empty: derive from the index fingerprint
  int dim = 256;
  std::string embed_endpoint;
  std::string embed_model;

  void Register(CLI::App *cmd, bool for_index) {
    cmd->add_option("--backend", backend, "Embedding backend")
        ->check(CLI::IsMember({"local-hash", "remote"}));
    cmd->add_option("--dim", dim, "Dimension of the local-hash backend")
        ->check(CLI::Range(8, 1 << 20));
    cmd->add_option("--embed-endpoint", embed_endpoint,
                    "Embedding service URL (remote backend)");
    cmd->add_option("--embed-model", embed_model,
                    "Embedding model name (remote backend)");
    if (for_index && backend.empty()) backend = "local-hash";
  }

  Embedder Create(const char *fingerprint) const {
    ecolink_embedder *raw = nullptr;
    if (backend == "remote") {
      if (embed_endpoint.empty()) Usage("--backend remote requires --embed-endpoint");
      Check(ecolink_embedder_create_remote(embed_endpoint.c_str(),
                                           embed_model.c_str(), &raw),
            "embedding backend");
    } else if (backend == "local-hash" || fingerprint == nullptr) {
      Check(ecolink_embedder_create_local(dim, &raw), "embedding backend");
    } else {
      Check(ecolink_embedder_create_for_fingerprint(fingerprint, &raw),
            "embedding backend");
    }
    return Embedder(raw);
  }
};

struct LlmFlags {
  std::string llm = "canned";
  std::string fixtures;
  std::string endpoint;
  std::string model;

  void Register(CLI::App *cmd) {
    cmd->add_option("--llm", llm, "LLM backend")
        ->check(CLI::IsMember({"canned", "remote"}));
    cmd->add_option("--llm-fixtures", fixtures, "Canned response file (canned LLM)");
    cmd->add_option("--llm-endpoint", endpoint, "Chat completions URL (remote LLM)");
    cmd->add_option("--llm-model", model, "Chat model name (remote LLM)");
  }

  Llm Create() const {
    ecolink_llm *raw = nullptr;
    if (llm == "remote") {
      if (endpoint.empty()) Usage("--llm remote requires --llm-endpoint");
      Check(ecolink_llm_create_remote(endpoint.c_str(), model.c_str(), &raw),
            "LLM backend");
    } else {
      if (fixtures.empty()) Usage("--llm canned requires --llm-fixtures");
      Check(ecolink_llm_create_canned(fixtures.c_str(), &raw), "LLM backend");
    }
    return Llm(raw);
  }
};

std::vector<int> ParseCutoffs(const std::string &text) {
  std::vector<int> ns;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size() || n < 1) throw std::invalid_argument(item);
      ns.push_back(n);
    } catch (const std::exception &) {
      Usage("--n expects a comma-separated list of positive integers, got '" +
            text + "'");
    }
  }
  if (ns.empty()) Usage("--n must name at least one cutoff");
  return ns;
}

Index LoadIndexFor(const std::string &path, Embedder &embedder,
                   const BackendFlags &flags) {
  ecolink_index *raw = nullptr;
  // Peek at the fingerprint first so the live backend can be derived from it.
  Check(ecolink_index_load(path.c_str(), nullptr, &raw, nullptr), "loading index");
  Index index(raw);
  embedder = flags.Create(ecolink_index_fingerprint(index.get()));
  if (std::string(ecolink_embedder_fingerprint(embedder.get())) !=
      ecolink_index_fingerprint(index.get())) {
    std::cerr << "ecolink: warning: index was built with '"
              << ecolink_index_fingerprint(index.get())
              << "' but the live embedding backend is '"
              << ecolink_embedder_fingerprint(embedder.get()) << "'\n";
  }
  return index;
}

int CmdIndex(const std::string &db, const std::string &out, const BackendFlags &flags) {
  Embedder embedder = flags.Create(nullptr);
  ecolink_index *raw = nullptr;
  Check(ecolink_index_build(db.c_str(), embedder.get(), &raw), "building index");
  Index index(raw);
  Check(ecolink_index_save(index.get(), out.c_str()), "saving index");
  std::cout << "indexed " << ecolink_index_size(index.get()) << " activities\n"
            << "fingerprint " << ecolink_index_fingerprint(index.get()) << "\n";
  return kExitOk;
}

struct MatchArgs {
  std::string bom, index, datasheets, mode, report;
  int top_k = 5;
  double threshold = 0.5;
  int parallelism = 4;
  bool timings = false;
};

int CmdMatch(const MatchArgs &args, const BackendFlags &backend, const LlmFlags &llm_flags) {
  Embedder embedder;
  Index index = LoadIndexFor(args.index, embedder, backend);
  Llm llm;
  if (args.mode != "semantic") llm = llm_flags.Create();

  ecolink_match_options options;
  ecolink_match_options_init(&options);
  options.bom_path = args.bom.c_str();
  options.datasheets_dir = args.datasheets.empty() ? nullptr : args.datasheets.c_str();
  options.mode = args.mode.c_str();
  options.top_k = args.top_k;
  options.datasheet_threshold = args.threshold;
  options.parallelism = args.parallelism;

  ecolink_run *raw = nullptr;
  Check(ecolink_match_run(&options, index.get(), embedder.get(), llm.get(), &raw),
        "match");
  Run run(raw);
  Check(ecolink_run_write_report(run.get(), args.report.c_str(), args.timings ? 1 : 0),
        "writing report");

  for (size_t i = 0; i < ecolink_run_warning_count(run.get()); ++i) {
    std::cerr << "ecolink: warning: " << ecolink_run_warning(run.get(), i) << "\n";
  }
  size_t failed = 0;
  for (size_t i = 0; i < ecolink_run_component_count(run.get()); ++i) {
    std::cout << ecolink_run_component_id(run.get(), i) << "\t";
    if (const char *err = ecolink_run_component_error(run.get(), i)) {
      ++failed;
      std::cout << "FAILED\t" << err << "\n";
      continue;
    }
    const char *top = ecolink_run_top_activity(run.get(), i);
    char score[32];
    std::snprintf(score, sizeof(score), "%.4f", ecolink_run_top_score(run.get(), i));
    std::cout << (top ? top : "-") << "\t" << score;
    if (const char *sheet = ecolink_run_datasheet(run.get(), i)) {
      std::cout << "\tdatasheet=" << sheet;
    }
    std::cout << "\n";
  }
  if (failed > 0) {
    std::cerr << "ecolink: " << failed << " component(s) failed; see " << args.report
              << "\n";
  }
  return kExitOk;
}

int CmdEval(const std::vector<std::string> &reports, const std::string &gold,
            const std::string &db, const std::string &cutoffs, const std::string &out) {
  const std::vector<int> ns = ParseCutoffs(cutoffs);
  std::vector<const char *> paths;
  for (const std::string &r : reports) paths.push_back(r.c_str());
  char *table = nullptr;
  char *warnings = nullptr;
  Check(ecolink_eval(paths.data(), paths.size(), gold.c_str(),
                     db.empty() ? nullptr : db.c_str(), ns.data(), ns.size(),
                     out.empty() ? nullptr : out.c_str(), &table, &warnings),
        "eval");
  CString table_owner(table), warnings_owner(warnings);
  if (warnings != nullptr && *warnings != '\0') std::cerr << warnings;
  std::cout << table;
  return kExitOk;
}

struct AblateArgs {
  std::string bom, db, index, datasheets, gold, cutoffs = "1,5", reports_dir, out;
  int top_k = 5;
  double threshold = 0.5;
  int parallelism = 4;
};

int CmdAblate(const AblateArgs &args, const BackendFlags &backend,
              const LlmFlags &llm_flags) {
  const std::vector<int> ns = ParseCutoffs(args.cutoffs);
  Embedder embedder;
  Index index = LoadIndexFor(args.index, embedder, backend);
  Llm llm = llm_flags.Create();
  ecolink_ablation_options options;
  ecolink_ablation_options_init(&options);
  options.bom_path = args.bom.c_str();
  options.db_path = args.db.c_str();
  options.datasheets_dir = args.datasheets.empty() ? nullptr : args.datasheets.c_str();
  options.gold_path = args.gold.c_str();
  options.ns = ns.data();
  options.n_count = ns.size();
  options.top_k = args.top_k;
  options.datasheet_threshold = args.threshold;
  options.parallelism = args.parallelism;
  options.reports_dir = args.reports_dir.empty() ? nullptr : args.reports_dir.c_str();
  options.records_path = args.out.empty() ? nullptr : args.out.c_str();
  char *table = nullptr;
  char *warnings = nullptr;
  Check(ecolink_ablate(&options, index.get(), embedder.get(), llm.get(), &table,
                       &warnings),
        "ablate");
  CString table_owner(table), warnings_owner(warnings);
  if (warnings != nullptr && *warnings != '\0') std::cerr << warnings;
  std::cout << table;
  return kExitOk;
}

std::pair<std::string, int> ParseListen(const std::string &listen) {
  const size_t colon = listen.rfind(':');
  if (colon == std::string::npos) Usage("--listen expects HOST:PORT");
  try {
    size_t used = 0;
    const std::string port_text = listen.substr(colon + 1);
    const int port = std::stoi(port_text, &used);
    if (used != port_text.size() || port < 0 || port > 65535) throw std::out_of_range("port");
    return {listen.substr(0, colon), port};
  } catch (const std::exception &) {
    Usage("--listen expects HOST:PORT, got '" + listen + "'");
  }
}

int CmdServe(const std::string &report, const std::string &bom, const std::string &db,
             const std::string &listen, const std::string &data,
             const std::string &static_dir) {
  const auto [host, port] = ParseListen(listen);

  // Signals are handled on a dedicated thread so the stop call runs outside
  // signal context.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ecolink_server *raw = nullptr;
  Check(ecolink_server_create(report.c_str(), bom.c_str(), db.c_str(), data.c_str(),
                              static_dir.empty() ? nullptr : static_dir.c_str(), &raw),
        "starting review service");
  Server server(raw);
  for (size_t i = 0; i < ecolink_server_warning_count(server.get()); ++i) {
    std::cerr << "ecolink: warning: " << ecolink_server_warning(server.get(), i) << "\n";
  }
  int bound = 0;
  Check(ecolink_server_bind(server.get(), host.c_str(), port, &bound), "binding");
  std::cout << "serving session " << ecolink_server_session_id(server.get()) << " on http://"
            << host << ":" << bound << "\n"
            << std::flush;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    ecolink_server_stop(server.get());
  });
  const ecolink_status status = ecolink_server_run(server.get());
  // Wake the waiter if the server stopped on its own.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  Check(status, "serving");
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Links bill-of-materials components to LCA database activities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ecolink_version());

  BackendFlags backend;
  LlmFlags llm;

  std::string db, out;
  auto *index_cmd = app.add_subcommand("index", "Embed an LCA database into an index file");
  index_cmd->add_option("--db", db, "LCA database (JSON lines)")->required();
  index_cmd->add_option("--out", out, "Index file to write")->required();
  backend.Register(index_cmd, true);

  MatchArgs match;
  auto *match_cmd = app.add_subcommand("match", "Rank LCA activities for every BOM component");
  match_cmd->add_option("--bom", match.bom, "BOM file (CSV)")->required();
  match_cmd->add_option("--index", match.index, "Index file")->required();
  match_cmd->add_option("--datasheets", match.datasheets, "Directory of datasheets");
  match_cmd->add_option("--mode", match.mode, "semantic | llm | llm-datasheet")->required();
  match_cmd->add_option("--report", match.report, "Run report to write")->required();
  match_cmd->add_option("--top-k", match.top_k, "Shortlist length")->check(CLI::PositiveNumber);
  match_cmd->add_option("--threshold", match.threshold, "Datasheet cosine threshold")
      ->check(CLI::Range(-1.0, 1.0));
  match_cmd->add_option("--parallelism", match.parallelism, "Concurrent components")
      ->check(CLI::PositiveNumber);
  match_cmd->add_flag("--timings", match.timings, "Record per-stage milliseconds");
  backend.Register(match_cmd, false);
  llm.Register(match_cmd);

  std::vector<std::string> reports;
  std::string gold, eval_db, cutoffs = "1,5", eval_out;
  auto *eval_cmd = app.add_subcommand("eval", "Compute Hits@n of run reports");
  eval_cmd->add_option("--report", reports, "Run report (repeatable)")->required();
  eval_cmd->add_option("--gold", gold, "Gold labels (JSON lines)")->required();
  eval_cmd->add_option("--db", eval_db, "LCA database used to check gold ids");
  eval_cmd->add_option("--n", cutoffs, "Comma-separated cutoffs");
  eval_cmd->add_option("--out", eval_out, "Machine-readable records to write");

  AblateArgs ablate;
  auto *ablate_cmd =
      app.add_subcommand("ablate", "Run and score all three modes on the same inputs");
  ablate_cmd->add_option("--bom", ablate.bom, "BOM file (CSV)")->required();
  ablate_cmd->add_option("--db", ablate.db, "LCA database (JSON lines)")->required();
  ablate_cmd->add_option("--index", ablate.index, "Index file")->required();
  ablate_cmd->add_option("--datasheets", ablate.datasheets, "Directory of datasheets");
  ablate_cmd->add_option("--gold", ablate.gold, "Gold labels (JSON lines)")->required();
  ablate_cmd->add_option("--n", ablate.cutoffs, "Comma-separated cutoffs");
  ablate_cmd->add_option("--top-k", ablate.top_k, "Shortlist length")->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--threshold", ablate.threshold, "Datasheet cosine threshold")
      ->check(CLI::Range(-1.0, 1.0));
  ablate_cmd->add_option("--parallelism", ablate.parallelism, "Concurrent components")
      ->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--reports-dir", ablate.reports_dir, "Write one report per mode here");
  ablate_cmd->add_option("--out", ablate.out, "Machine-readable records to write");
  backend.Register(ablate_cmd, false);
  llm.Register(ablate_cmd);

  std::string serve_report, serve_bom, serve_db, listen = "127.0.0.1:8080", data_dir,
                                                 static_dir;
  auto *serve_cmd = app.add_subcommand("serve", "Serve the expert review API for a run");
  serve_cmd->add_option("--report", serve_report, "Run report")->required();
  serve_cmd->add_option("--bom", serve_bom, "BOM file (CSV)")->required();
  serve_cmd->add_option("--db", serve_db, "LCA database (JSON lines)")->required();
  serve_cmd->add_option("--listen", listen, "HOST:PORT to listen on");
  serve_cmd->add_option("--data", data_dir, "Session data directory")->required();
  serve_cmd->add_option("--static", static_dir, "Directory of UI files to serve at /");

  uint64_t seed = 42;
  std::string demo_out;
  auto *demo_cmd = app.add_subcommand("generate-demo", "Write the synthetic demo corpus");
  demo_cmd->add_option("--seed", seed, "Generator seed");
  demo_cmd->add_option("--out", demo_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*index_cmd) return CmdIndex(db, out, backend);
    if (*match_cmd) {
      if (match.mode != "semantic" && match.mode != "llm" && match.mode != "llm-datasheet") {
        Usage("unknown mode '" + match.mode + "' (expected semantic, llm or llm-datasheet)");
      }
      return CmdMatch(match, backend, llm);
    }
    if (*eval_cmd) return CmdEval(reports, gold, eval_db, cutoffs, eval_out);
    if (*ablate_cmd) return CmdAblate(ablate, backend, llm);
    if (*serve_cmd) {
      return CmdServe(serve_report, serve_bom, serve_db, listen, data_dir, static_dir);
    }
    if (*demo_cmd) {
      Check(ecolink_demo_write(seed, demo_out.c_str()), "generate-demo");
      std::cout << "wrote demo corpus to " << demo_out << "\n";
      return kExitOk;
    }
  } catch (const Exit &e) {
    return e.code;
  }
  return kExitUsage;
}
