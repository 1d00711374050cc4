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

#include "ecolink/ecolink.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/embedding.h"
#include "core/errors.h"
#include "core/eval.h"
#include "core/fixtures.h"
#include "core/ingest.h"
#include "core/llm.h"
#include "core/pipeline.h"
#include "core/service.h"
#include "core/vector_index.h"

using namespace ecolink;

struct ecolink_embedder {
  std::unique_ptr<EmbeddingBackend> backend;
  std::string fingerprint;
};

struct ecolink_llm {
  std::unique_ptr<LlmBackend> backend;
};

struct ecolink_index {
  ActivityIndex index;
};

struct ecolink_run {
  RunReport report;
};

struct ecolink_server {
  ReviewService service;
  std::unique_ptr<ReviewServer> http;
  std::string session_id;
  std::vector<std::string> warnings;

  explicit ecolink_server(ServiceOptions options) : service(std::move(options)) {}
};

namespace {

thread_local std::string last_error;

ecolink_status StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return ECOLINK_ERROR_INVALID_ARGUMENT;
    case ErrorCode::kIo:
      return ECOLINK_ERROR_IO;
    case ErrorCode::kParse:
      return ECOLINK_ERROR_PARSE;
    case ErrorCode::kValidation:
      return ECOLINK_ERROR_VALIDATION;
    case ErrorCode::kBackend:
      return ECOLINK_ERROR_BACKEND;
    case ErrorCode::kIntegrity:
      return ECOLINK_ERROR_INTEGRITY;
    case ErrorCode::kNotFound:
      return ECOLINK_ERROR_NOT_FOUND;
    case ErrorCode::kConflict:
      return ECOLINK_ERROR_CONFLICT;
    case ErrorCode::kFixtureMissing:
      return ECOLINK_ERROR_FIXTURE_MISSING;
  }
  return ECOLINK_ERROR_UNKNOWN;
}

ecolink_status Fail(ecolink_status status, const std::string &message) {
  last_error = message;
  return status;
}

// Runs fn and converts exceptions into status codes.
template <typename Fn>
ecolink_status Guard(Fn &&fn) {
  try {
    fn();
    last_error.clear();
    return ECOLINK_OK;
  } catch (const Error &e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return Fail(ECOLINK_ERROR_UNKNOWN, "out of memory");
  } catch (const std::filesystem::filesystem_error &e) {
    return Fail(ECOLINK_ERROR_IO, e.what());
  } catch (const std::exception &e) {
    return Fail(ECOLINK_ERROR_UNKNOWN, e.what());
  } catch (...) {
    return Fail(ECOLINK_ERROR_UNKNOWN, "unknown error");
  }
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string Join(const std::vector<std::string> &lines) {
  std::string out;
  for (const std::string &l : lines) out += l + "\n";
  return out;
}

PipelineConfig ConfigFrom(int top_k, double threshold, int parallelism) {
  PipelineConfig config;
  config.top_k = top_k;
  config.datasheet_threshold = threshold;
  config.parallelism = parallelism;
  auto errors = ValidateConfig(config);
  if (!errors.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                errors.front().field + " " + errors.front().message);
  }
  return config;
}

std::vector<Datasheet> PoolFrom(const char *dir) {
  if (dir == nullptr || *dir == '\0') return {};
  return LoadDatasheets(dir);
}

void RequireValidBom(const std::vector<BomEntry> &bom) {
  auto errors = ValidateBom(bom);
  if (!errors.empty()) {
    throw Error(ErrorCode::kValidation, "invalid BOM: component " +
                                            errors.front().id + ": " +
                                            errors.front().message);
  }
}

void WriteText(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
}

RunReport LoadReport(const std::string &path) {
  std::istringstream in(ReadFile(path));
  try {
    return ParseRunReport(in);
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

}  // namespace

extern "C" {

const char *ecolink_version(void) { return "1.0.0"; }

const char *ecolink_last_error(void) { return last_error.c_str(); }

const char *ecolink_status_name(ecolink_status status) {
  switch (status) {
    case ECOLINK_OK:
      return "ok";
    case ECOLINK_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case ECOLINK_ERROR_IO:
      return "i/o error";
    case ECOLINK_ERROR_PARSE:
      return "parse error";
    case ECOLINK_ERROR_VALIDATION:
      return "validation error";
    case ECOLINK_ERROR_BACKEND:
      return "backend error";
    case ECOLINK_ERROR_INTEGRITY:
      return "integrity error";
    case ECOLINK_ERROR_NOT_FOUND:
      return "not found";
    case ECOLINK_ERROR_CONFLICT:
      return "conflict";
    case ECOLINK_ERROR_FIXTURE_MISSING:
      return "fixture missing";
    case ECOLINK_ERROR_NULL_POINTER:
      return "null pointer";
    case ECOLINK_ERROR_UNKNOWN:
      break;
  }
  return "unknown error";
}

void ecolink_string_free(char *str) { std::free(str); }

ecolink_status ecolink_embedder_create_local(int dim, ecolink_embedder **out) {
  if (out == nullptr) return Fail(ECOLINK_ERROR_NULL_POINTER, "out is null");
  *out = nullptr;
  return Guard([&] {
    auto e = std::make_unique<ecolink_embedder>();
    e->backend = std::make_unique<LocalHashEmbedder>(dim);
    e->fingerprint = e->backend->Fingerprint();
    *out = e.release();
  });
}

ecolink_status ecolink_embedder_create_remote(const char *endpoint,
                                              const char *model,
                                              ecolink_embedder **out) {
  if (out == nullptr || endpoint == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "endpoint and out are required");
  }
  *out = nullptr;
  return Guard([&] {
    RemoteEmbedderOptions options;
    options.endpoint = endpoint;
    if (model != nullptr && *model != '\0') options.model = model;
    auto e = std::make_unique<ecolink_embedder>();
    e->backend = std::make_unique<RemoteEmbedder>(std::move(options));
    e->fingerprint = e->backend->Fingerprint();
    *out = e.release();
  });
}

ecolink_status ecolink_embedder_create_for_fingerprint(const char *fingerprint,
                                                       ecolink_embedder **out) {
  if (out == nullptr || fingerprint == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "fingerprint and out are required");
  }
  *out = nullptr;
  static const std::regex kLocal("local-hash-([0-9]{1,6})");
  std::cmatch m;
  if (!std::regex_match(fingerprint, m, kLocal)) {
    return Fail(ECOLINK_ERROR_INVALID_ARGUMENT,
                std::string("cannot recreate backend for fingerprint '") +
                    fingerprint + "'; pass the backend explicitly");
  }
  return ecolink_embedder_create_local(std::stoi(m[1].str()), out);
}

const char *ecolink_embedder_fingerprint(const ecolink_embedder *embedder) {
  return embedder == nullptr ? "" : embedder->fingerprint.c_str();
}

void ecolink_embedder_destroy(ecolink_embedder *embedder) { delete embedder; }

ecolink_status ecolink_llm_create_canned(const char *fixtures_path, ecolink_llm **out) {
  if (out == nullptr || fixtures_path == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "fixtures_path and out are required");
  }
  *out = nullptr;
  return Guard([&] {
    auto l = std::make_unique<ecolink_llm>();
    l->backend = std::make_unique<CannedLlm>(CannedLlm::FromFile(fixtures_path));
    *out = l.release();
  });
}

ecolink_status ecolink_llm_create_remote(const char *endpoint, const char *model,
                                         ecolink_llm **out) {
  if (out == nullptr || endpoint == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "endpoint and out are required");
  }
  *out = nullptr;
  return Guard([&] {
    RemoteLlmOptions options;
    options.endpoint = endpoint;
    if (model != nullptr && *model != '\0') options.model = model;
    auto l = std::make_unique<ecolink_llm>();
    l->backend = std::make_unique<RemoteLlm>(std::move(options));
    *out = l.release();
  });
}

void ecolink_llm_destroy(ecolink_llm *llm) { delete llm; }

ecolink_status ecolink_index_build(const char *db_path, ecolink_embedder *embedder,
                                   ecolink_index **out) {
  if (out == nullptr || db_path == nullptr || embedder == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "db_path, embedder and out are required");
  }
  *out = nullptr;
  return Guard([&] {
    const std::vector<LcaActivity> activities = LoadLcaDbFile(db_path);
    auto idx = std::make_unique<ecolink_index>();
    idx->index = BuildIndex(activities, *embedder->backend);
    *out = idx.release();
  });
}

ecolink_status ecolink_index_save(const ecolink_index *index, const char *path) {
  if (index == nullptr || path == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "index and path are required");
  }
  return Guard([&] { SaveIndex(index->index, path); });
}

ecolink_status ecolink_index_load(const char *path, const ecolink_embedder *live,
                                  ecolink_index **out, int *fingerprint_mismatch) {
  if (out == nullptr || path == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "path and out are required");
  }
  *out = nullptr;
  if (fingerprint_mismatch != nullptr) *fingerprint_mismatch = 0;
  return Guard([&] {
    std::optional<std::string> fp;
    if (live != nullptr) fp = live->fingerprint;
    LoadedIndex loaded = LoadIndex(path, fp);
    if (fingerprint_mismatch != nullptr) {
      *fingerprint_mismatch = loaded.fingerprint_mismatch ? 1 : 0;
    }
    auto idx = std::make_unique<ecolink_index>();
    idx->index = std::move(loaded.index);
    *out = idx.release();
  });
}

size_t ecolink_index_size(const ecolink_index *index) {
  return index == nullptr ? 0 : index->index.size();
}

size_t ecolink_index_dim(const ecolink_index *index) {
  return index == nullptr ? 0 : index->index.dim();
}

const char *ecolink_index_fingerprint(const ecolink_index *index) {
  return index == nullptr ? "" : index->index.fingerprint().c_str();
}

void ecolink_index_destroy(ecolink_index *index) { delete index; }

void ecolink_match_options_init(ecolink_match_options *options) {
  if (options == nullptr) return;
  const PipelineConfig defaults;
  options->bom_path = nullptr;
  options->datasheets_dir = nullptr;
  options->mode = "semantic";
  options->top_k = defaults.top_k;
  options->datasheet_threshold = defaults.datasheet_threshold;
  options->parallelism = defaults.parallelism;
}

ecolink_status ecolink_match_run(const ecolink_match_options *options,
                                 const ecolink_index *index,
                                 ecolink_embedder *embedder, ecolink_llm *llm,
                                 ecolink_run **out) {
  if (options == nullptr || index == nullptr || embedder == nullptr ||
      out == nullptr || options->bom_path == nullptr || options->mode == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER,
                "options (with bom_path and mode), index, embedder and out are required");
  }
  *out = nullptr;
  const auto mode = ParseMode(options->mode);
  if (!mode) {
    return Fail(ECOLINK_ERROR_INVALID_ARGUMENT,
                std::string("unknown mode: ") + options->mode);
  }
  if (*mode != Mode::kSemanticOnly && llm == nullptr) {
    return Fail(ECOLINK_ERROR_INVALID_ARGUMENT,
                std::string("mode ") + options->mode + " requires an LLM backend");
  }
  return Guard([&] {
    const PipelineConfig config = ConfigFrom(
        options->top_k, options->datasheet_threshold, options->parallelism);
    const std::vector<BomEntry> bom = LoadBomFile(options->bom_path);
    RequireValidBom(bom);
    const std::vector<Datasheet> pool = *mode == Mode::kLlmDatasheet
                                            ? PoolFrom(options->datasheets_dir)
                                            : std::vector<Datasheet>{};
    Backends backends{embedder->backend.get(), llm ? llm->backend.get() : nullptr};
    auto run = std::make_unique<ecolink_run>();
    run->report = RunBom(bom, *mode, index->index, pool, config, backends);
    *out = run.release();
  });
}

ecolink_status ecolink_run_write_report(const ecolink_run *run, const char *path,
                                        int include_timings) {
  if (run == nullptr || path == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "run and path are required");
  }
  return Guard([&] {
    std::ostringstream text;
    WriteRunReport(text, run->report, include_timings != 0);
    WriteText(path, text.str());
  });
}

size_t ecolink_run_component_count(const ecolink_run *run) {
  return run == nullptr ? 0 : run->report.results.size();
}

const char *ecolink_run_component_id(const ecolink_run *run, size_t i) {
  if (run == nullptr || i >= run->report.results.size()) return nullptr;
  return run->report.results[i].ranking.component_id.c_str();
}

const char *ecolink_run_top_activity(const ecolink_run *run, size_t i) {
  if (run == nullptr || i >= run->report.results.size()) return nullptr;
  const auto &c = run->report.results[i].ranking.candidates;
  return c.empty() ? nullptr : c.front().activity_id.c_str();
}

double ecolink_run_top_score(const ecolink_run *run, size_t i) {
  if (run == nullptr || i >= run->report.results.size()) return 0.0;
  const auto &c = run->report.results[i].ranking.candidates;
  return c.empty() ? 0.0 : c.front().score;
}

const char *ecolink_run_component_error(const ecolink_run *run, size_t i) {
  if (run == nullptr || i >= run->report.results.size()) return nullptr;
  const auto &e = run->report.results[i].error;
  return e ? e->c_str() : nullptr;
}

const char *ecolink_run_datasheet(const ecolink_run *run, size_t i) {
  if (run == nullptr || i >= run->report.results.size()) return nullptr;
  const auto &d = run->report.results[i].datasheet;
  return d ? d->filename.c_str() : nullptr;
}

size_t ecolink_run_warning_count(const ecolink_run *run) {
  return run == nullptr ? 0 : run->report.warnings.size();
}

const char *ecolink_run_warning(const ecolink_run *run, size_t i) {
  if (run == nullptr || i >= run->report.warnings.size()) return nullptr;
  return run->report.warnings[i].c_str();
}

void ecolink_run_destroy(ecolink_run *run) { delete run; }

ecolink_status ecolink_eval(const char *const *report_paths, size_t report_count,
                            const char *gold_path, const char *db_path,
                            const int *ns, size_t n_count,
                            const char *records_path, char **table_out,
                            char **warnings_out) {
  if (report_paths == nullptr || report_count == 0 || gold_path == nullptr ||
      ns == nullptr || n_count == 0 || table_out == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER,
                "report paths, gold_path, cutoffs and table_out are required");
  }
  *table_out = nullptr;
  if (warnings_out != nullptr) *warnings_out = nullptr;
  return Guard([&] {
    const std::vector<GoldLabel> gold = LoadGoldLabelFile(gold_path);
    if (gold.empty()) throw Error(ErrorCode::kInvalidArgument, "no labels");
    std::optional<std::set<std::string>> known;
    if (db_path != nullptr) {
      known.emplace();
      for (const LcaActivity &a : LoadLcaDbFile(db_path)) known->insert(a.id);
    }
    const std::vector<int> cutoffs(ns, ns + n_count);
    std::vector<EvalResult> rows;
    std::vector<std::string> warnings;
    for (size_t r = 0; r < report_count; ++r) {
      const RunReport report = LoadReport(report_paths[r]);
      for (const ComponentResult &c : report.results) {
        if (!c.ok()) {
          warnings.push_back(ModeName(report.mode) + ": component " +
                             c.ranking.component_id +
                             " failed and counts as a miss: " + *c.error);
        }
      }
      EvalResult row =
          HitsAt(report.Rankings(), gold, cutoffs, known ? &*known : nullptr);
      row.mode = report.mode;
      for (const std::string &id : row.missing) {
        bool failed = false;
        for (const ComponentResult &c : report.results) {
          failed |= c.ranking.component_id == id;
        }
        if (!failed) {
          warnings.push_back(ModeName(report.mode) + ": no ranking for gold component " + id);
        }
      }
      rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const EvalResult &a, const EvalResult &b) {
      return static_cast<int>(a.mode) < static_cast<int>(b.mode);
    });
    if (records_path != nullptr) {
      std::ostringstream records;
      WriteEvalRecords(records, rows);
      WriteText(records_path, records.str());
    }
    *table_out = Dup(RenderTable(rows));
    if (warnings_out != nullptr) *warnings_out = Dup(Join(warnings));
  });
}

void ecolink_ablation_options_init(ecolink_ablation_options *options) {
  if (options == nullptr) return;
  const PipelineConfig defaults;
  *options = ecolink_ablation_options{};
  options->top_k = defaults.top_k;
  options->datasheet_threshold = defaults.datasheet_threshold;
  options->parallelism = defaults.parallelism;
}

ecolink_status ecolink_ablate(const ecolink_ablation_options *options,
                              const ecolink_index *index, ecolink_embedder *embedder,
                              ecolink_llm *llm, char **table_out,
                              char **warnings_out) {
  if (options == nullptr || index == nullptr || embedder == nullptr ||
      llm == nullptr || table_out == nullptr || options->bom_path == nullptr ||
      options->db_path == nullptr || options->gold_path == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER,
                "options (bom, db, gold), index, embedder, llm and table_out are required");
  }
  *table_out = nullptr;
  if (warnings_out != nullptr) *warnings_out = nullptr;
  return Guard([&] {
    PipelineConfig config = ConfigFrom(options->top_k, options->datasheet_threshold,
                                       options->parallelism);
    if (options->ns != nullptr && options->n_count > 0) {
      config.hits_at.assign(options->ns, options->ns + options->n_count);
    }
    const std::vector<BomEntry> bom = LoadBomFile(options->bom_path);
    RequireValidBom(bom);
    const std::vector<LcaActivity> db = LoadLcaDbFile(options->db_path);
    const std::vector<GoldLabel> gold = LoadGoldLabelFile(options->gold_path);
    if (gold.empty()) throw Error(ErrorCode::kInvalidArgument, "no labels");
    const std::vector<Datasheet> pool = PoolFrom(options->datasheets_dir);
    Backends backends{embedder->backend.get(), llm->backend.get()};
    AblationResult result =
        AblationReport(bom, pool, db, index->index, gold, config, backends);
    if (options->reports_dir != nullptr) {
      std::filesystem::create_directories(options->reports_dir);
      for (const RunReport &report : result.reports) {
        std::ostringstream text;
        WriteRunReport(text, report);
        WriteText((std::filesystem::path(options->reports_dir) /
                   ("report-" + ModeName(report.mode) + ".jsonl"))
                      .string(),
                  text.str());
      }
    }
    if (options->records_path != nullptr) {
      std::ostringstream records;
      WriteEvalRecords(records, result.rows);
      WriteText(options->records_path, records.str());
    }
    std::vector<std::string> warnings = result.warnings;
    for (const RunReport &report : result.reports) {
      warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
    }
    *table_out = Dup(RenderTable(result.rows));
    if (warnings_out != nullptr) *warnings_out = Dup(Join(warnings));
  });
}

ecolink_status ecolink_demo_write(uint64_t seed, const char *dir) {
  if (dir == nullptr) return Fail(ECOLINK_ERROR_NULL_POINTER, "dir is required");
  return Guard([&] { WriteDemoCorpus(GenerateDemoCorpus(seed), dir); });
}

ecolink_status ecolink_server_create(const char *report_path, const char *bom_path,
                                     const char *db_path, const char *data_dir,
                                     const char *static_dir, ecolink_server **out) {
  if (out == nullptr || report_path == nullptr || bom_path == nullptr ||
      db_path == nullptr || data_dir == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER,
                "report, bom, db, data dir and out are required");
  }
  *out = nullptr;
  return Guard([&] {
    ServiceOptions options;
    options.data_dir = data_dir;
    auto server = std::make_unique<ecolink_server>(std::move(options));
    std::vector<BomEntry> bom = LoadBomFile(bom_path);
    RequireValidBom(bom);
    server->service.LoadSession(std::move(bom), LoadLcaDbFile(db_path),
                                LoadReport(report_path));
    server->session_id = server->service.session_id();
    server->warnings = server->service.warnings();
    server->http = std::make_unique<ReviewServer>(server->service);
    if (static_dir != nullptr && !server->http->MountStatic(static_dir)) {
      throw Error(ErrorCode::kIo, std::string("cannot serve static files from ") +
                                      static_dir);
    }
    *out = server.release();
  });
}

const char *ecolink_server_session_id(const ecolink_server *server) {
  return server == nullptr ? "" : server->session_id.c_str();
}

ecolink_status ecolink_server_bind(ecolink_server *server, const char *host,
                                   int port, int *bound_port) {
  if (server == nullptr || host == nullptr) {
    return Fail(ECOLINK_ERROR_NULL_POINTER, "server and host are required");
  }
  if (!server->http->Bind(host, port)) {
    return Fail(ECOLINK_ERROR_IO, std::string("cannot bind ") + host + ":" +
                                      std::to_string(port));
  }
  if (bound_port != nullptr) *bound_port = server->http->port();
  last_error.clear();
  return ECOLINK_OK;
}

ecolink_status ecolink_server_run(ecolink_server *server) {
  if (server == nullptr) return Fail(ECOLINK_ERROR_NULL_POINTER, "server is null");
  return Guard([&] {
    if (!server->http->Serve()) throw Error(ErrorCode::kIo, "server stopped with an error");
  });
}

void ecolink_server_stop(ecolink_server *server) {
  if (server != nullptr) server->http->Stop();
}

size_t ecolink_server_warning_count(const ecolink_server *server) {
  return server == nullptr ? 0 : server->warnings.size();
}

const char *ecolink_server_warning(const ecolink_server *server, size_t i) {
  if (server == nullptr || i >= server->warnings.size()) return nullptr;
  return server->warnings[i].c_str();
}

void ecolink_server_destroy(ecolink_server *server) { delete server; }

}  // extern "C"
