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

/*
 * C interface to the ecolink library: links bill-of-materials components to
 * life cycle assessment activities and scores the links.
 *
 * Objects are opaque handles created by *_create / *_build / *_load calls
 * and released by the matching *_destroy call. Every fallible call returns
 * an ecolink_status; on failure ecolink_last_error() describes the problem
 * (the message is thread-local and valid until the next call on the same
 * thread). Strings returned through char** out-parameters are owned by the
 * caller and released with ecolink_string_free(). Strings returned directly
 * are owned by the handle they came from.
 */
#ifndef ECOLINK_ECOLINK_H_
#define ECOLINK_ECOLINK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ECOLINK_EXPORT __declspec(dllexport)
#else
#define ECOLINK_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ecolink_status {
  ECOLINK_OK = 0,
  ECOLINK_ERROR_INVALID_ARGUMENT = 1,
  ECOLINK_ERROR_IO = 2,
  ECOLINK_ERROR_PARSE = 3,
  ECOLINK_ERROR_VALIDATION = 4,
  ECOLINK_ERROR_BACKEND = 5,
  ECOLINK_ERROR_INTEGRITY = 6,
  ECOLINK_ERROR_NOT_FOUND = 7,
  ECOLINK_ERROR_CONFLICT = 8,
  ECOLINK_ERROR_FIXTURE_MISSING = 9,
  ECOLINK_ERROR_NULL_POINTER = 10,
  ECOLINK_ERROR_UNKNOWN = 99
} ecolink_status;

typedef struct ecolink_embedder ecolink_embedder;
typedef struct ecolink_llm ecolink_llm;
typedef struct ecolink_index ecolink_index;
typedef struct ecolink_run ecolink_run;
typedef struct ecolink_server ecolink_server;

ECOLINK_EXPORT const char *ecolink_version(void);
ECOLINK_EXPORT const char *ecolink_last_error(void);
ECOLINK_EXPORT const char *ecolink_status_name(ecolink_status status);
ECOLINK_EXPORT void ecolink_string_free(char *str);

/* Embedding backends. */

/* Deterministic hashing embedder; dim must be >= 8. */
ECOLINK_EXPORT ecolink_status ecolink_embedder_create_local(int dim,
                                                            ecolink_embedder **out);
/* Remote embedding service. model may be NULL for the default. The API key
 * is read from ECOLINK_EMBED_API_KEY. */
ECOLINK_EXPORT ecolink_status ecolink_embedder_create_remote(const char *endpoint,
                                                             const char *model,
                                                             ecolink_embedder **out);
/* Picks the backend an index fingerprint names. Only local-hash fingerprints
 * can be recreated this way. */
ECOLINK_EXPORT ecolink_status ecolink_embedder_create_for_fingerprint(
    const char *fingerprint, ecolink_embedder **out);
ECOLINK_EXPORT const char *ecolink_embedder_fingerprint(const ecolink_embedder *embedder);
ECOLINK_EXPORT void ecolink_embedder_destroy(ecolink_embedder *embedder);

/* Chat LLM backends. */

/* Replays responses from a {prompt_sha256, response} JSON-lines file. */
ECOLINK_EXPORT ecolink_status ecolink_llm_create_canned(const char *fixtures_path,
                                                        ecolink_llm **out);
/* Chat-completions endpoint, temperature 0. API key from ECOLINK_LLM_API_KEY. */
ECOLINK_EXPORT ecolink_status ecolink_llm_create_remote(const char *endpoint,
                                                        const char *model,
                                                        ecolink_llm **out);
ECOLINK_EXPORT void ecolink_llm_destroy(ecolink_llm *llm);

/* Activity index. */

ECOLINK_EXPORT ecolink_status ecolink_index_build(const char *db_path,
                                                  ecolink_embedder *embedder,
                                                  ecolink_index **out);
ECOLINK_EXPORT ecolink_status ecolink_index_save(const ecolink_index *index,
                                                 const char *path);
/* live may be NULL. When given and its fingerprint differs from the stored
 * one, *fingerprint_mismatch is set to 1 (the load still succeeds). */
ECOLINK_EXPORT ecolink_status ecolink_index_load(const char *path,
                                                 const ecolink_embedder *live,
                                                 ecolink_index **out,
                                                 int *fingerprint_mismatch);
ECOLINK_EXPORT size_t ecolink_index_size(const ecolink_index *index);
ECOLINK_EXPORT size_t ecolink_index_dim(const ecolink_index *index);
ECOLINK_EXPORT const char *ecolink_index_fingerprint(const ecolink_index *index);
ECOLINK_EXPORT void ecolink_index_destroy(ecolink_index *index);

/* Pipeline runs. */

typedef struct ecolink_match_options {
  const char *bom_path;
  const char *datasheets_dir; /* NULL: empty pool */
  const char *mode;           /* "semantic", "llm" or "llm-datasheet" */
  int top_k;                  /* default 5 */
  double datasheet_threshold; /* default 0.5 */
  int parallelism;            /* default 4 */
} ecolink_match_options;

ECOLINK_EXPORT void ecolink_match_options_init(ecolink_match_options *options);

/* Runs the pipeline over a BOM. Per-component failures are recorded in the
 * run, not returned as errors. llm may be NULL in semantic mode. */
ECOLINK_EXPORT ecolink_status ecolink_match_run(const ecolink_match_options *options,
                                                const ecolink_index *index,
                                                ecolink_embedder *embedder,
                                                ecolink_llm *llm,
                                                ecolink_run **out);
ECOLINK_EXPORT ecolink_status ecolink_run_write_report(const ecolink_run *run,
                                                       const char *path,
                                                       int include_timings);
ECOLINK_EXPORT size_t ecolink_run_component_count(const ecolink_run *run);
ECOLINK_EXPORT const char *ecolink_run_component_id(const ecolink_run *run, size_t i);
/* NULL when the component has no candidates. */
ECOLINK_EXPORT const char *ecolink_run_top_activity(const ecolink_run *run, size_t i);
ECOLINK_EXPORT double ecolink_run_top_score(const ecolink_run *run, size_t i);
/* NULL when the component succeeded. */
ECOLINK_EXPORT const char *ecolink_run_component_error(const ecolink_run *run, size_t i);
/* Matched datasheet filename, NULL when none. */
ECOLINK_EXPORT const char *ecolink_run_datasheet(const ecolink_run *run, size_t i);
ECOLINK_EXPORT size_t ecolink_run_warning_count(const ecolink_run *run);
ECOLINK_EXPORT const char *ecolink_run_warning(const ecolink_run *run, size_t i);
ECOLINK_EXPORT void ecolink_run_destroy(ecolink_run *run);

/* Evaluation. */

/* Scores one or more run reports against gold labels. db_path may be NULL
 * (gold activity ids are then not checked). records_path, when not NULL,
 * receives {mode, n, numerator, denominator, ratio} records. *table_out gets
 * the human-readable table; *warnings_out (may be NULL) gets newline-joined
 * warnings about components counted as misses. */
ECOLINK_EXPORT ecolink_status ecolink_eval(const char *const *report_paths,
                                           size_t report_count,
                                           const char *gold_path,
                                           const char *db_path,
                                           const int *ns, size_t n_count,
                                           const char *records_path,
                                           char **table_out,
                                           char **warnings_out);

typedef struct ecolink_ablation_options {
  const char *bom_path;
  const char *db_path;
  const char *datasheets_dir; /* NULL: empty pool */
  const char *gold_path;
  const int *ns;              /* NULL: {1, 5} */
  size_t n_count;
  int top_k;
  double datasheet_threshold;
  int parallelism;
  const char *reports_dir;    /* NULL: reports are not written */
  const char *records_path;   /* NULL: no machine records */
} ecolink_ablation_options;

ECOLINK_EXPORT void ecolink_ablation_options_init(ecolink_ablation_options *options);

/* Runs the semantic, llm and llm-datasheet modes over the same inputs and
 * index and renders the comparison table into *table_out. */
ECOLINK_EXPORT ecolink_status ecolink_ablate(const ecolink_ablation_options *options,
                                             const ecolink_index *index,
                                             ecolink_embedder *embedder,
                                             ecolink_llm *llm, char **table_out,
                                             char **warnings_out);

/* Demo corpus. */

ECOLINK_EXPORT ecolink_status ecolink_demo_write(uint64_t seed, const char *dir);

/* Review service. */

ECOLINK_EXPORT ecolink_status ecolink_server_create(const char *report_path,
                                                    const char *bom_path,
                                                    const char *db_path,
                                                    const char *data_dir,
                                                    const char *static_dir,
                                                    ecolink_server **out);
ECOLINK_EXPORT const char *ecolink_server_session_id(const ecolink_server *server);
/* port 0 picks a free port; *bound_port receives the port in use. */
ECOLINK_EXPORT ecolink_status ecolink_server_bind(ecolink_server *server,
                                                  const char *host, int port,
                                                  int *bound_port);
/* Blocks until ecolink_server_stop() is called from another thread. */
ECOLINK_EXPORT ecolink_status ecolink_server_run(ecolink_server *server);
ECOLINK_EXPORT void ecolink_server_stop(ecolink_server *server);
ECOLINK_EXPORT size_t ecolink_server_warning_count(const ecolink_server *server);
ECOLINK_EXPORT const char *ecolink_server_warning(const ecolink_server *server,
                                                  size_t i);
ECOLINK_EXPORT void ecolink_server_destroy(ecolink_server *server);

#ifdef __cplusplus
}
#endif

#endif /* ECOLINK_ECOLINK_H_ */
