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


/* Exercises the shared library through its C header only. */

#include <pthread.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "ecolink/ecolink.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK failed: %s (last error: %s)\n",   \
              __FILE__, __LINE__, #cond, ecolink_last_error());       \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static char scratch[512];

static const char *Scratch(const char *name) {
  static char path[1024];
  snprintf(path, sizeof(path), "%s/%s", scratch, name);
  return path;
}

static void *Serve(void *server) {
  ecolink_server_run((ecolink_server *)server);
  return NULL;
}

int main(void) {
  const char *tmp = getenv("TMPDIR");
  snprintf(scratch, sizeof(scratch), "%s/ecolink-capi-XXXXXX", tmp ? tmp : "/tmp");
  if (mkdtemp(scratch) == NULL) return 2;

  CHECK(strcmp(ecolink_version(), "1.0.0") == 0);
  CHECK(strcmp(ecolink_status_name(ECOLINK_ERROR_INTEGRITY), "integrity error") == 0);

  /* Argument checking. */
  ecolink_embedder *embedder = NULL;
  CHECK(ecolink_embedder_create_local(4, &embedder) == ECOLINK_ERROR_INVALID_ARGUMENT);
  CHECK(strlen(ecolink_last_error()) > 0);
  CHECK(ecolink_embedder_create_local(256, NULL) == ECOLINK_ERROR_NULL_POINTER);
  CHECK(ecolink_embedder_create_for_fingerprint("remote:x", &embedder) ==
        ECOLINK_ERROR_INVALID_ARGUMENT);

  CHECK(ecolink_demo_write(42, Scratch("demo")) == ECOLINK_OK);
  CHECK(ecolink_embedder_create_for_fingerprint("local-hash-256", &embedder) == ECOLINK_OK);
  CHECK(strcmp(ecolink_embedder_fingerprint(embedder), "local-hash-256") == 0);

  char db[1024], bom[1024], sheets[1024], gold[1024], fixtures[1024];
  snprintf(db, sizeof(db), "%s", Scratch("demo/lca_db.jsonl"));
  snprintf(bom, sizeof(bom), "%s", Scratch("demo/bom.csv"));
  snprintf(sheets, sizeof(sheets), "%s", Scratch("demo/datasheets"));
  snprintf(gold, sizeof(gold), "%s", Scratch("demo/gold.jsonl"));
  snprintf(fixtures, sizeof(fixtures), "%s", Scratch("demo/llm_fixtures.jsonl"));

  ecolink_index *index = NULL;
  CHECK(ecolink_index_build("/nonexistent/db.jsonl", embedder, &index) == ECOLINK_ERROR_IO);
  CHECK(ecolink_index_build(db, embedder, &index) == ECOLINK_OK);
  CHECK(ecolink_index_size(index) == 25);
  CHECK(ecolink_index_dim(index) == 256);
  CHECK(ecolink_index_save(index, Scratch("idx.bin")) == ECOLINK_OK);
  ecolink_index_destroy(index);

  ecolink_embedder *other = NULL;
  CHECK(ecolink_embedder_create_local(64, &other) == ECOLINK_OK);
  int mismatch = 0;
  CHECK(ecolink_index_load(Scratch("idx.bin"), other, &index, &mismatch) == ECOLINK_OK);
  CHECK(mismatch == 1);
  ecolink_index_destroy(index);
  ecolink_embedder_destroy(other);
  CHECK(ecolink_index_load(Scratch("idx.bin"), embedder, &index, &mismatch) == ECOLINK_OK);
  CHECK(mismatch == 0);

  ecolink_llm *llm = NULL;
  CHECK(ecolink_llm_create_canned(fixtures, &llm) == ECOLINK_OK);

  ecolink_match_options options;
  ecolink_match_options_init(&options);
  CHECK(options.top_k == 5);
  CHECK(options.datasheet_threshold == 0.5);
  options.bom_path = bom;
  options.datasheets_dir = sheets;
  options.mode = "fuzzy";
  ecolink_run *run = NULL;
  CHECK(ecolink_match_run(&options, index, embedder, llm, &run) ==
        ECOLINK_ERROR_INVALID_ARGUMENT);
  options.mode = "llm-datasheet";
  CHECK(ecolink_match_run(&options, index, embedder, NULL, &run) ==
        ECOLINK_ERROR_INVALID_ARGUMENT);
  CHECK(ecolink_match_run(&options, index, embedder, llm, &run) == ECOLINK_OK);
  CHECK(ecolink_run_component_count(run) == 8);
  CHECK(strcmp(ecolink_run_component_id(run, 0), "c1") == 0);
  CHECK(ecolink_run_component_error(run, 0) == NULL);
  CHECK(ecolink_run_top_activity(run, 1) != NULL);
  CHECK(ecolink_run_top_score(run, 1) > 0.0);
  CHECK(ecolink_run_datasheet(run, 0) == NULL);
  CHECK(ecolink_run_datasheet(run, 1) != NULL &&
        strcmp(ecolink_run_datasheet(run, 1), "technikbau_welle_c45n.txt") == 0);
  CHECK(ecolink_run_warning_count(run) == 0);
  CHECK(ecolink_run_component_id(run, 99) == NULL);
  CHECK(ecolink_run_write_report(run, Scratch("report.jsonl"), 0) == ECOLINK_OK);
  ecolink_run_destroy(run);

  /* Semantic mode runs without an LLM. */
  options.mode = "semantic";
  CHECK(ecolink_match_run(&options, index, embedder, NULL, &run) == ECOLINK_OK);
  ecolink_run_destroy(run);

  /* An empty fixture file makes every LLM component fail, not the run. */
  FILE *empty = fopen(Scratch("empty.jsonl"), "w");
  fclose(empty);
  ecolink_llm *empty_llm = NULL;
  CHECK(ecolink_llm_create_canned(Scratch("empty.jsonl"), &empty_llm) == ECOLINK_OK);
  options.mode = "llm";
  CHECK(ecolink_match_run(&options, index, embedder, empty_llm, &run) == ECOLINK_OK);
  CHECK(ecolink_run_component_error(run, 3) != NULL);
  ecolink_run_destroy(run);
  ecolink_llm_destroy(empty_llm);

  const char *reports[] = {Scratch("report.jsonl")};
  char report_path[1024];
  snprintf(report_path, sizeof(report_path), "%s", reports[0]);
  reports[0] = report_path;
  const int ns[] = {1, 5};
  char *table = NULL;
  char *warnings = NULL;
  CHECK(ecolink_eval(reports, 1, gold, db, ns, 2, Scratch("records.jsonl"), &table, &warnings) ==
        ECOLINK_OK);
  CHECK(table != NULL && strstr(table, "LLM + Datasheet | 0.88    | 1.00") != NULL);
  CHECK(warnings != NULL && warnings[0] == '\0');
  ecolink_string_free(table);
  ecolink_string_free(warnings);

  FILE *no_labels = fopen(Scratch("nogold.jsonl"), "w");
  fclose(no_labels);
  table = NULL;
  CHECK(ecolink_eval(reports, 1, Scratch("nogold.jsonl"), NULL, ns, 2, NULL, &table, NULL) ==
        ECOLINK_ERROR_INVALID_ARGUMENT);
  CHECK(strstr(ecolink_last_error(), "no labels") != NULL);
  CHECK(table == NULL);

  ecolink_ablation_options ablation;
  ecolink_ablation_options_init(&ablation);
  ablation.bom_path = bom;
  ablation.db_path = db;
  ablation.datasheets_dir = sheets;
  ablation.gold_path = gold;
  ablation.reports_dir = Scratch("ablation");
  CHECK(ecolink_ablate(&ablation, index, embedder, llm, &table, &warnings) == ECOLINK_OK);
  CHECK(table != NULL && strstr(table, "Semantic similarity only") != NULL);
  ecolink_string_free(table);
  ecolink_string_free(warnings);

  /* Review server round trip on an ephemeral port. */
  char report_copy[1024], data_dir[1024];
  snprintf(report_copy, sizeof(report_copy), "%s", Scratch("report.jsonl"));
  snprintf(data_dir, sizeof(data_dir), "%s", Scratch("session"));
  ecolink_server *server = NULL;
  CHECK(ecolink_server_create("/nonexistent.jsonl", bom, db, data_dir, NULL, &server) ==
        ECOLINK_ERROR_IO);
  CHECK(ecolink_server_create(report_copy, bom, db, data_dir, NULL, &server) == ECOLINK_OK);
  CHECK(strncmp(ecolink_server_session_id(server), "s-", 2) == 0);
  int port = 0;
  CHECK(ecolink_server_bind(server, "127.0.0.1", 0, &port) == ECOLINK_OK);
  CHECK(port > 0);
  pthread_t thread;
  pthread_create(&thread, NULL, Serve, server);
  usleep(100 * 1000);
  ecolink_server_stop(server);
  pthread_join(thread, NULL);
  ecolink_server_destroy(server);

  ecolink_llm_destroy(llm);
  ecolink_index_destroy(index);
  ecolink_embedder_destroy(embedder);

  /* Destroying NULL handles is a no-op. */
  ecolink_embedder_destroy(NULL);
  ecolink_index_destroy(NULL);
  ecolink_run_destroy(NULL);
  ecolink_server_destroy(NULL);
  ecolink_string_free(NULL);

  char cleanup[1100];
  snprintf(cleanup, sizeof(cleanup), "rm -rf '%s'", scratch);
  if (system(cleanup) != 0) fprintf(stderr, "could not remove %s\n", scratch);

  if (failures > 0) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
