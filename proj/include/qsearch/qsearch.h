// Copyright 2026 The qsearch Authors
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

#ifndef QSEARCH_QSEARCH_H_
#define QSEARCH_QSEARCH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QSEARCH_BUILDING_LIBRARY)
#define QS_API __attribute__((visibility("default")))
#else
#define QS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qs_status {
  QS_OK = 0,
  QS_ERR_INVALID_ARGUMENT = 1,
  QS_ERR_GENERATION = 2,
  QS_ERR_NUMERIC = 3,
  QS_ERR_PARSE = 4,
  QS_ERR_IO = 5,
  QS_ERR_INTERNAL = 6,
  QS_ERR_PARTIAL = 7, /* sweep finished with error rows */
} qs_status;

typedef struct qs_graph qs_graph;
typedef struct qs_outcome qs_outcome;

QS_API const char* qs_version(void);

/* Message of the last failure on the calling thread; never NULL. */
QS_API const char* qs_last_error(void);

/* Strings returned through char** are owned by the caller. */
QS_API void qs_string_free(char* s);

/* Graphs. params_json is an object such as {"n":400,"k":4,"beta":0.2}. */
QS_API qs_status qs_graph_generate(const char* family, const char* params_json,
                                   uint64_t seed, qs_graph** out);
QS_API qs_status qs_graph_from_json(const char* json, qs_graph** out);
QS_API qs_status qs_graph_load(const char* path, qs_graph** out);
/* format: "plain" or "matrix-market-pattern". */
QS_API qs_status qs_graph_ingest(const char* path, const char* format,
                                 qs_graph** out);
QS_API qs_status qs_graph_save(const qs_graph* g, const char* path);
QS_API qs_status qs_graph_to_json(const qs_graph* g, char** json_out);
/* Copy with seeded random weights in (0, 1]. */
QS_API qs_status qs_graph_weighted(const qs_graph* g, uint64_t seed,
                                   qs_graph** out);
QS_API size_t qs_graph_node_count(const qs_graph* g);
QS_API size_t qs_graph_edge_count(const qs_graph* g);
QS_API void qs_graph_free(qs_graph* g);

/* {"n","edges","L","C","degrees":{...}}. workers 0 means 1. */
QS_API qs_status qs_metrics(const qs_graph* g, unsigned workers,
                            char** json_out);

/* target: "min", "median", "max", or a node index. options_json may be
   NULL for defaults. */
QS_API qs_status qs_search(const qs_graph* g, const char* target,
                           const char* options_json, qs_outcome** out);
QS_API double qs_outcome_gamma(const qs_outcome* o);
QS_API double qs_outcome_q(const qs_outcome* o);
QS_API double qs_outcome_p(const qs_outcome* o);
QS_API size_t qs_outcome_target(const qs_outcome* o);
QS_API qs_status qs_outcome_to_json(const qs_outcome* o, char** json_out);
QS_API void qs_outcome_free(qs_outcome* o);

/* P(t_j), t_j = j * dt, j < count, at hopping rate gamma. */
QS_API qs_status qs_probability_series(const qs_graph* g, double gamma,
                                       size_t target, double dt, size_t count,
                                       double* out);

/* Runs a sweep plan (JSON text). output may override the plan's path and
   workers > 0 overrides its worker count. Returns QS_ERR_PARTIAL when some
   rows failed; the summary is still written. */
QS_API qs_status qs_sweep(const char* plan_json, const char* output,
                          unsigned workers, char** summary_json);

/* Fits over a records CSV. request_json: {"model","x","y","family",
   "average","fixed":{...}}. */
QS_API qs_status qs_fit_records(const char* records_path,
                                const char* request_json, char** json_out);
/* Fits explicit points. model: power, drift, f1, f2, f3, stretched. */
QS_API qs_status qs_fit_points(const char* model, const double* x,
                               const double* y, size_t n,
                               const char* fixed_json, char** json_out);

/* options_json: {"family","reference":"zero|value|scale_free",
   "reference_value","curve":"power|stretched|constant"}. csv_out may be
   NULL. */
QS_API qs_status qs_collapse(const char* records_path, const char* options_json,
                             char** json_out, char** csv_out);

/* which: trotter, kernel, resolvent, neumann, ode, unitarity, laplacian,
   walks, or all. Ms may be NULL for the default slice counts. all_pass
   may be NULL. */
QS_API qs_status qs_verify(const char* which, const int* Ms, size_t n_ms,
                           char** json_out, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif  /* QSEARCH_QSEARCH_H_ */
