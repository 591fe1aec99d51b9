// Copyright 2026 The NCP Authors
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
 * C interface to the normalized coherence pursuit library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an ncp_status; on
 * failure ncp_last_error() describes the problem. The message is
 * thread-local and valid until the next failing call on the same thread.
 *
 * Strings returned through char** out-parameters are allocated by the
 * library and must be released with ncp_string_free.
 */
#ifndef NCP_NCP_H_
#define NCP_NCP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NCP_BUILDING_LIBRARY)
#    define NCP_API __declspec(dllexport)
#  else
#    define NCP_API __declspec(dllimport)
#  endif
#else
#  define NCP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ncp_status {
  NCP_OK = 0,
  NCP_ERR_INVALID_ARGUMENT = 1, /* bad shape, range or missing field */
  NCP_ERR_PARSE = 2,            /* malformed CSV or JSON */
  NCP_ERR_NUMERIC = 3,          /* zero matrix, zero column, degenerate input */
  NCP_ERR_IO = 4,               /* file could not be read or written */
  NCP_ERR_INSUFFICIENT_RANK = 5,
  NCP_ERR_INTERNAL = 6
} ncp_status;

typedef enum ncp_method { NCP_METHOD_ANCP = 0, NCP_METHOD_SNCP = 1, NCP_METHOD_COP = 2 } ncp_method;

typedef enum ncp_strategy_kind {
  NCP_STRATEGY_RANK_GREEDY = 0,
  NCP_STRATEGY_FIXED_FRACTION = 1,
  NCP_STRATEGY_ADAPTIVE_PROJECTION = 2
} ncp_strategy_kind;

typedef struct ncp_selection {
  ncp_strategy_kind kind;
  size_t target_rank;   /* fixed-fraction: 0 spans every kept column */
  double tol;           /* <= 0 selects the default 1e-8 */
  double keep_fraction; /* fixed-fraction; <= 0 selects 0.5 */
} ncp_selection;

typedef struct ncp_matrix ncp_matrix;
typedef struct ncp_scores ncp_scores;
typedef struct ncp_recovery ncp_recovery;
typedef struct ncp_dataset ncp_dataset;
typedef struct ncp_table ncp_table;

NCP_API const char* ncp_version(void);
NCP_API const char* ncp_last_error(void);
/* 1-based line of the last CSV parse failure on this thread, 0 if none. */
NCP_API size_t ncp_last_error_line(void);
NCP_API void ncp_string_free(char* s);

NCP_API ncp_status ncp_method_from_string(const char* name, ncp_method* out);

/* ---- matrices ---------------------------------------------------------- */

/* values are column-major, rows * cols entries. */
NCP_API ncp_status ncp_matrix_create(size_t rows, size_t cols, const double* values, ncp_matrix** out);
NCP_API ncp_status ncp_matrix_read_csv(const char* path, ncp_matrix** out);
NCP_API ncp_status ncp_matrix_write_csv(const ncp_matrix* m, const char* path);
NCP_API size_t ncp_matrix_rows(const ncp_matrix* m);
NCP_API size_t ncp_matrix_cols(const ncp_matrix* m);
/* Copies rows * cols column-major values into out (capacity len). */
NCP_API ncp_status ncp_matrix_copy_values(const ncp_matrix* m, double* out, size_t len);
NCP_API void ncp_matrix_free(ncp_matrix* m);

/* ---- scoring ----------------------------------------------------------- */

/* rank_tol <= 0 selects the exact-data default (1e-10 relative). */
NCP_API ncp_status ncp_score(const ncp_matrix* d, ncp_method method, double rank_tol, ncp_scores** out);
NCP_API size_t ncp_scores_size(const ncp_scores* s);
NCP_API ncp_status ncp_scores_copy(const ncp_scores* s, double* out, size_t len);
NCP_API ncp_status ncp_scores_write_csv(const ncp_scores* s, const char* path);
NCP_API void ncp_scores_free(ncp_scores* s);

/* ---- recovery ---------------------------------------------------------- */

NCP_API ncp_status ncp_recover(const ncp_matrix* d, const ncp_scores* s, const ncp_selection* sel,
                               ncp_recovery** out);
NCP_API size_t ncp_recovery_dim(const ncp_recovery* r);
/* JSON: {"selected","dim","basis","method","strategy"} */
NCP_API ncp_status ncp_recovery_to_json(const ncp_recovery* r, char** out_json);
/* Recovery error against the "U" field of a truth.json file. */
NCP_API ncp_status ncp_recovery_error_vs_truth(const ncp_recovery* r, const char* truth_path, double* out);
NCP_API void ncp_recovery_free(ncp_recovery* r);

/* ---- synthetic data ---------------------------------------------------- */

NCP_API ncp_status ncp_dataset_generate(const char* spec_json, uint64_t seed, ncp_dataset** out);
NCP_API ncp_status ncp_dataset_write(const ncp_dataset* ds, const char* data_csv_path, const char* truth_json_path);
NCP_API ncp_status ncp_dataset_matrix(const ncp_dataset* ds, ncp_matrix** out);
NCP_API ncp_status ncp_dataset_truth_json(const ncp_dataset* ds, char** out_json);
NCP_API void ncp_dataset_free(ncp_dataset* ds);

/* ---- experiments ------------------------------------------------------- */

NCP_API ncp_status ncp_experiment_run(const char* config_json, ncp_table** out);
NCP_API ncp_status ncp_table_write_csv(const ncp_table* t, const char* path);
NCP_API ncp_status ncp_table_to_csv(const ncp_table* t, char** out_csv);
NCP_API ncp_status ncp_table_render_svg(const ncp_table* t, const char* x_param, const char* y_param,
                                        ncp_method method, char** out_svg);
/* Rows that aborted, one "grid ...: message" line each; empty if none. */
NCP_API ncp_status ncp_table_errors(const ncp_table* t, char** out_text);
NCP_API uint64_t ncp_table_config_hash(const ncp_table* t);
NCP_API void ncp_table_free(ncp_table* t);

/* ---- theory ------------------------------------------------------------ */

NCP_API ncp_status ncp_theory_evaluate(const char* params_json, char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif /* NCP_NCP_H_ */
