// Copyright 2026 The nsdescent Authors
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

/* C interface to the nsdescent library. All handles are opaque. Functions
 * return NSD_OK on success and one of the error codes below otherwise; the
 * message for the most recent failure on the calling thread is available
 * from nsd_last_error(). Strings returned through `char**` are owned by the
 * caller and released with nsd_string_free(). */

#ifndef NSD_NSD_H
#define NSD_NSD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NSD_API __declspec(dllexport)
#else
#define NSD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nsd_status {
  NSD_OK = 0,
  NSD_ERR_CONTRACT = 1,
  NSD_ERR_DIMENSION = 2,
  NSD_ERR_CAPABILITY = 3,
  NSD_ERR_SOLVER = 4,
  NSD_ERR_ENRICHMENT = 5,
  NSD_ERR_NOT_A_MINIMUM = 6,
  NSD_ERR_CONFIG = 7,
  NSD_ERR_IO = 8,
  NSD_ERR_INTERNAL = 9
} nsd_status;

typedef struct nsd_objective nsd_objective_t;
typedef struct nsd_config nsd_config_t;
typedef struct nsd_trace nsd_trace_t;

NSD_API const char* nsd_last_error(void);
NSD_API const char* nsd_status_name(nsd_status status);
NSD_API void nsd_string_free(char* s);

/* Objectives, by catalog id such as "maxq:10" or "crescent". */
NSD_API nsd_status nsd_objective_create(const char* id, nsd_objective_t** out);
NSD_API void nsd_objective_destroy(nsd_objective_t* f);
NSD_API size_t nsd_objective_dim(const nsd_objective_t* f);
NSD_API nsd_status nsd_objective_eval(const nsd_objective_t* f, const double* x, double* value);
NSD_API nsd_status nsd_objective_subgradient(const nsd_objective_t* f, const double* x, double* g);
/* JSON array of {id, formula, parametrized}. */
NSD_API nsd_status nsd_list_functions(char** json_out);

/* Minimum-norm point of conv{w_1..w_k}; `w` is row-major k x n. `coeffs`
 * may be NULL, otherwise it receives k convex weights. */
NSD_API nsd_status nsd_min_norm_point(const double* w, size_t k, size_t n, double* v, double* coeffs);

/* Experiment configuration. */
NSD_API nsd_status nsd_config_parse(const char* json, nsd_config_t** out);
NSD_API nsd_status nsd_config_preset(const char* name, nsd_config_t** out);
NSD_API nsd_status nsd_config_set_seed(nsd_config_t* cfg, uint64_t seed);
NSD_API nsd_status nsd_config_set_output_dir(nsd_config_t* cfg, const char* dir);
NSD_API nsd_status nsd_config_output_dir(const nsd_config_t* cfg, char** out);
NSD_API nsd_status nsd_config_to_json(const nsd_config_t* cfg, char** json_out);
NSD_API void nsd_config_destroy(nsd_config_t* cfg);

typedef enum nsd_terminal {
  NSD_TERM_REACHED_J_MAX = 0,
  NSD_TERM_REACHED_L_MAX = 1,
  NSD_TERM_EPS_BELOW_MIN = 2,
  NSD_TERM_SCHEDULE_EXHAUSTED = 3,
  NSD_TERM_ABORTED_APPROX_FAILURE = 4
} nsd_terminal;

/* Runs the descent. A run that ends in NSD_TERM_ABORTED_APPROX_FAILURE
 * still returns NSD_OK with its partial trace. */
NSD_API nsd_status nsd_run(const nsd_config_t* cfg, nsd_trace_t** out);
NSD_API nsd_terminal nsd_trace_status(const nsd_trace_t* t);
NSD_API const char* nsd_trace_status_name(const nsd_trace_t* t);
NSD_API const char* nsd_trace_diagnostic(const nsd_trace_t* t);
NSD_API size_t nsd_trace_inner_count(const nsd_trace_t* t);
NSD_API size_t nsd_trace_outer_count(const nsd_trace_t* t);
NSD_API uint64_t nsd_trace_oracle_calls(const nsd_trace_t* t);
/* Outer record `index` (0-based): stage j, N_j, eps_j, delta_j; `x` may be
 * NULL, otherwise it receives the iterate x^j. */
NSD_API nsd_status nsd_trace_outer(const nsd_trace_t* t, size_t index, int* j, int* n_j, double* eps,
                                   double* delta, double* x);
/* Writes trace.csv, manifest.json and, when the minimizer is known,
 * rate_report.json into `dir`. */
NSD_API nsd_status nsd_trace_write(const nsd_trace_t* t, const char* dir);
NSD_API void nsd_trace_destroy(nsd_trace_t* t);

/* `checks` is a comma separated subset of growth,semismooth,convexity.
 * The report is JSON. */
NSD_API nsd_status nsd_verify(const char* function_id, const char* checks, uint64_t seed, char** report_out);

/* Runs one reproduction target and writes its CSVs into `dir`. The summary
 * is JSON: an array of {name, passed, detail}. `all_passed` may be NULL. */
NSD_API nsd_status nsd_reproduce(const char* target, const char* dir, uint64_t seed, char** summary_out,
                                 int* all_passed);
/* Comma separated names. */
NSD_API nsd_status nsd_reproduce_targets(char** out);
NSD_API nsd_status nsd_preset_names(char** out);

#ifdef __cplusplus
}
#endif

#endif /* NSD_NSD_H */
