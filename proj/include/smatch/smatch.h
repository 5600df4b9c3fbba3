/* Copyright 2026 The smatch Authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the stable-matching toolkit.
 *
 * Objects are opaque handles created by smatch_*_new / smatch_*_from_* /
 * smatch_run and released with the matching *_free function (free(NULL)
 * is a no-op). Every fallible call returns an smatch_status; on failure
 * the message is available from smatch_last_error() in the same thread
 * until the next failing call. Strings returned by accessors are owned by
 * the handle and stay valid until it is freed.
 */
#ifndef SMATCH_SMATCH_H
#define SMATCH_SMATCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SMATCH_BUILDING_LIBRARY)
#    define SMATCH_API __declspec(dllexport)
#  else
#    define SMATCH_API __declspec(dllimport)
#  endif
#else
#  define SMATCH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smatch_status {
  SMATCH_OK = 0,
  SMATCH_ERR_NULL_ARGUMENT = 1,   /* a required pointer was NULL */
  SMATCH_ERR_INVALID_ARGUMENT = 2,
  SMATCH_ERR_OUT_OF_RANGE = 3,
  SMATCH_ERR_FORMAT = 4,          /* malformed JSON or file content */
  SMATCH_ERR_TIE = 5,             /* equal weights where distinct ones are required */
  SMATCH_ERR_CAP_EXCEEDED = 6,
  SMATCH_ERR_SOLVER = 7,          /* ODE step size collapsed */
  SMATCH_ERR_HORIZON = 8,         /* plateau bound wider than requested */
  SMATCH_ERR_IO = 9,
  SMATCH_ERR_CONSISTENCY = 10,    /* an internal cross-check failed */
  SMATCH_ERR_INTERNAL = 11
} smatch_status;

SMATCH_API const char* smatch_version(void);
SMATCH_API const char* smatch_status_name(smatch_status status);
/* Message of the last failure in this thread ("" if none). */
SMATCH_API const char* smatch_last_error(void);

/* ---- instances and stable matchings ---------------------------------- */

typedef struct smatch_instance smatch_instance;
typedef struct smatch_matching smatch_matching;

/* Instance JSON: {"vertices", "colors", "weights"} or {"rule", "metric",
 * "positions", "colors"}. check_ties != 0 rejects equal weights. */
SMATCH_API smatch_status smatch_instance_from_json(const char* json, int check_ties,
                                                   smatch_instance** out);
/* Poisson sample from {rate, dimension, side, color_probs, rule, metric, seed}. */
SMATCH_API smatch_status smatch_instance_sample(const char* config_json, smatch_instance** out);
SMATCH_API void smatch_instance_free(smatch_instance* instance);
SMATCH_API smatch_status smatch_instance_size(const smatch_instance* instance, size_t* n);
/* Weight between i and j; INFINITY for absent edges. */
SMATCH_API smatch_status smatch_instance_weight(const smatch_instance* instance, size_t i, size_t j,
                                                double* weight);

SMATCH_API smatch_status smatch_stable_match(const smatch_instance* instance, smatch_matching** out);
SMATCH_API void smatch_matching_free(smatch_matching* matching);
/* partner = -1 and weight = INFINITY when v is unmatched. */
SMATCH_API smatch_status smatch_matching_partner(const smatch_matching* matching, size_t v,
                                                 int64_t* partner, double* weight);
SMATCH_API smatch_status smatch_matching_unmatched(const smatch_matching* matching, size_t* count);
/* *stable = 1 if no blocking pair exists, else 0 and the pair in x, y
 * (either may be NULL). */
SMATCH_API smatch_status smatch_verify_stable(const smatch_instance* instance,
                                              const smatch_matching* matching, int* stable,
                                              size_t* x, size_t* y);
/* Is root matched along an edge lighter than radius? Decided from the
 * descending closure of root only. */
SMATCH_API smatch_status smatch_matched_within(const smatch_instance* instance, size_t root,
                                               double radius, int* matched);
/* Point dump (point instances) or vertex,partner,weight CSV. The text is
 * owned by the matching handle. */
SMATCH_API smatch_status smatch_matching_csv(const smatch_instance* instance,
                                             smatch_matching* matching, const char** csv);

/* ---- closed forms and ODE limits -------------------------------------- */

/* eps * e^{1 - 1/eps}. */
SMATCH_API smatch_status smatch_asymmetric_limit(double eps, double* value);
/* (p1 - p2)^{k-1} p1^{-(k-2)}. */
SMATCH_API smatch_status smatch_symmetric_limit(double p1, double p2, int k, double* value);
/* Integrates the root-availability system of the model and returns the
 * limit of `component` with a certified bound (limit in [value - bound,
 * value]). model: "one", "asym" (params[0] = eps) or "sym" (params = p). */
SMATCH_API smatch_status smatch_ode_plateau(const char* model, const double* params, size_t n_params,
                                            size_t component, double t_max, double accuracy,
                                            double* value, double* bound);

/* ---- excess recursion on dyadic intervals ----------------------------- */

typedef struct smatch_pmf smatch_pmf;

SMATCH_API smatch_status smatch_pmf_base(double lambda, double eps, int depth, double slack_budget,
                                         int max_value, smatch_pmf** out);
/* masses[i] = P(N = i - 1). */
SMATCH_API smatch_status smatch_pmf_from_masses(const double* masses, size_t count, int max_value,
                                                smatch_pmf** out);
SMATCH_API smatch_status smatch_pmf_level_up(const smatch_pmf* pmf, smatch_pmf** out);
SMATCH_API void smatch_pmf_free(smatch_pmf* pmf);
SMATCH_API smatch_status smatch_pmf_level(const smatch_pmf* pmf, int* level);
SMATCH_API smatch_status smatch_pmf_mass(const smatch_pmf* pmf, int value, double* lo, double* hi);
/* beta = P(N even), gamma = P(N odd, > 0), delta = P(N even, > 0), each as
 * [lo, hi] in out[0..5]; mean_lower bounds E N from below. */
SMATCH_API smatch_status smatch_pmf_stats(const smatch_pmf* pmf, double out[6], double* mean_lower);

/* ---- named commands ---------------------------------------------------- */

typedef struct smatch_result smatch_result;

/* Runs a command (match, torus, pwit, ode, hier_exact, hier_mc,
 * cross_validate, coupling, theorem_targets, verify, figures) with JSON
 * arguments. A completed run returns SMATCH_OK even when gated checks
 * fail; see smatch_result_gated_pass. */
SMATCH_API smatch_status smatch_run(const char* command, const char* args_json, smatch_result** out);
SMATCH_API void smatch_result_free(smatch_result* result);
/* 1 if every gated check passed. */
SMATCH_API int smatch_result_gated_pass(const smatch_result* result);
SMATCH_API const char* smatch_result_summary(const smatch_result* result);
SMATCH_API size_t smatch_result_output_count(const smatch_result* result);
SMATCH_API const char* smatch_result_output_name(const smatch_result* result, size_t index);
SMATCH_API const char* smatch_result_output_text(const smatch_result* result, size_t index,
                                                 size_t* length);

#ifdef __cplusplus
}
#endif

#endif /* SMATCH_SMATCH_H */
