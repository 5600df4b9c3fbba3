/* Copyright 2026 The smatch Authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Exercises the C interface from C. Exit status 0 on success. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "smatch/smatch.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expectation failed: %s (last error: %s)\n", __FILE__, __LINE__, #cond, \
              smatch_last_error());                                    \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static void test_matching(void) {
  const char* json =
      "{\"vertices\": [\"a\", \"b\", \"c\", \"d\"],"
      " \"weights\": [[\"a\", \"b\", 1], [\"b\", \"c\", 2], [\"c\", \"d\", 4], [\"a\", \"c\", 3]]}";
  smatch_instance* inst = NULL;
  EXPECT(smatch_instance_from_json(json, 1, &inst) == SMATCH_OK);
  size_t n = 0;
  EXPECT(smatch_instance_size(inst, &n) == SMATCH_OK && n == 4);
  double w = 0;
  EXPECT(smatch_instance_weight(inst, 1, 3, &w) == SMATCH_OK && isinf(w));
  EXPECT(smatch_instance_weight(inst, 0, 9, &w) == SMATCH_ERR_OUT_OF_RANGE);

  smatch_matching* m = NULL;
  EXPECT(smatch_stable_match(inst, &m) == SMATCH_OK);
  int64_t partner = 0;
  EXPECT(smatch_matching_partner(m, 0, &partner, &w) == SMATCH_OK && partner == 1 && w == 1.0);
  EXPECT(smatch_matching_partner(m, 2, &partner, NULL) == SMATCH_OK && partner == 3);
  size_t unmatched = 9;
  EXPECT(smatch_matching_unmatched(m, &unmatched) == SMATCH_OK && unmatched == 0);
  int stable = 0;
  EXPECT(smatch_verify_stable(inst, m, &stable, NULL, NULL) == SMATCH_OK && stable == 1);
  int within = -1;
  EXPECT(smatch_matched_within(inst, 2, 4.5, &within) == SMATCH_OK && within == 1);
  EXPECT(smatch_matched_within(inst, 2, 3.5, &within) == SMATCH_OK && within == 0);
  const char* csv = NULL;
  EXPECT(smatch_matching_csv(inst, m, &csv) == SMATCH_OK && strncmp(csv, "vertex,partner,weight\na,b,1", 27) == 0);
  smatch_matching_free(m);
  smatch_instance_free(inst);
}

static void test_errors(void) {
  smatch_instance* inst = NULL;
  EXPECT(smatch_instance_from_json("{", 1, &inst) == SMATCH_ERR_FORMAT && inst == NULL);
  EXPECT(strlen(smatch_last_error()) > 0);
  EXPECT(smatch_instance_from_json(
             "{\"vertices\": [\"a\", \"b\", \"c\"], \"weights\": [[\"a\", \"b\", 1], [\"a\", \"c\", 1]]}", 1,
             &inst) == SMATCH_ERR_TIE);
  EXPECT(smatch_instance_from_json(NULL, 1, &inst) == SMATCH_ERR_NULL_ARGUMENT);
  smatch_result* r = NULL;
  EXPECT(smatch_run("nope", "{}", &r) == SMATCH_ERR_INVALID_ARGUMENT && r == NULL);
  EXPECT(smatch_run("ode", "[1]", &r) == SMATCH_ERR_FORMAT);
  double v = 0, b = 0;
  const double eps = 0.25;
  EXPECT(smatch_ode_plateau("asym", &eps, 1, 1, 5.0, 1e-6, &v, &b) == SMATCH_ERR_HORIZON);
  EXPECT(strcmp(smatch_status_name(SMATCH_ERR_TIE), "weight tie") == 0);
  smatch_instance_free(NULL);
  smatch_matching_free(NULL);
  smatch_pmf_free(NULL);
  smatch_result_free(NULL);
}

static void test_sampled(void) {
  smatch_instance* inst = NULL;
  EXPECT(smatch_instance_sample(
             "{\"rate\": 1, \"dimension\": 2, \"side\": 12, \"color_probs\": [0.75, 0.25], \"rule\": \"asym\","
             " \"metric\": \"euclidean\", \"seed\": 4}",
             &inst) == SMATCH_OK);
  smatch_matching* m = NULL;
  EXPECT(smatch_stable_match(inst, &m) == SMATCH_OK);
  int stable = 0;
  EXPECT(smatch_verify_stable(inst, m, &stable, NULL, NULL) == SMATCH_OK && stable == 1);
  const char* csv = NULL;
  EXPECT(smatch_matching_csv(inst, m, &csv) == SMATCH_OK && strncmp(csv, "index,x0,x1,color", 17) == 0);
  smatch_matching_free(m);
  smatch_instance_free(inst);
}

static void test_limits(void) {
  double v = 0, b = 0;
  EXPECT(smatch_asymmetric_limit(0.25, &v) == SMATCH_OK && fabs(v - 0.25 * exp(-3.0)) < 1e-15);
  EXPECT(smatch_symmetric_limit(0.5, 0.25, 3, &v) == SMATCH_OK && fabs(v - 0.125) < 1e-15);
  const double eps = 0.25;
  EXPECT(smatch_ode_plateau("asym", &eps, 1, 1, 1e4, 1e-4, &v, &b) == SMATCH_OK);
  EXPECT(fabs(v - 0.25 * exp(-3.0)) < 1e-4 && b <= 1e-4);
  const double p[3] = {0.5, 0.25, 0.25};
  EXPECT(smatch_ode_plateau("sym", p, 3, 0, 1e5, 1e-3, &v, &b) == SMATCH_OK && fabs(v - 0.125) <= b + 1e-4);
}

static void test_pmf(void) {
  const double masses[3] = {0.5, 0.0, 0.5};
  smatch_pmf* p = NULL;
  smatch_pmf* up = NULL;
  EXPECT(smatch_pmf_from_masses(masses, 3, 64, &p) == SMATCH_OK);
  EXPECT(smatch_pmf_level_up(p, &up) == SMATCH_OK);
  double lo = 0, hi = 0;
  EXPECT(smatch_pmf_mass(up, 0, &lo, &hi) == SMATCH_OK && lo == 0.75 && hi == 0.75);
  double s[6];
  double mean = 0;
  EXPECT(smatch_pmf_stats(up, s, &mean) == SMATCH_OK && s[0] == 1.0 && s[3] == 0.0 && s[4] <= 0.25 && s[5] >= 0.25);
  int level = -9;
  EXPECT(smatch_pmf_level(up, &level) == SMATCH_OK && level == 1);
  smatch_pmf_free(up);
  smatch_pmf_free(p);

  EXPECT(smatch_pmf_base(0.1, 0.5, 0, 5e-3, 64, &p) == SMATCH_OK);
  EXPECT(smatch_pmf_mass(p, -1, &lo, &hi) == SMATCH_OK && lo >= 0.04524 && hi <= 0.04524 + 0.00468);
  smatch_pmf_free(p);
  EXPECT(smatch_pmf_base(1.0, 0.5, 0, 1e-3, 64, &p) == SMATCH_ERR_INVALID_ARGUMENT);
}

static void test_run(void) {
  smatch_result* r = NULL;
  EXPECT(smatch_run("ode", "{\"model\": \"one\", \"tmax\": 2, \"step\": 1}", &r) == SMATCH_OK);
  EXPECT(smatch_result_output_count(r) == 1);
  EXPECT(strcmp(smatch_result_output_name(r, 0), "trajectory.csv") == 0);
  size_t len = 0;
  const char* text = smatch_result_output_text(r, 0, &len);
  EXPECT(text != NULL && len == strlen(text) && strncmp(text, "t,x", 3) == 0);
  EXPECT(smatch_result_gated_pass(r) == 1);
  EXPECT(smatch_result_output_name(r, 5) == NULL);
  smatch_result_free(r);

  EXPECT(smatch_run("hier_exact", "{\"levels\": 3, \"base_depth\": 30}", &r) == SMATCH_OK);
  EXPECT(smatch_result_gated_pass(r) == 1);
  EXPECT(strlen(smatch_result_summary(r)) > 0);
  smatch_result_free(r);
}

int main(void) {
  EXPECT(strlen(smatch_version()) > 0);
  test_matching();
  test_errors();
  test_sampled();
  test_limits();
  test_pmf();
  test_run();
  if (failures == 0) printf("C interface: all expectations met\n");
  return failures == 0 ? 0 : 1;
}
