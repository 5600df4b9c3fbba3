// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smatch/smatch.h"

#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smatch/commands.hpp"
#include "smatch/hierarchical.hpp"
#include "smatch/instance_io.hpp"
#include "smatch/matching.hpp"
#include "smatch/odes.hpp"

struct smatch_instance {
  smatch::InstanceFile file;
};

struct smatch_matching {
  smatch::Matching matching;
  std::string csv;
};

struct smatch_pmf {
  smatch::ExcessPmf pmf;
};

struct smatch_result {
  smatch::CommandResult result;
};

namespace {

thread_local std::string last_error;

smatch_status fail(smatch_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps the exception in flight to a status.
smatch_status translate() {
  try {
    throw;
  } catch (const smatch::TieError& e) {
    return fail(SMATCH_ERR_TIE, e.what());
  } catch (const smatch::FormatError& e) {
    return fail(SMATCH_ERR_FORMAT, e.what());
  } catch (const smatch::CapExceeded& e) {
    return fail(SMATCH_ERR_CAP_EXCEEDED, e.what());
  } catch (const smatch::SolverError& e) {
    return fail(SMATCH_ERR_SOLVER, e.what());
  } catch (const smatch::InsufficientHorizon& e) {
    return fail(SMATCH_ERR_HORIZON, e.what());
  } catch (const std::out_of_range& e) {
    return fail(SMATCH_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SMATCH_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::logic_error& e) {
    return fail(SMATCH_ERR_CONSISTENCY, e.what());
  } catch (const std::runtime_error& e) {
    return fail(SMATCH_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SMATCH_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SMATCH_ERR_INTERNAL, "unknown error");
  }
}

template <class F>
smatch_status guarded(F&& body) {
  try {
    body();
    return SMATCH_OK;
  } catch (...) {
    return translate();
  }
}

#define SMATCH_REQUIRE(ptr)                                                     \
  do {                                                                          \
    if ((ptr) == nullptr) return fail(SMATCH_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

}  // namespace

extern "C" {

const char* smatch_version(void) { return "1.0.0"; }

const char* smatch_status_name(smatch_status status) {
  switch (status) {
    case SMATCH_OK: return "ok";
    case SMATCH_ERR_NULL_ARGUMENT: return "null argument";
    case SMATCH_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SMATCH_ERR_OUT_OF_RANGE: return "out of range";
    case SMATCH_ERR_FORMAT: return "format error";
    case SMATCH_ERR_TIE: return "weight tie";
    case SMATCH_ERR_CAP_EXCEEDED: return "cap exceeded";
    case SMATCH_ERR_SOLVER: return "solver error";
    case SMATCH_ERR_HORIZON: return "insufficient horizon";
    case SMATCH_ERR_IO: return "i/o error";
    case SMATCH_ERR_CONSISTENCY: return "consistency check failed";
    case SMATCH_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* smatch_last_error(void) { return last_error.c_str(); }

smatch_status smatch_instance_from_json(const char* json, int check_ties, smatch_instance** out) {
  SMATCH_REQUIRE(json);
  SMATCH_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new smatch_instance{smatch::parse_instance_json(json, check_ties != 0)}; });
}

smatch_status smatch_instance_sample(const char* config_json, smatch_instance** out) {
  SMATCH_REQUIRE(config_json);
  SMATCH_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const smatch::SampleSpec spec = smatch::parse_sample_spec(config_json);
    smatch::InstanceFile file;
    smatch::PointConfig cfg = smatch::sample(spec);
    for (std::size_t i = 0; i < cfg.size(); ++i) file.ids.push_back(std::to_string(i));
    file.points.emplace(smatch::build_instance(cfg, spec.color_rule(), spec.metric, false));
    *out = new smatch_instance{std::move(file)};
  });
}

void smatch_instance_free(smatch_instance* instance) { delete instance; }

smatch_status smatch_instance_size(const smatch_instance* instance, size_t* n) {
  SMATCH_REQUIRE(instance);
  SMATCH_REQUIRE(n);
  *n = instance->file.view().size();
  return SMATCH_OK;
}

smatch_status smatch_instance_weight(const smatch_instance* instance, size_t i, size_t j, double* weight) {
  SMATCH_REQUIRE(instance);
  SMATCH_REQUIRE(weight);
  const auto& view = instance->file.view();
  if (i >= view.size() || j >= view.size()) return fail(SMATCH_ERR_OUT_OF_RANGE, "vertex index out of range");
  return guarded([&] { *weight = view.weight(i, j); });
}

smatch_status smatch_stable_match(const smatch_instance* instance, smatch_matching** out) {
  SMATCH_REQUIRE(instance);
  SMATCH_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new smatch_matching{smatch::stable_match(instance->file.view()), {}}; });
}

void smatch_matching_free(smatch_matching* matching) { delete matching; }

smatch_status smatch_matching_partner(const smatch_matching* matching, size_t v, int64_t* partner, double* weight) {
  SMATCH_REQUIRE(matching);
  if (v >= matching->matching.size()) return fail(SMATCH_ERR_OUT_OF_RANGE, "vertex index out of range");
  const auto& m = matching->matching;
  if (partner) *partner = m.is_matched(v) ? static_cast<int64_t>(m.partner[v]) : -1;
  if (weight) *weight = m.match_weight[v];
  return SMATCH_OK;
}

smatch_status smatch_matching_unmatched(const smatch_matching* matching, size_t* count) {
  SMATCH_REQUIRE(matching);
  SMATCH_REQUIRE(count);
  *count = matching->matching.unmatched_count();
  return SMATCH_OK;
}

smatch_status smatch_verify_stable(const smatch_instance* instance, const smatch_matching* matching, int* stable,
                                   size_t* x, size_t* y) {
  SMATCH_REQUIRE(instance);
  SMATCH_REQUIRE(matching);
  SMATCH_REQUIRE(stable);
  return guarded([&] {
    const auto witness = smatch::verify_stable(instance->file.view(), matching->matching);
    *stable = witness ? 0 : 1;
    if (witness) {
      if (x) *x = witness->x;
      if (y) *y = witness->y;
    }
  });
}

smatch_status smatch_matched_within(const smatch_instance* instance, size_t root, double radius, int* matched) {
  SMATCH_REQUIRE(instance);
  SMATCH_REQUIRE(matched);
  return guarded([&] {
    const auto closure = smatch::descending_closure(instance->file.view(), root, radius);
    *matched = smatch::matched_within(closure) ? 1 : 0;
  });
}

smatch_status smatch_matching_csv(const smatch_instance* instance, smatch_matching* matching, const char** csv) {
  SMATCH_REQUIRE(instance);
  SMATCH_REQUIRE(matching);
  SMATCH_REQUIRE(csv);
  return guarded([&] {
    std::ostringstream out;
    if (instance->file.points) smatch::write_points_csv(out, instance->file.points->config(), matching->matching);
    else smatch::write_matching_csv(out, instance->file.ids, matching->matching);
    matching->csv = out.str();
    *csv = matching->csv.c_str();
  });
}

smatch_status smatch_asymmetric_limit(double eps, double* value) {
  SMATCH_REQUIRE(value);
  return guarded([&] { *value = smatch::closed_form_b_infinity(eps); });
}

smatch_status smatch_symmetric_limit(double p1, double p2, int k, double* value) {
  SMATCH_REQUIRE(value);
  return guarded([&] { *value = smatch::closed_form_x1_infinity(p1, p2, k); });
}

smatch_status smatch_ode_plateau(const char* model, const double* params, size_t n_params, size_t component,
                                 double t_max, double accuracy, double* value, double* bound) {
  SMATCH_REQUIRE(model);
  SMATCH_REQUIRE(value);
  if (n_params > 0) SMATCH_REQUIRE(params);
  return guarded([&] {
    const std::string m = model;
    std::optional<smatch::OdeSystem> system;
    if (m == "one") system = smatch::OdeSystem::one_type();
    else if (m == "asym") {
      if (n_params != 1) throw std::invalid_argument("asym takes one parameter (eps)");
      system = smatch::OdeSystem::asymmetric(params[0]);
    } else if (m == "sym") {
      system = smatch::OdeSystem::symmetric(std::vector<double>(params, params + n_params));
    } else {
      throw std::invalid_argument("model must be one, asym or sym");
    }
    const auto pe = smatch::plateau_detect(smatch::integrate(*system, t_max, 1e-11), component, accuracy);
    *value = pe.value;
    if (bound) *bound = pe.bound;
  });
}

smatch_status smatch_pmf_base(double lambda, double eps, int depth, double slack_budget, int max_value,
                              smatch_pmf** out) {
  SMATCH_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new smatch_pmf{smatch::base_pmf(lambda, eps, depth, slack_budget, max_value)}; });
}

smatch_status smatch_pmf_from_masses(const double* masses, size_t count, int max_value, smatch_pmf** out) {
  SMATCH_REQUIRE(out);
  if (count > 0) SMATCH_REQUIRE(masses);
  *out = nullptr;
  return guarded([&] {
    *out = new smatch_pmf{smatch::ExcessPmf::from_masses(std::vector<double>(masses, masses + count), 0, max_value)};
  });
}

smatch_status smatch_pmf_level_up(const smatch_pmf* pmf, smatch_pmf** out) {
  SMATCH_REQUIRE(pmf);
  SMATCH_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new smatch_pmf{smatch::level_up(pmf->pmf)}; });
}

void smatch_pmf_free(smatch_pmf* pmf) { delete pmf; }

smatch_status smatch_pmf_level(const smatch_pmf* pmf, int* level) {
  SMATCH_REQUIRE(pmf);
  SMATCH_REQUIRE(level);
  *level = pmf->pmf.level();
  return SMATCH_OK;
}

smatch_status smatch_pmf_mass(const smatch_pmf* pmf, int value, double* lo, double* hi) {
  SMATCH_REQUIRE(pmf);
  return guarded([&] {
    const auto m = pmf->pmf.mass(value);
    if (lo) *lo = m.lo;
    if (hi) *hi = m.hi;
  });
}

smatch_status smatch_pmf_stats(const smatch_pmf* pmf, double out[6], double* mean_lower) {
  SMATCH_REQUIRE(pmf);
  SMATCH_REQUIRE(out);
  return guarded([&] {
    const auto s = smatch::stats(pmf->pmf);
    const double v[6] = {s.beta.lo, s.beta.hi, s.gamma.lo, s.gamma.hi, s.delta.lo, s.delta.hi};
    for (int i = 0; i < 6; ++i) out[i] = v[i];
    if (mean_lower) *mean_lower = s.mean_lower;
  });
}

smatch_status smatch_run(const char* command, const char* args_json, smatch_result** out) {
  SMATCH_REQUIRE(command);
  SMATCH_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new smatch_result{smatch::run_command(command, args_json ? args_json : "")}; });
}

void smatch_result_free(smatch_result* result) { delete result; }

int smatch_result_gated_pass(const smatch_result* result) { return result && result->result.gated_pass ? 1 : 0; }

const char* smatch_result_summary(const smatch_result* result) {
  return result ? result->result.summary.c_str() : "";
}

size_t smatch_result_output_count(const smatch_result* result) {
  return result ? result->result.outputs.size() : 0;
}

const char* smatch_result_output_name(const smatch_result* result, size_t index) {
  if (!result || index >= result->result.outputs.size()) return nullptr;
  return result->result.outputs[index].name.c_str();
}

const char* smatch_result_output_text(const smatch_result* result, size_t index, size_t* length) {
  if (!result || index >= result->result.outputs.size()) return nullptr;
  const auto& s = result->result.outputs[index].content;
  if (length) *length = s.size();
  return s.c_str();
}

}  // extern "C"
