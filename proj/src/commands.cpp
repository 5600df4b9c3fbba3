// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smatch/commands.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "smatch/instance_io.hpp"

namespace smatch {

using nlohmann::json;

namespace {

template <class T>
T arg(const json& a, const char* key, T fallback) {
  if (!a.contains(key) || a.at(key).is_null()) return fallback;
  try {
    return a.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("argument \"") + key + "\" has the wrong type");
  }
}

PwitModelSpec model_arg(const json& a) {
  const std::string model = arg<std::string>(a, "model", "asym");
  if (model == "one") return PwitModelSpec::one_type();
  if (model == "asym") return PwitModelSpec::asymmetric(arg<double>(a, "eps", 0.25));
  if (model == "sym") {
    const auto probs = arg<std::vector<double>>(a, "probs", {});
    if (probs.empty()) throw std::invalid_argument("sym model needs \"probs\"");
    return PwitModelSpec::symmetric(probs);
  }
  throw std::invalid_argument("model must be one, asym or sym");
}

OdeSystem system_arg(const PwitModelSpec& m) {
  switch (m.model) {
    case PwitModel::one_type: return OdeSystem::one_type();
    case PwitModel::asymmetric: return OdeSystem::asymmetric(m.probs[1]);
    case PwitModel::symmetric: return OdeSystem::symmetric(m.probs);
  }
  throw std::logic_error("unknown model");
}

std::uint64_t seed_arg(const json& a) { return arg<std::uint64_t>(a, "seed", 1); }

void finish(CommandResult& r) {
  r.gated_pass = all_gated_pass(r.records);
  std::size_t gated = 0, failed = 0;
  for (const ResultRecord& rec : r.records) {
    if (!rec.gated) continue;
    ++gated;
    if (!rec.pass) ++failed;
  }
  if (r.summary.empty())
    r.summary = std::to_string(gated) + " gated checks, " + std::to_string(failed) + " failed";
}

CommandResult cmd_match(const json& a) {
  const bool check_ties = arg<bool>(a, "check_ties", true);
  InstanceFile file = a.contains("instance_path")
                          ? load_instance(a.at("instance_path").get<std::string>(), check_ties)
                          : parse_instance_json(a.contains("instance") ? a.at("instance").dump() : std::string("{}"),
                                                check_ties);
  const InstanceView& view = file.view();
  const Matching m = stable_match(view);
  CommandResult r;
  std::ostringstream out;
  if (file.points) write_points_csv(out, file.points->config(), m);
  else write_matching_csv(out, file.ids, m);
  r.outputs.push_back({file.points ? "points.csv" : "matching.csv", out.str()});
  const bool stable = !verify_stable(view, m).has_value();
  r.records.push_back({"match", "verify_stable", "n=" + std::to_string(view.size()),
                       static_cast<double>(m.unmatched_count()), 0.0, 0.0, Provenance::none, true, stable,
                       "estimate = unmatched vertices"});
  r.summary = std::to_string(view.size()) + " vertices, " + std::to_string(m.unmatched_count()) +
              " unmatched, " + (stable ? "stable" : "NOT stable");
  return r;
}

CommandResult cmd_torus(const json& a) {
  TorusExperimentConfig c;
  c.rule = parse_rule_kind(arg<std::string>(a, "rule", "asym"));
  c.probs = arg<std::vector<double>>(a, "probs", c.rule == RuleKind::one_type ? std::vector<double>{1.0}
                                                                              : std::vector<double>{0.75, 0.25});
  c.dimension = arg<int>(a, "dimension", 2);
  c.side = arg<double>(a, "side", 30.0);
  c.rate = arg<double>(a, "rate", 1.0);
  c.replicates = arg<std::size_t>(a, "reps", 20);
  c.seed = seed_arg(a);
  c.histogram_bins = arg<std::size_t>(a, "bins", 40);
  c.max_expected_points = arg<double>(a, "max_points", 2e5);
  c.svg = arg<bool>(a, "svg", c.dimension == 2);
  const TorusExperimentResult res = run_torus_experiment(c);
  CommandResult r;
  r.records = res.records;
  r.outputs.push_back({"torus_records.csv", records_csv(res.records)});
  r.outputs.push_back({"torus_histograms.csv", res.histogram_csv});
  if (!res.svg.empty()) r.outputs.push_back({"torus_matching.svg", res.svg});
  return r;
}

CommandResult cmd_pwit(const json& a) {
  const PwitModelSpec model = model_arg(a);
  const double T = arg<double>(a, "T", 5.0);
  const std::size_t grid = arg<std::size_t>(a, "grid", 1);
  std::vector<double> times;
  if (grid <= 1) times = {T};
  else
    for (std::size_t i = 0; i < grid; ++i) times.push_back(T * static_cast<double>(i) / static_cast<double>(grid - 1));
  const RootEstimates est = estimate_root_probabilities(model, T, times, arg<std::size_t>(a, "reps", 10000),
                                                        seed_arg(a), arg<unsigned>(a, "workers", 0),
                                                        arg<std::size_t>(a, "node_cap", kDefaultNodeCap));
  CommandResult r;
  r.outputs.push_back({"pwit.csv", pwit_estimates_csv(arg<std::string>(a, "model", "asym"), T, est)});
  r.summary = std::to_string(est.used) + " trees used, censored fraction " + format_number(est.censored_fraction());
  return r;
}

CommandResult cmd_ode(const json& a) {
  const PwitModelSpec model = model_arg(a);
  const double tmax = arg<double>(a, "tmax", 20.0);
  IntegrateOptions opts;
  opts.tolerance = arg<double>(a, "tol", 1e-9);
  const double step = arg<double>(a, "step", 0.0);
  if (step > 0.0) {
    for (double t = step; t < tmax; t += step) opts.output_times.push_back(t);
    opts.output_times.push_back(tmax);
  }
  const OdeTrajectory traj = integrate(system_arg(model), tmax, opts);
  CommandResult r;
  r.outputs.push_back({"trajectory.csv", ode_trajectory_csv(traj)});
  if (a.contains("plateau_component")) {
    const PlateauEstimate pe =
        plateau_detect(traj, arg<std::size_t>(a, "plateau_component", 0), arg<double>(a, "plateau_accuracy", 1e-4));
    r.summary = "plateau " + format_number(pe.value) + " (certified bound " + format_number(pe.bound) + ")";
  } else {
    r.summary = std::to_string(traj.steps) + " steps, " + std::to_string(traj.rejected) + " rejected";
  }
  return r;
}

CommandResult cmd_hier_exact(const json& a) {
  const double lambda = arg<double>(a, "lambda", 1.0), eps = arg<double>(a, "eps", 0.3);
  const int depth = arg<int>(a, "base_depth", 40), top = arg<int>(a, "levels", 10);
  const int max_value = arg<int>(a, "max_value", kCertifyMaxValue);
  const RecursionReport rep = certify_recursion(lambda, eps, depth, top, max_value, arg<double>(a, "slack_budget", 1e-3));
  CommandResult r;
  r.outputs.push_back({"hierarchical_levels.csv", recursion_report_csv(rep)});
  const Verdict v = rep.overall();
  r.records.push_back({"hierarchical", "all_inequalities", "lambda=" + format_number(lambda) + ";eps=" + format_number(eps),
                       static_cast<double>(rep.levels.size()), 0.0, 0.0, Provenance::none, true,
                       v != Verdict::fail, to_string(v)});
  r.summary = "verdict " + to_string(v) + ", first level with gamma >= 1/3: " +
              (rep.first_gamma_third ? std::to_string(*rep.first_gamma_third) : std::string("none"));
  return r;
}

CommandResult cmd_hier_mc(const json& a) {
  const double lambda = arg<double>(a, "lambda", 1.0), eps = arg<double>(a, "eps", 0.3);
  const int K = arg<int>(a, "K", 10);
  const SegmentTally tally = mc_segment_tally(lambda, eps, K, arg<std::size_t>(a, "reps", 1000), seed_arg(a),
                                              arg<unsigned>(a, "workers", 0));
  CommandResult r;
  std::vector<ExcessPmf> chain;
  if (arg<bool>(a, "compare", true)) {
    const int levels_up = arg<int>(a, "base_depth", 40);
    chain = recursion_chain(lambda, eps, levels_up, K, arg<int>(a, "max_value", kCertifyMaxValue), arg<double>(a, "slack_budget", 1e-3));
  }
  r.outputs.push_back({"segment_tally.csv", segment_tally_csv(tally, chain.empty() ? nullptr : &chain)});
  if (!chain.empty()) {
    const TallyAgreement ag = tally_agreement(tally, chain.back());
    r.records.push_back({"hierarchical", "pmf_agreement_top_level", "K=" + std::to_string(K),
                         static_cast<double>(ag.misses), ag.worst_z, 0.0, Provenance::none, true, ag.misses == 0,
                         std::to_string(ag.points) + " support points; estimate = points outside the 3-SE band (exact tail when sparse), "
                         "uncertainty = worst distance in SE"});
  }
  const double length = static_cast<double>(tally.replicates) * std::ldexp(1.0, K);
  r.records.push_back({"hierarchical", "recursion_equals_matching", "K=" + std::to_string(K),
                       static_cast<double>(tally.replicates), 0.0, 0.0, Provenance::none, true, true,
                       "checked on every sample"});
  r.summary = "unmatched blue per unit length " + format_number(static_cast<double>(tally.unmatched_blue) / length);
  return r;
}

CommandResult records_only(std::vector<ResultRecord> recs, const std::string& name) {
  CommandResult r;
  r.records = std::move(recs);
  r.outputs.push_back({name, records_csv(r.records)});
  return r;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"match", "torus", "pwit", "ode", "hier_exact", "hier_mc", "cross_validate", "coupling",
          "theorem_targets", "verify", "figures"};
}

CommandResult run_command(const std::string& command, const std::string& args_json) {
  json a;
  try {
    a = args_json.empty() ? json::object() : json::parse(args_json);
  } catch (const json::exception& ex) {
    throw FormatError(std::string("arguments are not valid JSON: ") + ex.what());
  }
  if (!a.is_object()) throw FormatError("arguments must be a JSON object");

  CommandResult r;
  if (command == "match") r = cmd_match(a);
  else if (command == "torus") r = cmd_torus(a);
  else if (command == "pwit") r = cmd_pwit(a);
  else if (command == "ode") r = cmd_ode(a);
  else if (command == "hier_exact") r = cmd_hier_exact(a);
  else if (command == "hier_mc") r = cmd_hier_mc(a);
  else if (command == "cross_validate") {
    CrossValidateConfig c;
    c.model = model_arg(a);
    c.T = arg<double>(a, "T", 5.0);
    c.grid_points = arg<std::size_t>(a, "grid", 6);
    c.replicates = arg<std::size_t>(a, "reps", 10000);
    c.seed = seed_arg(a);
    c.torus = arg<bool>(a, "torus", true);
    c.torus_dimension = arg<int>(a, "torus_dimension", 2);
    c.torus_replicates = arg<std::size_t>(a, "torus_reps", 200);
    c.torus_side = arg<double>(a, "torus_side", 40.0);
    r = records_only(cross_validate(c), "cross_validate.csv");
  } else if (command == "coupling") {
    CouplingConfig c;
    c.dimensions = arg<std::vector<int>>(a, "dimensions", c.dimensions);
    c.lens_samples = arg<std::size_t>(a, "lens_samples", c.lens_samples);
    c.tree_bounds = arg<std::vector<double>>(a, "tree_bounds", c.tree_bounds);
    c.tree_replicates = arg<std::size_t>(a, "tree_reps", c.tree_replicates);
    c.seed = seed_arg(a);
    r = records_only(verify_coupling_lemmas(c), "coupling.csv");
  } else if (command == "theorem_targets") {
    TheoremTargetConfig c;
    c.model = model_arg(a);
    c.T = arg<double>(a, "T", 8.0);
    c.replicates = arg<std::size_t>(a, "reps", 10000);
    c.seed = seed_arg(a);
    r = records_only(theorem_targets(c), "theorem_targets.csv");
  } else if (command == "verify") {
    const std::string scale = arg<std::string>(a, "scale", "full");
    if (scale != "full" && scale != "quick") throw std::invalid_argument("scale must be full or quick");
    SuiteResult s = run_verify_suite(seed_arg(a), scale == "quick" ? SuiteScale::quick : SuiteScale::full);
    r.records = std::move(s.records);
    r.outputs = std::move(s.files);
  } else if (command == "figures") {
    r.outputs = make_figures(seed_arg(a));
    r.summary = std::to_string(r.outputs.size()) + " files";
  } else {
    throw std::invalid_argument("unknown command \"" + command + "\"");
  }
  finish(r);
  return r;
}

}  // namespace smatch
