// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "smatch/commands.hpp"
#include "smatch/experiments.hpp"
#include "smatch/odes.hpp"

using namespace smatch;

namespace {

const ResultRecord* find(const std::vector<ResultRecord>& recs, const std::string& check,
                         const std::string& params_part = "") {
  for (const auto& r : recs)
    if (r.check == check && r.params.find(params_part) != std::string::npos) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(unit_ball_volume(200) > 0.0);
  CHECK(unit_ball_volume(200) < 1e-100);
}

TEST_CASE("lens volume") {
  const auto [far, far_se] = lens_fraction(10, 2.0, 1000, 1);
  CHECK(far == 0.0);
  CHECK(far_se == 0.0);
  const auto [half, se] = lens_fraction(10, 0.5, 50000, 2);
  CHECK(half <= std::pow(15.0 / 16.0, 5.0) + 3.0 * se);
  CHECK(half > 0.0);
  const auto [same, same_se] = lens_fraction(3, 0.0, 1000, 3);
  CHECK(same == 1.0);
}

TEST_CASE("coupling lemma records") {
  CouplingConfig c;
  c.dimensions = {5};
  c.lens_samples = 20000;
  c.tree_bounds = {0.5, 2.0};
  c.tree_replicates = 4000;
  const auto recs = verify_coupling_lemmas(c);
  CHECK(all_gated_pass(recs));
  CHECK(std::count_if(recs.begin(), recs.end(), [](const ResultRecord& r) { return r.check == "tree_size_mean"; }) == 2);
}

TEST_CASE("theorem targets") {
  TheoremTargetConfig c;
  c.replicates = 2000;
  c.T = 6.0;
  auto recs = theorem_targets(c);
  const ResultRecord* r = find(recs, "pwit_plateau_vs_limit");
  REQUIRE(r != nullptr);
  CHECK(r->reference == doctest::Approx(0.012446).epsilon(1e-4));
  CHECK(r->provenance == Provenance::closed_form);
  CHECK(all_gated_pass(recs));
  const ResultRecord* big_d = find(recs, "euclidean_large_d");
  REQUIRE(big_d != nullptr);
  CHECK_FALSE(big_d->gated);

  c.model = PwitModelSpec::symmetric({0.5, 0.25, 0.25});
  recs = theorem_targets(c);
  r = find(recs, "pwit_plateau_vs_limit");
  REQUIRE(r != nullptr);
  CHECK(r->reference == doctest::Approx(0.125));
  CHECK(all_gated_pass(recs));

  // As eps -> 1 nearly every blue is left over.
  CHECK(closed_form_b_infinity(0.99) == doctest::Approx(0.99).epsilon(0.02));
}

TEST_CASE("cross validation at t = 0 and t = T") {
  CrossValidateConfig c;
  c.replicates = 2000;
  c.grid_points = 2;
  c.torus_replicates = 10;
  c.torus_side = 15.0;
  const auto recs = cross_validate(c);
  CHECK(all_gated_pass(recs));
  bool saw_zero = false;
  for (const auto& r : recs)
    if (r.check == "pwit_vs_ode" && r.params.find("t=0;") != std::string::npos) {
      saw_zero = true;
      CHECK(r.estimate == r.reference);
    }
  CHECK(saw_zero);
}

TEST_CASE("torus experiments") {
  SUBCASE("one type leaves at most one point") {
    TorusExperimentConfig c;
    c.rule = RuleKind::one_type;
    c.probs = {1.0};
    c.side = 12.0;
    c.replicates = 6;
    const auto res = run_torus_experiment(c);
    const ResultRecord* parity = find(res.records, "one_type_parity");
    REQUIRE(parity != nullptr);
    CHECK(parity->pass);
    CHECK(all_gated_pass(res.records));
  }
  SUBCASE("blue-heavy scatter") {
    TorusExperimentConfig c;
    c.probs = {5.0 / 6.0, 1.0 / 6.0};
    c.side = 20.0;
    c.replicates = 4;
    c.svg = true;
    const auto res = run_torus_experiment(c);
    CHECK(all_gated_pass(res.records));
    CHECK(res.svg.find("<svg") != std::string::npos);
    const ResultRecord* blue = find(res.records, "unmatched_spatial", "color=1");
    REQUIRE(blue != nullptr);
    CHECK(blue->estimate > 0.0);
  }
  SUBCASE("two balanced colors on a line") {
    TorusExperimentConfig c;
    c.rule = RuleKind::symmetric_k_type;
    c.probs = {0.5, 0.5};
    c.dimension = 1;
    c.side = 400.0;
    c.replicates = 4;
    const auto small = run_torus_experiment(c);
    c.side = 6400.0;
    const auto large = run_torus_experiment(c);
    const ResultRecord* a = find(small.records, "unmatched_spatial", "color=0");
    const ResultRecord* b = find(large.records, "unmatched_spatial", "color=0");
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(b->estimate < a->estimate);
  }
  SUBCASE("cap") {
    TorusExperimentConfig c;
    c.side = 1000.0;
    CHECK_THROWS_AS(run_torus_experiment(c), std::invalid_argument);
  }
}

TEST_CASE("figures") {
  const auto files = make_figures(3);
  REQUIRE(files.size() == 3);
  CHECK(files[0].content.find("<svg") != std::string::npos);
  const PointConfig cfg = fixed_count_config(2, 10.0, {20, 10}, 4);
  CHECK(cfg.size() == 30);
  CHECK(std::count(cfg.colors.begin(), cfg.colors.end(), 1) == 10);
}

TEST_CASE("commands") {
  CHECK_THROWS_AS(run_command("bogus", "{}"), std::invalid_argument);
  const CommandResult r = run_command("pwit", R"({"model": "one", "T": 1, "reps": 300, "seed": 2})");
  CHECK(r.gated_pass);
  CHECK(r.outputs.at(0).content.rfind("model,T,t,color,estimate,se,censored_fraction\n", 0) == 0);
  const CommandResult again = run_command("pwit", R"({"model": "one", "T": 1, "reps": 300, "seed": 2})");
  CHECK(again.outputs.at(0).content == r.outputs.at(0).content);
  const CommandResult m = run_command(
      "match", R"({"instance": {"vertices": ["a", "b"], "weights": [["a", "b", 2]]}})");
  CHECK(m.gated_pass);
  CHECK(m.outputs.at(0).content == "vertex,partner,weight\na,b,2\nb,a,2\n");
}
