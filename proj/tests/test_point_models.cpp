// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "smatch/matching.hpp"
#include "smatch/point_models.hpp"
#include "smatch/rng.hpp"

using namespace smatch;

namespace {

// Straight from the definition: largest k with equal floors, scanning k.
double rho_reference(double x, double y) {
  if (x == y) return 0.0;
  int k = -1100;
  while (std::floor(std::ldexp(x, k + 1)) == std::floor(std::ldexp(y, k + 1))) ++k;
  return std::ldexp(1.0, -k);
}

}  // namespace

TEST_CASE("rho on hand-checked pairs") {
  CHECK(rho(0.3, 0.4) == 0.25);
  CHECK(rho(0.3, 0.6) == 1.0);
  CHECK(rho(0.5, 0.5) == 0.0);
  CHECK(rho(1.0, 3.0) == 4.0);
  CHECK(rho_tilde(0.3, 0.4) == doctest::Approx(0.35));
}

TEST_CASE("rho agrees with the floor-scanning definition") {
  SplitMix64 rng(2024);
  for (int i = 0; i < 20000; ++i) {
    const double scale = std::ldexp(1.0, static_cast<int>(rng.uniform() * 40.0) - 10);
    const double x = rng.uniform() * scale;
    double y = rng.uniform() * scale;
    if (i % 5 == 0) y = std::nextafter(x, 2 * scale);  // adjacent doubles
    REQUIRE(rho(x, y) == rho_reference(x, y));
    REQUIRE(rho(y, x) == rho(x, y));
  }
}

TEST_CASE("rho is an ultrametric") {
  SplitMix64 rng(3);
  for (int i = 0; i < 5000; ++i) {
    const double x = rng.uniform() * 8, y = rng.uniform() * 8, z = rng.uniform() * 8;
    CHECK(rho(x, z) <= std::max(rho(x, y), rho(y, z)));
  }
}

TEST_CASE("torus distance uses the minimum image") {
  const std::vector<double> a{0.5, 9.5}, b{9.5, 0.5};
  CHECK(torus_distance(a, b, 10.0) == doctest::Approx(std::sqrt(2.0)));
  const std::vector<double> c{2.0}, d{7.0};
  CHECK(torus_distance(c, d, 10.0) == doctest::Approx(5.0));
}

TEST_CASE("sampling") {
  const std::vector<double> probs{2.0 / 3.0, 1.0 / 3.0};
  SUBCASE("expected counts at side 50") {
    const PointConfig cfg = sample_config(1.0, 2, 50.0, probs, 9);
    std::size_t blue = 0;
    for (int c : cfg.colors) blue += c == kBlue;
    const double n = static_cast<double>(cfg.size());
    CHECK(std::abs(n - 2500.0) < 4.0 * 50.0);
    CHECK(std::abs(static_cast<double>(blue) - 833.3) < 4.0 * std::sqrt(833.3));
    CHECK_NOTHROW(cfg.validate());
  }
  SUBCASE("zero side gives nothing") { CHECK(sample_config(1.0, 2, 0.0, probs, 1).size() == 0); }
  SUBCASE("same seed, same configuration") {
    const PointConfig a = sample_config(1.0, 3, 5.0, probs, 42), b = sample_config(1.0, 3, 5.0, probs, 42);
    CHECK(a.coords == b.coords);
    CHECK(a.colors == b.colors);
    CHECK(sample_config(1.0, 3, 5.0, probs, 43).coords != a.coords);
  }
  SUBCASE("bad probabilities") {
    const std::vector<double> bad{0.7, 0.7};
    CHECK_THROWS_AS(sample_config(1.0, 2, 5.0, bad, 1), std::invalid_argument);
  }
}

TEST_CASE("Palm version") {
  const std::vector<double> probs{0.75, 0.25};
  SUBCASE("of the empty configuration") {
    PointConfig empty;
    empty.dimension = 2;
    empty.side = 4.0;
    const PointConfig p = palm_version(empty, probs, 1);
    REQUIRE(p.size() == 1);
    CHECK(p.palm_origin);
    CHECK(p.point(0)[0] == 0.0);
    CHECK(p.point(0)[1] == 0.0);
  }
  SUBCASE("keeps the original points") {
    const PointConfig cfg = sample_config(1.0, 2, 6.0, probs, 5);
    const PointConfig p = palm_version(cfg, probs, 6);
    REQUIRE(p.size() == cfg.size() + 1);
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      CHECK(p.colors[i + 1] == cfg.colors[i]);
      CHECK(p.point(i + 1)[0] == cfg.point(i)[0]);
    }
  }
  SUBCASE("origin color frequency") {
    PointConfig empty;
    empty.dimension = 1;
    empty.side = 1.0;
    const int reps = 20000;
    int blue = 0;
    for (int r = 0; r < reps; ++r) blue += palm_version(empty, probs, derive_seed(8, r)).colors[0] == kBlue;
    const double f = static_cast<double>(blue) / reps, se = std::sqrt(0.25 * 0.75 / reps);
    CHECK(std::abs(f - 0.25) < 3.0 * se);
  }
}

TEST_CASE("weights and instances") {
  PointConfig cfg;
  cfg.dimension = 1;
  cfg.domain = Domain::segment;
  cfg.side = 8.0;
  cfg.coords = {0.3, 0.4, 0.6};
  cfg.colors = {kBlue, kBlue, kRed};
  const auto asym = ColorRule::asymmetric_two_type();
  CHECK(weight(cfg, asym, MetricKind::hierarchical_rho, 0, 1) == kInfinity);
  CHECK(weight(cfg, asym, MetricKind::hierarchical_rho, 0, 2) == 1.0);

  SUBCASE("one-type triangle is complete") {
    PointConfig mono = cfg;
    mono.colors = {0, 0, 0};
    const PointInstance inst = build_instance(mono, ColorRule::one_type(), MetricKind::hierarchical_rho_tilde);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK((i == j) == (inst.weight(i, j) == kInfinity));
  }
  SUBCASE("rho ties, rho-tilde does not") {
    const std::vector<double> probs{0.5, 0.5};
    const PointConfig seg = sample_config(1.0, 1, 64.0, probs, 17, Domain::segment);
    CHECK_THROWS_AS(build_instance(seg, asym, MetricKind::hierarchical_rho), TieError);
    CHECK_NOTHROW(build_instance(seg, asym, MetricKind::hierarchical_rho_tilde));
  }
}
