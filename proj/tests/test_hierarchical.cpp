// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>

#include "smatch/hierarchical.hpp"
#include "smatch/point_models.hpp"
#include "smatch/rng.hpp"

using namespace smatch;

namespace {

// Plain double pushforward through g, no truncation.
std::map<int, double> convolve(const std::map<int, double>& p) {
  std::map<int, double> out;
  for (const auto& [a, pa] : p)
    for (const auto& [b, pb] : p) out[g(a, b)] += pa * pb;
  return out;
}

std::vector<double> to_masses(const std::map<int, double>& p) {
  std::vector<double> m(static_cast<std::size_t>(p.rbegin()->first + 2), 0.0);
  for (const auto& [v, pv] : p) m[static_cast<std::size_t>(v + 1)] = pv;
  return m;
}

PointConfig segment(std::vector<double> xs, std::vector<int> colors, double side) {
  PointConfig c;
  c.dimension = 1;
  c.domain = Domain::segment;
  c.side = side;
  c.coords = std::move(xs);
  c.colors = std::move(colors);
  return c;
}

}  // namespace

TEST_CASE("g") {
  CHECK(g(-1, -1) == 0);
  CHECK(g(2, -1) == 1);
  CHECK(g(0, 0) == 0);
  CHECK(g(-1, 3) == 2);
  CHECK_THROWS_AS(g(-2, 0), std::invalid_argument);
}

TEST_CASE("base law") {
  SUBCASE("lambda s = 0.1, eps = 0.5") {
    const ExcessPmf p = base_pmf(0.1, 0.5, 0, 5e-3);
    const ProbInterval m = p.mass(-1);
    CHECK(m.lo == doctest::Approx(0.05 * std::exp(-0.1)).epsilon(1e-12));
    CHECK(m.lo >= 0.04524);
    CHECK(m.hi <= 0.04524 + 0.00468);
    CHECK(p.level() == 0);
    // Exactly two blues: excess 2.
    CHECK(p.mass(2).lo == doctest::Approx(0.25 * 0.005 * std::exp(-0.1)).epsilon(1e-12));
    CHECK(p.unlocated_upper() == doctest::Approx(1.0 - std::exp(-0.1) * (1.0 + 0.1 + 0.005)).epsilon(1e-9));
  }
  SUBCASE("fine cells are almost surely empty") {
    const ExcessPmf p = base_pmf(1.0, 0.3, 60);
    CHECK(p.mass(0).lo >= std::nextafter(1.0, 0.0));
    CHECK(p.level() == -60);
  }
  SUBCASE("no reds") { CHECK(base_pmf(1.0, 1.0, 10).mass(-1).lo == 0.0); }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(base_pmf(1.0, 0.3, 0), std::invalid_argument);      // mu = 1
    CHECK_THROWS_AS(base_pmf(1.0, 0.3, 2, 1e-6), std::invalid_argument);  // slack over budget
    CHECK_THROWS_AS(base_pmf(-1.0, 0.3, 10), std::invalid_argument);
  }
}

TEST_CASE("level_up examples") {
  SUBCASE("point mass at 0 stays") {
    const ExcessPmf up = level_up(ExcessPmf::from_masses({0.0, 1.0}));
    CHECK(up.mass(0).lo == 1.0);
    CHECK(up.level() == 1);
  }
  SUBCASE("point mass at -1 goes to 0") {
    const ExcessPmf up = level_up(ExcessPmf::from_masses({1.0}));
    CHECK(up.mass(0).lo == 1.0);
    CHECK(up.mass(-1).hi == 0.0);
  }
  SUBCASE("uniform on {-1, 1}") {
    const ExcessPmf p = ExcessPmf::from_masses({0.5, 0.0, 0.5});
    const ExcessPmf up = level_up(p);
    CHECK(up.mass(0).lo == 0.75);
    CHECK(up.mass(0).hi == 0.75);
    CHECK(up.mass(2).lo == 0.25);
    const LevelStats s0 = stats(p), s1 = stats(up);
    CHECK(s0.beta.hi == 0.0);  // both atoms are odd
    CHECK(s0.gamma.contains(0.5));
    CHECK(s0.delta.hi == 0.0);
    CHECK(s1.beta.lo == 1.0);
    CHECK(s1.gamma.hi == 0.0);
    CHECK(s1.delta.contains(0.25));
  }
  SUBCASE("point mass at 0: parity statistics") {
    const LevelStats s = stats(ExcessPmf::from_masses({0.0, 1.0}));
    CHECK(s.beta.lo == 1.0);
    CHECK(s.gamma.hi == 0.0);
    CHECK(s.delta.hi == 0.0);
  }
}

TEST_CASE("level_up encloses the exact pushforward") {
  std::map<int, double> p{{-1, 0.25}, {0, 0.375}, {1, 0.25}, {3, 0.125}};
  ExcessPmf pmf = ExcessPmf::from_masses(to_masses(p), 0, 6);
  for (int step = 0; step < 4; ++step) {
    p = convolve(p);
    pmf = level_up(pmf);
    double beyond = 0.0;
    for (const auto& [v, pv] : p) {
      if (v <= 6) {
        CHECK(pmf.mass(v).lo <= pv + 1e-15);
        CHECK(pmf.mass(v).hi >= pv - 1e-15);
      } else {
        beyond += pv;
      }
    }
    CHECK(pmf.tail().lo <= beyond + 1e-15);
    CHECK(pmf.tail().hi >= beyond - 1e-15);
    const LevelStats s = stats(pmf);
    double even = 0, odd_pos = 0, even_pos = 0, mean = 0;
    for (const auto& [v, pv] : p) {
      even += (v % 2 == 0) ? pv : 0;
      odd_pos += (v > 0 && v % 2 != 0) ? pv : 0;
      even_pos += (v > 0 && v % 2 == 0) ? pv : 0;
      mean += v * pv;
    }
    CHECK(s.beta.lo <= even + 1e-15);
    CHECK(s.beta.hi >= even - 1e-15);
    CHECK(s.gamma.lo <= odd_pos + 1e-15);
    CHECK(s.gamma.hi >= odd_pos - 1e-15);
    CHECK(s.delta.lo <= even_pos + 1e-15);
    CHECK(s.delta.hi >= even_pos - 1e-15);
    CHECK(s.mean_lower <= mean + 1e-12);
  }
}

TEST_CASE("parity map") {
  CHECK(parity_map({0.5, 0.5}).contains(0.5));
  const ProbInterval f = parity_map({0.6, 0.6});
  CHECK(f.contains(0.52));
  CHECK(f.width() < 1e-15);
  const ProbInterval wide = parity_map({0.4, 0.7});
  CHECK(wide.lo <= 0.5);
  CHECK(wide.hi >= 0.58);
}

TEST_CASE("certified recursion at lambda = 1, eps = 0.3") {
  const RecursionReport rep = certify_recursion(1.0, 0.3, 40, 10, 512);
  REQUIRE(rep.levels.size() == 51);
  CHECK(rep.overall() == Verdict::pass);
  REQUIRE(rep.first_gamma_third.has_value());
  CHECK(*rep.first_gamma_third <= 2.0 * 3.0 * std::exp(1.0) / 0.3);
  CHECK(rep.k0_order == Verdict::pass);
  for (const auto& c : rep.levels) {
    if (c.k >= 1) CHECK(c.stats.beta.lo >= 0.5);
  }
  const auto chain = recursion_chain(1.0, 0.3, 40, 10, 512);
  REQUIRE(chain.size() == 51);
  CHECK(chain.back().level() == 10);
}

TEST_CASE("segments") {
  SUBCASE("one red and one blue match") {
    const SegmentSample s = mc_segment_from(segment({0.2, 2.7}, {kRed, kBlue}, 4.0), 2);
    CHECK(s.table[2][0] == 0);
    CHECK(s.unmatched_blue == 0);
  }
  SUBCASE("two blues stay single") {
    const SegmentSample s = mc_segment_from(segment({0.2, 2.7}, {kBlue, kBlue}, 4.0), 2);
    CHECK(s.table[2][0] == 2);
    CHECK(s.unmatched_blue == 2);
  }
  SUBCASE("empty") {
    const SegmentSample s = mc_segment_from(segment({}, {}, 2.0), 1);
    CHECK(s.table[1][0] == 0);
  }
  SUBCASE("random segments pass their internal cross-checks") {
    for (std::uint64_t r = 0; r < 40; ++r) {
      const SegmentSample s = mc_segment(1.0, 0.5, 8, derive_seed(12, r));
      REQUIRE(s.table.size() == 9);
      CHECK(s.table[0].size() == 256);
      for (int k = 1; k <= 8; ++k)
        for (std::size_t m = 0; m < s.table[static_cast<std::size_t>(k)].size(); ++m)
          CHECK(s.table[k][m] >= s.table[k - 1][2 * m] + s.table[k - 1][2 * m + 1]);
    }
  }
  SUBCASE("excess of a cell by halving") {
    CHECK(excess_by_recursion({0.1, 0.6}, {kRed, kRed}, 0.0, 1.0) == 0);
    CHECK(excess_by_recursion({0.1}, {kRed}, 0.0, 1.0) == -1);
    CHECK(excess_by_recursion({0.1, 0.2, 0.7}, {kBlue, kBlue, kRed}, 0.0, 1.0) == 1);
  }
  SUBCASE("K range") {
    CHECK_THROWS_AS(mc_segment(1.0, 0.5, -1, 1), std::invalid_argument);
    CHECK_THROWS_AS(mc_segment(1.0, 0.5, 31, 1), std::invalid_argument);
  }
}

TEST_CASE("unmatched blue density is positive") {
  const SegmentTally t = mc_segment_tally(1.0, 0.5, 10, 200, 4);
  const double length = 200.0 * 1024.0;
  CHECK(t.unmatched_blue > 0);
  CHECK(t.cells(10) == 200);
  CHECK(static_cast<double>(t.unmatched_blue) / length > 0.001);
  const SegmentTally again = mc_segment_tally(1.0, 0.5, 10, 200, 4, 1);
  CHECK(again.counts == t.counts);
}
