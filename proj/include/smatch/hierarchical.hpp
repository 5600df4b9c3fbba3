// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Blue-excess recursion on dyadic intervals of the line.
//
// N_k(m) is the number of blue minus red points of [m 2^k, (m+1) 2^k) that
// the stable matching does not pair inside the interval. Two sibling cells
// combine through g, and disjoint cells are i.i.d., so the law of N_k
// follows from the law of N_{k-1} by a self-convolution pushed through g.
//
// The law is carried in a certified form: a lower measure on -1..N_max, a
// mass known to lie at values >= tail_min, and an unlocated remainder.
// All arithmetic is done in MPFR with outward rounding.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smatch/matching.hpp"
#include "smatch/point_models.hpp"

namespace smatch {

int g(int a, int b);

struct ProbInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

inline constexpr int kDefaultMaxValue = 64;
/// Support used for certification runs; 64 leaves level 10 undecided.
inline constexpr int kCertifyMaxValue = 512;

class ExcessPmf {
 public:
  /// Exact law from masses[v + 1] = P(N = v), v = -1, 0, 1, ... (the
  /// masses are taken at face value; any deficit from 1 becomes unlocated).
  static ExcessPmf from_masses(const std::vector<double>& masses, int level = 0,
                               int max_value = kDefaultMaxValue);

  ExcessPmf(const ExcessPmf&);
  ExcessPmf(ExcessPmf&&) noexcept;
  ExcessPmf& operator=(const ExcessPmf&);
  ExcessPmf& operator=(ExcessPmf&&) noexcept;
  ~ExcessPmf();

  int level() const { return level_; }
  int max_value() const { return max_value_; }
  /// Interval for P(N = v), -1 <= v <= max_value.
  ProbInterval mass(int v) const;
  /// Interval for P(N > max_value).
  ProbInterval tail() const;
  /// Probability that is certified to sit at a known value in -1..max_value.
  double located_lower(int v) const;
  /// Mass known to lie at values >= tail_min(), and that bound.
  double tail_mass_lower() const;
  int tail_min() const { return tail_min_; }
  /// Upper bound on the mass with unknown location.
  double unlocated_upper() const;

  struct Impl;

 private:
  ExcessPmf();
  friend ExcessPmf base_pmf(double, double, int, double, int);
  friend ExcessPmf level_up(const ExcessPmf&);
  friend struct LevelStats stats(const ExcessPmf&);

  int level_ = 0;
  int max_value_ = kDefaultMaxValue;
  int tail_min_ = kDefaultMaxValue + 1;
  std::unique_ptr<Impl> impl_;
};

/// Law of N on a cell of length 2^{-depth} under rate lambda with blue
/// probability eps, mu = lambda 2^{-depth}: exact masses for 0, 1 and 2
/// points (two points leave excess 2 if both blue, else 0), and the
/// probability of three or more left unlocated. With max_value < 2 the
/// two-point mass is unlocated as well. Level is -depth. Throws if the
/// unlocated mass exceeds slack_budget or if mu >= 1.
ExcessPmf base_pmf(double lambda, double eps, int depth, double slack_budget = 1e-3,
                   int max_value = kDefaultMaxValue);

/// Law one level up. Values above max_value are folded into the tail.
ExcessPmf level_up(const ExcessPmf& pmf);

struct LevelStats {
  int k = 0;
  ProbInterval beta;   ///< P(N even)
  ProbInterval gamma;  ///< P(N odd and positive)
  ProbInterval delta;  ///< P(N even and positive)
  double mean_lower = 0.0;  ///< lower bound on E N
};

LevelStats stats(const ExcessPmf& pmf);

/// beta^2 + (1 - beta)^2 over an interval of beta, outward rounded.
ProbInterval parity_map(ProbInterval beta);

enum class Verdict { pass, inconclusive, fail };
std::string to_string(Verdict v);

struct LevelCheck {
  int k = 0;
  LevelStats stats;        ///< with beta narrowed by the parity map
  Verdict beta_half = Verdict::pass;      ///< beta_k >= 1/2
  Verdict gamma_monotone = Verdict::pass; ///< gamma_k >= gamma_{k-1}
  Verdict delta_square = Verdict::pass;   ///< delta_k >= gamma_{k-1}^2
  Verdict mean_sixth = Verdict::pass;     ///< E N_k >= 1/6 once gamma_k >= 1/3
};

struct RecursionReport {
  double lambda = 0.0;
  double eps = 0.0;
  int base_depth = 0;
  std::vector<LevelCheck> levels;     ///< level -base_depth .. top
  std::optional<int> first_gamma_third;  ///< first k with gamma.lo >= 1/3
  double k0_reference = 0.0;             ///< 3e / eps
  Verdict k0_order = Verdict::inconclusive;  ///< first_gamma_third <= 2 * k0_reference

  /// Worst verdict over every check and level.
  Verdict overall() const;
};

/// Runs the recursion from base_pmf(lambda, eps, depth) up to level `top`,
/// narrowing beta_k by the exact parity identity beta_k = f(beta_{k-1}),
/// and checks every inequality on certified bounds. A check whose bounds
/// straddle its threshold is inconclusive, not failed.
RecursionReport certify_recursion(double lambda, double eps, int depth, int top,
                                  int max_value = kDefaultMaxValue, double slack_budget = 1e-3);

/// The laws themselves, level -depth .. top.
std::vector<ExcessPmf> recursion_chain(double lambda, double eps, int depth, int top,
                                       int max_value = kDefaultMaxValue,
                                       double slack_budget = 1e-3);

/// One simulated segment [0, 2^K).
struct SegmentSample {
  int K = 0;
  PointConfig config;
  /// table[k][m] = N_k(m) for 0 <= k <= K, 0 <= m < 2^{K-k}.
  std::vector<std::vector<int>> table;
  Matching matching;           ///< rho-tilde stable matching of the points
  std::size_t unmatched_blue = 0;
};

/// N for the points of one cell by recursive halving down to cells with
/// at most one point. `coords` must lie in [lo, lo + len).
int excess_by_recursion(const std::vector<double>& coords, const std::vector<int>& colors, double lo,
                        double len);

/// Samples rate-lambda points with blue probability eps on [0, 2^K),
/// computes N_k(m) both by the recursion and from the stable matching, and
/// throws std::logic_error if they differ anywhere, if superadditivity
/// fails, or if the unmatched blue count is not max(N_K(0), 0).
SegmentSample mc_segment(double lambda, double eps, int K, std::uint64_t seed);

/// Same, on given points (positions in [0, 2^K)).
SegmentSample mc_segment_from(PointConfig config, int K);

/// counts[k][v + 1] = number of level-k cells with N = v, pooled over
/// replicates (replicate r is seeded with derive_seed(seed, r)).
struct SegmentTally {
  int K = 0;
  std::size_t replicates = 0;
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::uint64_t> top_counts;  ///< counts at level K only, same as counts[K]
  std::uint64_t unmatched_blue = 0;
  std::uint64_t points = 0;

  std::uint64_t cells(int k) const;
};

SegmentTally mc_segment_tally(double lambda, double eps, int K, std::size_t replicates,
                              std::uint64_t seed, unsigned workers = 0);

}  // namespace smatch
