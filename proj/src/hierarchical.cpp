// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smatch/hierarchical.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "smatch/parallel.hpp"
#include "smatch/rng.hpp"

namespace smatch {

int g(int a, int b) {
  if (a < -1 || b < -1) throw std::invalid_argument("excess values start at -1");
  if (a == -1 && b == -1) return 0;
  return a + b;
}

namespace {

// The unlocated mass roughly doubles per level, so base-level rounding
// errors get amplified by 2^(levels); 128 bits leaves ample room.
constexpr mpfr_prec_t kPrecision = 128;

class Real {
 public:
  Real() {
    mpfr_init2(v_, kPrecision);
    mpfr_set_zero(v_, 1);
  }
  explicit Real(double x) {
    mpfr_init2(v_, kPrecision);
    mpfr_set_d(v_, x, MPFR_RNDN);  // exact: doubles fit
  }
  Real(const Real& o) {
    mpfr_init2(v_, kPrecision);
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept : Real() { mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr p() { return v_; }
  mpfr_srcptr p() const { return v_; }
  bool positive() const { return mpfr_sgn(v_) > 0; }
  double down() const { return mpfr_get_d(v_, MPFR_RNDD); }
  double up() const { return mpfr_get_d(v_, MPFR_RNDU); }

 private:
  mpfr_t v_;
};

Real sum(const std::vector<Real>& xs, mpfr_rnd_t rnd) {
  Real acc;
  for (const Real& x : xs) mpfr_add(acc.p(), acc.p(), x.p(), rnd);
  return acc;
}

// 1 - located, rounded up and clamped to [0, 1].
Real remainder_up(const Real& located) {
  Real out;
  mpfr_ui_sub(out.p(), 1, located.p(), MPFR_RNDU);
  if (mpfr_sgn(out.p()) < 0) mpfr_set_zero(out.p(), 1);
  return out;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

struct ExcessPmf::Impl {
  std::vector<Real> lower;  // lower[v + 1], v = -1..max_value
  Real tail;                // at values >= tail_min
  Real slack;               // anywhere
};

ExcessPmf::ExcessPmf() : impl_(std::make_unique<Impl>()) {}
ExcessPmf::ExcessPmf(const ExcessPmf& o)
    : level_(o.level_), max_value_(o.max_value_), tail_min_(o.tail_min_),
      impl_(std::make_unique<Impl>(*o.impl_)) {}
ExcessPmf::ExcessPmf(ExcessPmf&&) noexcept = default;
ExcessPmf& ExcessPmf::operator=(const ExcessPmf& o) {
  if (this != &o) {
    level_ = o.level_;
    max_value_ = o.max_value_;
    tail_min_ = o.tail_min_;
    impl_ = std::make_unique<Impl>(*o.impl_);
  }
  return *this;
}
ExcessPmf& ExcessPmf::operator=(ExcessPmf&&) noexcept = default;
ExcessPmf::~ExcessPmf() = default;

ExcessPmf ExcessPmf::from_masses(const std::vector<double>& masses, int level, int max_value) {
  if (max_value < 1) throw std::invalid_argument("max_value must be at least 1");
  if (masses.size() > static_cast<std::size_t>(max_value) + 2)
    throw std::invalid_argument("masses beyond max_value");
  ExcessPmf out;
  out.level_ = level;
  out.max_value_ = max_value;
  out.tail_min_ = max_value + 1;
  out.impl_->lower.assign(static_cast<std::size_t>(max_value) + 2, Real());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] >= 0.0 && masses[i] <= 1.0)) throw std::invalid_argument("mass outside [0, 1]");
    out.impl_->lower[i] = Real(masses[i]);
  }
  const Real located = sum(out.impl_->lower, MPFR_RNDD);
  if (mpfr_cmp_ui(located.p(), 1) > 0) throw std::invalid_argument("masses sum above 1");
  out.impl_->slack = remainder_up(located);
  return out;
}

ProbInterval ExcessPmf::mass(int v) const {
  if (v < -1 || v > max_value_) throw std::out_of_range("value outside the tracked support");
  const Real& lo = impl_->lower[static_cast<std::size_t>(v + 1)];
  Real hi(lo);
  mpfr_add(hi.p(), hi.p(), impl_->slack.p(), MPFR_RNDU);
  if (v >= tail_min_) mpfr_add(hi.p(), hi.p(), impl_->tail.p(), MPFR_RNDU);
  return {clamp01(lo.down()), clamp01(hi.up())};
}

ProbInterval ExcessPmf::tail() const {
  Real hi(impl_->tail);
  mpfr_add(hi.p(), hi.p(), impl_->slack.p(), MPFR_RNDU);
  const double lo = tail_min_ > max_value_ ? impl_->tail.down() : 0.0;
  return {clamp01(lo), clamp01(hi.up())};
}

double ExcessPmf::located_lower(int v) const {
  if (v < -1 || v > max_value_) throw std::out_of_range("value outside the tracked support");
  return impl_->lower[static_cast<std::size_t>(v + 1)].down();
}

double ExcessPmf::tail_mass_lower() const { return impl_->tail.down(); }
double ExcessPmf::unlocated_upper() const { return clamp01(impl_->slack.up()); }

ExcessPmf base_pmf(double lambda, double eps, int depth, double slack_budget, int max_value) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0, 1]");
  if (max_value < 1) throw std::invalid_argument("max_value must be at least 1");
  Real mu(lambda);
  mpfr_mul_2si(mu.p(), mu.p(), -depth, MPFR_RNDN);  // exact
  if (mpfr_cmp_ui(mu.p(), 1) >= 0)
    throw std::invalid_argument("cell too coarse: need (lambda 2^-depth)^2 / 2 < 1/2");

  Real none;  // e^{-mu}
  mpfr_neg(none.p(), mu.p(), MPFR_RNDN);
  mpfr_exp(none.p(), none.p(), MPFR_RNDD);
  Real one;  // mu e^{-mu}
  mpfr_mul(one.p(), mu.p(), none.p(), MPFR_RNDD);
  Real red_share(1.0);
  mpfr_sub_d(red_share.p(), red_share.p(), eps, MPFR_RNDN);  // exact at this precision

  ExcessPmf out;
  out.level_ = -depth;
  out.max_value_ = max_value;
  out.tail_min_ = max_value + 1;
  auto& lower = out.impl_->lower;
  lower.assign(static_cast<std::size_t>(max_value) + 2, Real());
  mpfr_mul(lower[0].p(), one.p(), red_share.p(), MPFR_RNDD);
  lower[1] = none;
  mpfr_mul_d(lower[2].p(), one.p(), eps, MPFR_RNDD);
  // Two points in a cell: two blues stay unmatched (excess 2), any other
  // pair matches inside the cell (excess 0). Without this term the first
  // level's even-positive mass would equal gamma^2 up to the slack.
  if (max_value >= 2) {
    Real two;  // mu^2 e^{-mu} / 2
    mpfr_mul(two.p(), one.p(), mu.p(), MPFR_RNDD);
    mpfr_mul_2si(two.p(), two.p(), -1, MPFR_RNDD);
    Real both_blue, mixed, share;
    mpfr_set_d(share.p(), eps, MPFR_RNDN);
    mpfr_sqr(share.p(), share.p(), MPFR_RNDD);
    mpfr_mul(both_blue.p(), two.p(), share.p(), MPFR_RNDD);
    mpfr_set_d(share.p(), eps, MPFR_RNDN);
    mpfr_sqr(share.p(), share.p(), MPFR_RNDU);
    mpfr_ui_sub(share.p(), 1, share.p(), MPFR_RNDD);
    mpfr_mul(mixed.p(), two.p(), share.p(), MPFR_RNDD);
    lower[3] = both_blue;
    mpfr_add(lower[1].p(), lower[1].p(), mixed.p(), MPFR_RNDD);
  }
  out.impl_->slack = remainder_up(sum(lower, MPFR_RNDD));
  if (out.impl_->slack.up() > slack_budget)
    throw std::invalid_argument("multi-point mass " + std::to_string(out.impl_->slack.up()) +
                                " exceeds the slack budget; increase depth");
  return out;
}

ExcessPmf level_up(const ExcessPmf& pmf) {
  const int max_value = pmf.max_value_;
  const auto& L = pmf.impl_->lower;
  std::vector<int> support;
  for (int v = -1; v <= max_value; ++v)
    if (L[static_cast<std::size_t>(v + 1)].positive()) support.push_back(v);

  ExcessPmf out;
  out.level_ = pmf.level_ + 1;
  out.max_value_ = max_value;
  auto& lower = out.impl_->lower;
  lower.assign(L.size(), Real());
  Real overflow;
  int tail_min = max_value + 1;
  Real prod;
  for (int a : support) {
    for (int b : support) {
      mpfr_mul(prod.p(), L[static_cast<std::size_t>(a + 1)].p(), L[static_cast<std::size_t>(b + 1)].p(),
               MPFR_RNDD);
      const int c = g(a, b);
      if (c <= max_value) {
        Real& slot = lower[static_cast<std::size_t>(c + 1)];
        mpfr_add(slot.p(), slot.p(), prod.p(), MPFR_RNDD);
      } else {
        mpfr_add(overflow.p(), overflow.p(), prod.p(), MPFR_RNDD);
      }
    }
  }

  // A tail value t >= tail_min >= 1 is never -1, so g(t, b) = t + b.
  const Real& tau = pmf.impl_->tail;
  if (tau.positive() && pmf.tail_min_ >= 1) {
    const Real located = sum(L, MPFR_RNDD);
    Real w;  // tau (2 located + tau)
    mpfr_mul_2ui(w.p(), located.p(), 1, MPFR_RNDD);
    mpfr_add(w.p(), w.p(), tau.p(), MPFR_RNDD);
    mpfr_mul(w.p(), w.p(), tau.p(), MPFR_RNDD);
    mpfr_add(overflow.p(), overflow.p(), w.p(), MPFR_RNDD);
    const int lowest = support.empty() ? pmf.tail_min_ : support.front();
    tail_min = std::min({tail_min, pmf.tail_min_ + lowest, 2 * pmf.tail_min_});
  }
  if (tail_min < 1) {
    // Could reach -1, where g is not additive: give up its location.
    out.tail_min_ = max_value + 1;
  } else {
    out.tail_min_ = tail_min;
    out.impl_->tail = overflow;
  }
  Real located = sum(lower, MPFR_RNDD);
  mpfr_add(located.p(), located.p(), out.impl_->tail.p(), MPFR_RNDD);
  out.impl_->slack = remainder_up(located);
  return out;
}

LevelStats stats(const ExcessPmf& pmf) {
  const auto& L = pmf.impl_->lower;
  Real even_d, even_u, odd_pos_d, odd_pos_u, even_pos_d, even_pos_u, mean;
  Real term;
  for (int v = -1; v <= pmf.max_value_; ++v) {
    const Real& m = L[static_cast<std::size_t>(v + 1)];
    if (!m.positive()) continue;
    if (v % 2 == 0) {
      mpfr_add(even_d.p(), even_d.p(), m.p(), MPFR_RNDD);
      mpfr_add(even_u.p(), even_u.p(), m.p(), MPFR_RNDU);
      if (v > 0) {
        mpfr_add(even_pos_d.p(), even_pos_d.p(), m.p(), MPFR_RNDD);
        mpfr_add(even_pos_u.p(), even_pos_u.p(), m.p(), MPFR_RNDU);
      }
    } else if (v > 0) {
      mpfr_add(odd_pos_d.p(), odd_pos_d.p(), m.p(), MPFR_RNDD);
      mpfr_add(odd_pos_u.p(), odd_pos_u.p(), m.p(), MPFR_RNDU);
    }
    mpfr_mul_si(term.p(), m.p(), v, MPFR_RNDD);
    mpfr_add(mean.p(), mean.p(), term.p(), MPFR_RNDD);
  }
  // Tail and unlocated mass may sit at either parity: they widen every
  // upper bound. For the mean, the tail counts at tail_min and the
  // unlocated mass at -1.
  Real spread(pmf.impl_->tail);
  mpfr_add(spread.p(), spread.p(), pmf.impl_->slack.p(), MPFR_RNDU);
  auto widen = [&](Real& hi) { mpfr_add(hi.p(), hi.p(), spread.p(), MPFR_RNDU); };
  widen(even_u);
  widen(odd_pos_u);
  widen(even_pos_u);
  mpfr_mul_si(term.p(), pmf.impl_->tail.p(), pmf.tail_min_, MPFR_RNDD);
  mpfr_add(mean.p(), mean.p(), term.p(), MPFR_RNDD);
  mpfr_sub(mean.p(), mean.p(), pmf.impl_->slack.p(), MPFR_RNDD);

  LevelStats s;
  s.k = pmf.level_;
  s.beta = {clamp01(even_d.down()), clamp01(even_u.up())};
  s.gamma = {clamp01(odd_pos_d.down()), clamp01(odd_pos_u.up())};
  s.delta = {clamp01(even_pos_d.down()), clamp01(even_pos_u.up())};
  s.mean_lower = mean.down();
  return s;
}

ProbInterval parity_map(ProbInterval beta) {
  // f(b) = 1 - 2 b (1 - b): convex, minimum 1/2 at b = 1/2.
  auto f = [](double b, mpfr_rnd_t rnd) {
    const mpfr_rnd_t inner = rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD;
    Real x(b), y(1.0);
    mpfr_sub(y.p(), y.p(), x.p(), MPFR_RNDN);  // exact
    mpfr_mul(x.p(), x.p(), y.p(), inner);
    mpfr_mul_2ui(x.p(), x.p(), 1, inner);
    mpfr_ui_sub(x.p(), 1, x.p(), rnd);
    return rnd == MPFR_RNDD ? x.down() : x.up();
  };
  const double lo = std::clamp(beta.lo, 0.0, 1.0), hi = std::clamp(beta.hi, 0.0, 1.0);
  ProbInterval out;
  if (lo <= 0.5 && 0.5 <= hi) out.lo = 0.5;
  else out.lo = f(hi < 0.5 ? hi : lo, MPFR_RNDD);
  out.hi = std::max(f(lo, MPFR_RNDU), f(hi, MPFR_RNDU));
  return {clamp01(out.lo), clamp01(out.hi)};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::fail: return "fail";
  }
  return "?";
}

namespace {
Verdict at_least(ProbInterval x, double lo_threshold_hi, double hi_threshold_lo) {
  if (x.lo >= lo_threshold_hi) return Verdict::pass;
  if (x.hi < hi_threshold_lo) return Verdict::fail;
  return Verdict::inconclusive;
}
Verdict worse(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

double square(double x, mpfr_rnd_t rnd) {
  Real r(x);
  mpfr_sqr(r.p(), r.p(), rnd);
  return rnd == MPFR_RNDD ? r.down() : r.up();
}
}  // namespace

Verdict RecursionReport::overall() const {
  Verdict v = k0_order;
  for (const LevelCheck& c : levels) {
    v = worse(v, c.beta_half);
    v = worse(v, c.gamma_monotone);
    v = worse(v, c.delta_square);
    v = worse(v, c.mean_sixth);
  }
  return v;
}

std::vector<ExcessPmf> recursion_chain(double lambda, double eps, int depth, int top, int max_value,
                                       double slack_budget) {
  if (top < -depth) throw std::invalid_argument("top level below the base level");
  std::vector<ExcessPmf> chain;
  chain.reserve(static_cast<std::size_t>(top + depth + 1));
  chain.push_back(base_pmf(lambda, eps, depth, slack_budget, max_value));
  while (chain.back().level() < top) chain.push_back(level_up(chain.back()));
  return chain;
}

RecursionReport certify_recursion(double lambda, double eps, int depth, int top, int max_value,
                                  double slack_budget) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  const auto chain = recursion_chain(lambda, eps, depth, top, max_value, slack_budget);
  RecursionReport report;
  report.lambda = lambda;
  report.eps = eps;
  report.base_depth = depth;
  report.k0_reference = 3.0 * std::exp(1.0) / eps;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    LevelCheck c;
    c.stats = stats(chain[i]);
    c.k = c.stats.k;
    if (i > 0) {
      // beta_k = f(beta_{k-1}) holds exactly, since g preserves the parity of a + b.
      const LevelStats& prev = report.levels.back().stats;
      const ProbInterval mapped = parity_map(prev.beta);
      c.stats.beta = {std::max(c.stats.beta.lo, mapped.lo), std::min(c.stats.beta.hi, mapped.hi)};
      if (c.stats.beta.lo > c.stats.beta.hi)
        throw std::logic_error("parity identity contradicts the certified law");
      c.gamma_monotone = at_least(c.stats.gamma, prev.gamma.hi, prev.gamma.lo);
      c.delta_square = at_least(c.stats.delta, square(prev.gamma.hi, MPFR_RNDU),
                                square(prev.gamma.lo, MPFR_RNDD));
    }
    c.beta_half = at_least(c.stats.beta, 0.5, 0.5);
    if (c.stats.gamma.lo >= 1.0 / 3.0) {
      if (!report.first_gamma_third) report.first_gamma_third = c.k;
      c.mean_sixth = c.stats.mean_lower >= 1.0 / 6.0 ? Verdict::pass : Verdict::inconclusive;
    }
    report.levels.push_back(c);
  }
  if (report.first_gamma_third)
    report.k0_order = *report.first_gamma_third <= 2.0 * report.k0_reference ? Verdict::pass
                                                                             : Verdict::fail;
  return report;
}

int excess_by_recursion(const std::vector<double>& coords, const std::vector<int>& colors, double lo,
                        double len) {
  if (coords.size() != colors.size()) throw std::invalid_argument("coords/colors size mismatch");
  if (coords.empty()) return 0;
  if (coords.size() == 1) return colors[0] == kBlue ? 1 : -1;
  const double mid = lo + len / 2;
  if (!(mid > lo)) throw std::invalid_argument("coincident points cannot be separated");
  std::vector<double> lc, rc;
  std::vector<int> lk, rk;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < mid) {
      lc.push_back(coords[i]);
      lk.push_back(colors[i]);
    } else {
      rc.push_back(coords[i]);
      rk.push_back(colors[i]);
    }
  }
  return g(excess_by_recursion(lc, lk, lo, len / 2), excess_by_recursion(rc, rk, mid, len / 2));
}

SegmentSample mc_segment_from(PointConfig config, int K) {
  if (K < 0 || K > 30) throw std::invalid_argument("K must lie in [0, 30]");
  if (config.dimension != 1) throw std::invalid_argument("segment points are one-dimensional");
  const double side = std::ldexp(1.0, K);
  for (double x : config.coords)
    if (!(x >= 0.0 && x < side)) throw std::invalid_argument("point outside [0, 2^K)");
  for (int c : config.colors)
    if (c != kRed && c != kBlue) throw std::invalid_argument("segment colors are red/blue");

  SegmentSample s;
  s.K = K;
  const std::size_t n = config.size();
  const std::size_t cells0 = std::size_t{1} << K;

  // (a) recursion: unit cells by halving, then g upward.
  std::vector<std::vector<double>> cell_coords(cells0);
  std::vector<std::vector<int>> cell_colors(cells0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = static_cast<std::size_t>(std::floor(config.coords[i]));
    cell_coords[m].push_back(config.coords[i]);
    cell_colors[m].push_back(config.colors[i]);
  }
  s.table.assign(static_cast<std::size_t>(K) + 1, {});
  s.table[0].resize(cells0);
  for (std::size_t m = 0; m < cells0; ++m)
    s.table[0][m] = excess_by_recursion(cell_coords[m], cell_colors[m], static_cast<double>(m), 1.0);
  for (int k = 1; k <= K; ++k) {
    const auto& below = s.table[static_cast<std::size_t>(k - 1)];
    auto& row = s.table[static_cast<std::size_t>(k)];
    row.resize(below.size() / 2);
    for (std::size_t m = 0; m < row.size(); ++m) {
      row[m] = g(below[2 * m], below[2 * m + 1]);
      if (row[m] < below[2 * m] + below[2 * m + 1])
        throw std::logic_error("superadditivity violated");
    }
  }

  // (b) from the stable matching: points whose partner lies outside the cell.
  if (n > 0) {
    const PointInstance instance =
        build_instance(config, ColorRule::asymmetric_two_type(), MetricKind::hierarchical_rho_tilde,
                       /*check_ties=*/false);
    s.matching = stable_match(instance);
  }
  std::vector<std::vector<int>> from_matching(s.table.size());
  for (int k = 0; k <= K; ++k) from_matching[static_cast<std::size_t>(k)].assign(cells0 >> k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cell = static_cast<std::size_t>(std::floor(config.coords[i]));
    int joined = K + 1;  // first level whose cell holds the partner
    if (s.matching.is_matched(i)) {
      const auto other = static_cast<std::size_t>(std::floor(config.coords[s.matching.partner[i]]));
      joined = 0;
      while ((cell >> joined) != (other >> joined)) ++joined;
    } else if (config.colors[i] == kBlue) {
      ++s.unmatched_blue;
    }
    const int sign = config.colors[i] == kBlue ? 1 : -1;
    for (int k = 0; k < std::min(joined, K + 1); ++k)
      from_matching[static_cast<std::size_t>(k)][cell >> k] += sign;
  }
  if (from_matching != s.table) throw std::logic_error("recursion and stable matching disagree on N_k");
  const int top = s.table[static_cast<std::size_t>(K)][0];
  if (s.unmatched_blue != static_cast<std::size_t>(std::max(top, 0)))
    throw std::logic_error("unmatched blue count differs from max(N_K(0), 0)");
  s.config = std::move(config);
  return s;
}

SegmentSample mc_segment(double lambda, double eps, int K, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0, 1]");
  if (K < 0 || K > 30) throw std::invalid_argument("K must lie in [0, 30]");
  const double probs[] = {1.0 - eps, eps};
  return mc_segment_from(sample_config(lambda, 1, std::ldexp(1.0, K), probs, seed, Domain::segment), K);
}

std::uint64_t SegmentTally::cells(int k) const {
  return static_cast<std::uint64_t>(replicates) << (K - k);
}

SegmentTally mc_segment_tally(double lambda, double eps, int K, std::size_t replicates,
                              std::uint64_t seed, unsigned workers) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  struct Partial {
    std::vector<std::vector<std::uint64_t>> counts;
    std::uint64_t unmatched = 0, points = 0;
  };
  auto parts = parallel_replicates<Partial>(
      replicates, workers == 0 ? default_workers() : workers, [&](Partial& acc, std::size_t r) {
        const SegmentSample s = mc_segment(lambda, eps, K, derive_seed(seed, r));
        if (acc.counts.empty()) acc.counts.resize(static_cast<std::size_t>(K) + 1);
        for (std::size_t k = 0; k < s.table.size(); ++k) {
          for (int v : s.table[k]) {
            auto& row = acc.counts[k];
            const auto idx = static_cast<std::size_t>(v + 1);
            if (row.size() <= idx) row.resize(idx + 1, 0);
            ++row[idx];
          }
        }
        acc.unmatched += s.unmatched_blue;
        acc.points += s.config.size();
      });
  SegmentTally out;
  out.K = K;
  out.replicates = replicates;
  out.counts.resize(static_cast<std::size_t>(K) + 1);
  for (const Partial& p : parts) {
    out.unmatched_blue += p.unmatched;
    out.points += p.points;
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
      auto& row = out.counts[k];
      if (row.size() < p.counts[k].size()) row.resize(p.counts[k].size(), 0);
      for (std::size_t i = 0; i < p.counts[k].size(); ++i) row[i] += p.counts[k][i];
    }
  }
  out.top_counts = out.counts[static_cast<std::size_t>(K)];
  return out;
}

}  // namespace smatch
