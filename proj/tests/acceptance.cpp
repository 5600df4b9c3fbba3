// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. One line per criterion, "PASS" or "FAIL", then a short
// account of what was measured. Exit status 0 iff every criterion passes.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "smatch/experiments.hpp"
#include "smatch/hierarchical.hpp"
#include "smatch/matching.hpp"
#include "smatch/odes.hpp"
#include "smatch/pwit.hpp"
#include "smatch/rng.hpp"

using namespace smatch;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// 1. x' = -x^2 against 1/(1+t) on [0, 10].
Outcome one_type_closed_form() {
  Timer timer;
  IntegrateOptions opt;
  opt.tolerance = 1e-10;
  for (int i = 1; i <= 1000; ++i) opt.output_times.push_back(0.01 * i);
  const OdeTrajectory tr = integrate(OdeSystem::one_type(), 10.0, opt);
  double err = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i)
    err = std::max(err, std::abs(tr.states[i][0] - closed_form_one_type(tr.times[i])));
  const double secs = timer.seconds();
  return {err < 1e-6 && secs < 1.0, fmt("sup error %.3g on 1001 grid points, %.3f s", err, secs)};
}

PlateauEstimate plateau_with_horizon(const OdeSystem& sys, std::size_t component, double accuracy) {
  for (double horizon = 100.0;; horizon *= 10.0) {
    try {
      return plateau_detect(integrate(sys, horizon, 1e-11), component, accuracy);
    } catch (const InsufficientHorizon&) {
      if (horizon > 1e9) throw;
    }
  }
}

// 2. Asymmetric plateau b(inf) against eps e^{1 - 1/eps}.
Outcome asymmetric_plateau() {
  Timer timer;
  bool ok = true;
  std::ostringstream d;
  for (double eps : {0.25, 0.1, 0.2, 0.4, 0.5}) {
    const PlateauEstimate pe = plateau_with_horizon(OdeSystem::asymmetric(eps), 1, 1e-5);
    const double ref = closed_form_b_infinity(eps);
    const double dev = std::abs(pe.value - ref);
    ok = ok && dev <= 1e-4;
    d << fmt("eps=%g: %.6f vs %.6f (|diff| %.1e); ", eps, pe.value, ref, dev);
  }
  const double secs = timer.seconds();
  ok = ok && secs < 5.0;
  d << fmt("%.2f s", secs);
  return {ok, d.str()};
}

// 3. Symmetric plateau and the exact two-value relation along the path.
Outcome symmetric_closed_form() {
  bool ok = true;
  std::ostringstream d;
  struct Case {
    int k;
    double p1, p2;
  };
  for (const Case c : {Case{2, 0.75, 0.25}, Case{3, 0.5, 0.25}, Case{4, 0.4, 0.2}}) {
    std::vector<double> p(static_cast<std::size_t>(c.k), c.p2);
    p[0] = c.p1;
    const OdeSystem sys = OdeSystem::symmetric(p);
    const PlateauEstimate pe = plateau_with_horizon(sys, 0, 1e-3);
    const double ref = closed_form_x1_infinity(c.p1, c.p2, c.k);
    const bool plateau_ok = std::abs(pe.value - ref) <= pe.bound + 1e-4;
    const OdeTrajectory tr = integrate(sys, pe.time, 1e-11);
    double rel = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i)
      for (std::size_t j = 1; j < p.size(); ++j)
        rel = std::max(rel, std::abs(tr.states[i][j] - two_value_x2(tr.states[i][0], c.p1, c.p2, c.k)));
    ok = ok && plateau_ok && rel <= 1e-6;
    d << fmt("k=%d: %.6f vs %.6f (bound %.1e), relation error %.1e; ", c.k, pe.value, ref, pe.bound, rel);
  }
  return {ok, d.str()};
}

// 4. PWIT root estimates at T = 5 against the integrated two-type system.
Outcome pwit_vs_ode() {
  Timer timer;
  const std::vector<double> times{5.0};
  const RootEstimates e =
      estimate_root_probabilities(PwitModelSpec::asymmetric(0.25), 5.0, times, 100000, derive_seed(kSeed, 4));
  IntegrateOptions opt;
  opt.tolerance = 1e-12;
  const auto ode = integrate(OdeSystem::asymmetric(0.25), 5.0, opt).final_state();
  bool ok = e.censored_fraction() < 1e-3;
  std::ostringstream d;
  const char* names[] = {"r", "b"};
  for (std::size_t c = 0; c < 2; ++c) {
    const double z = std::abs(e.estimate(0, c) - ode[c]) / e.standard_error(0, c);
    ok = ok && z <= 3.0;
    d << fmt("%s(5): %.5f vs %.5f (%.2f SE); ", names[c], e.estimate(0, c), ode[c], z);
  }
  d << fmt("censored %.1e, %.1f s", e.censored_fraction(), timer.seconds());
  return {ok, d.str()};
}

// 5. Descending tree size: mean e^T and tail P(|V| > e^{2T}) <= e^{-T}.
Outcome pwit_size_law() {
  bool ok = true;
  std::ostringstream d;
  std::uint64_t idx = 0;
  for (double T : {0.5, 1.0, 2.0, 4.0}) {
    const std::size_t n = 10000;
    const auto sizes = sample_tree_sizes(T, n, derive_seed(derive_seed(kSeed, 5), idx++));
    double s = 0.0, s2 = 0.0;
    std::size_t over = 0;
    const double big = std::exp(2.0 * T);
    for (std::size_t v : sizes) {
      const double x = static_cast<double>(v);
      s += x;
      s2 += x * x;
      over += x > big;
    }
    const double nn = static_cast<double>(n);
    const double mean = s / nn;
    const double se = std::sqrt((s2 / nn - mean * mean) / (nn - 1.0));
    const double target = std::exp(T);
    const double freq = static_cast<double>(over) / nn;
    const double bound = std::exp(-T);
    const double tail_se = std::sqrt(bound * (1.0 - bound) / nn);
    const bool mean_ok = std::abs(mean - target) <= 3.0 * se;
    const bool tail_ok = freq <= bound + 3.0 * tail_se;
    ok = ok && mean_ok && tail_ok;
    d << fmt("T=%g: mean %.3f vs %.3f (%.2f SE), tail %.4f <= %.4f; ", T, mean, target,
             std::abs(mean - target) / se, freq, bound);
  }
  return {ok, d.str()};
}

// 6. Engine against exhaustive enumeration; matched_within against the
// full matching.
Outcome engine_oracle() {
  std::size_t instances = 0, mismatches = 0, queries = 0, query_mismatches = 0;
  const auto cases = oracle::rule_cases();
  const std::uint64_t base = derive_seed(kSeed, 6);
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto& rc = cases[i % cases.size()];
    SplitMix64 rng(derive_seed(base, i));
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 10.0);
    const auto inst = oracle::random_instance(n, rc.rule, rc.probs, rng());
    const Matching m = stable_match(inst);
    const auto all = oracle::stable_matchings(inst);
    ++instances;
    if (all.size() != 1 || all[0] != m.partner) ++mismatches;
    for (int q = 0; q < 10; ++q) {
      const std::size_t x = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
      const double R = 1.2 * rng.uniform();
      ++queries;
      if (matched_within(descending_closure(inst, x, R)) != (m.match_weight[x] < R)) ++query_mismatches;
    }
  }
  return {mismatches == 0 && query_mismatches == 0,
          fmt("%zu instances (n <= 10, three color rules): %zu differ from enumeration; %zu of %zu "
              "matched_within queries disagree",
              instances, mismatches, query_mismatches, queries)};
}

// 7. Certified recursion, Monte Carlo agreement and positive density.
Outcome hierarchical() {
  Timer timer;
  const double lambda = 1.0, eps = 0.3;
  const int depth = 40, top = 10, K = 10, max_value = kCertifyMaxValue;
  const RecursionReport rep = certify_recursion(lambda, eps, depth, top, max_value);
  std::size_t undecided = 0;
  for (const auto& c : rep.levels)
    for (Verdict v : {c.beta_half, c.gamma_monotone, c.delta_square, c.mean_sixth}) undecided += v != Verdict::pass;
  const bool certified = rep.overall() == Verdict::pass && rep.first_gamma_third.has_value();

  const auto chain = recursion_chain(lambda, eps, depth, top, max_value);
  const std::size_t reps = 10000;
  SegmentTally tally;
  tally.K = K;
  tally.replicates = reps;
  tally.counts.resize(K + 1);
  std::size_t consistency_failures = 0;
  double s = 0.0, s2 = 0.0;
  const std::uint64_t base = derive_seed(kSeed, 7);
  for (std::size_t r = 0; r < reps; ++r) {
    try {
      const SegmentSample seg = mc_segment(lambda, eps, K, derive_seed(base, r));
      for (int k = 0; k <= K; ++k) {
        auto& row = tally.counts[static_cast<std::size_t>(k)];
        for (int v : seg.table[static_cast<std::size_t>(k)]) {
          if (static_cast<std::size_t>(v + 1) >= row.size()) row.resize(static_cast<std::size_t>(v + 2), 0);
          ++row[static_cast<std::size_t>(v + 1)];
        }
      }
      tally.unmatched_blue += seg.unmatched_blue;
      tally.points += seg.config.size();
      const double x = static_cast<double>(seg.unmatched_blue);
      s += x;
      s2 += x * x;
    } catch (const std::logic_error&) {
      ++consistency_failures;
    }
  }
  tally.top_counts = tally.counts[K];
  const TallyAgreement ag = tally_agreement(tally, chain.back());
  const double n = static_cast<double>(reps), len = std::ldexp(1.0, K);
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / (n - 1.0));
  const double density = mean / len, density_se = se / len;

  const bool ok = certified && consistency_failures == 0 && ag.misses == 0 && density > 3.0 * density_se;
  std::ostringstream d;
  d << fmt("levels %d..%d certified (%zu undecided checks), first gamma >= 1/3 at k=%d (3e/eps = %.1f); ", -depth, top,
           undecided, rep.first_gamma_third.value_or(-999), rep.k0_reference);
  d << fmt("level-%d pmf: %zu of %zu support points outside the 3-SE band, exact binomial tail for sparse values (largest normal distance %.2f SE); ", K, ag.misses, ag.points, ag.worst_z);
  d << fmt("recursion/matching mismatches %zu of %zu; unmatched blue density %.5f (SE %.1e); %.1f s",
           consistency_failures, reps, density, density_se, timer.seconds());
  return {ok, d.str()};
}

// 8. Lens volume at separation R/2 against (15/16)^{d/2} omega_d R^d.
Outcome lens_volume() {
  bool ok = true;
  std::ostringstream d;
  for (int dim : {5, 10, 20}) {
    const auto [q, se] = lens_fraction(dim, 0.5, 200000, derive_seed(derive_seed(kSeed, 8), dim));
    const double bound = std::pow(15.0 / 16.0, dim / 2.0);
    ok = ok && q <= bound + 3.0 * se;
    d << fmt("d=%d: %.5f (SE %.1e) vs bound %.5f; ", dim, q, se, bound);
  }
  return {ok, d.str()};
}

// 9. Substitute for the large-d statements: the limit formulas through the
// tree and the ODE (criteria 2-4), plus low-d torus runs whose matchings
// must all be stable.
Outcome substituted(bool c2, bool c3, bool c4) {
  std::size_t runs = 0, matchings = 0, unstable = 0;
  std::uint64_t idx = 0;
  struct Run {
    RuleKind rule;
    std::vector<double> probs;
    int d;
    double side;
  };
  for (const Run& r : {Run{RuleKind::asymmetric_two_type, {0.75, 0.25}, 1, 2000.0},
                       Run{RuleKind::asymmetric_two_type, {0.75, 0.25}, 2, 40.0},
                       Run{RuleKind::asymmetric_two_type, {2.0 / 3.0, 1.0 / 3.0}, 3, 12.0},
                       Run{RuleKind::symmetric_k_type, {0.5, 0.25, 0.25}, 2, 40.0},
                       Run{RuleKind::one_type, {1.0}, 2, 40.0}}) {
    TorusExperimentConfig c;
    c.rule = r.rule;
    c.probs = r.probs;
    c.dimension = r.d;
    c.side = r.side;
    c.replicates = 10;
    c.seed = derive_seed(derive_seed(kSeed, 9), idx++);
    const auto res = run_torus_experiment(c);
    ++runs;
    matchings += c.replicates;
    for (const auto& rec : res.records)
      if (rec.check == "verify_stable") unstable += static_cast<std::size_t>(rec.estimate);
  }
  const bool ok = c2 && c3 && c4 && unstable == 0;
  return {ok, fmt("limit formulas via tree/ODE: %s; %zu low-d torus runs, %zu matchings, %zu unstable; "
                  "the d -> infinity Euclidean limit itself is not reproduced at desk scale",
                  (c2 && c3 && c4) ? "criteria 2-4 pass" : "criteria 2-4 NOT all passing", runs, matchings, unstable)};
}

// 10. The verification suite twice with one seed: byte-identical files.
Outcome determinism() {
  Timer timer;
  const SuiteResult a = run_verify_suite(kSeed, SuiteScale::full);
  const SuiteResult b = run_verify_suite(kSeed, SuiteScale::full);
  bool same = a.files.size() == b.files.size();
  std::size_t bytes = 0;
  for (std::size_t i = 0; same && i < a.files.size(); ++i) {
    same = a.files[i].name == b.files[i].name && a.files[i].content == b.files[i].content;
    bytes += a.files[i].content.size();
  }
  return {same, fmt("%zu files, %zu bytes, identical: %s; suite gated checks %s; %.1f s", a.files.size(), bytes,
                    same ? "yes" : "no", a.gated_pass() ? "pass" : "FAIL", timer.seconds())};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto want = [&](int c) { return wanted.empty() || wanted.count(c) > 0; };

  const char* titles[] = {"",
                          "one-type closed form",
                          "asymmetric plateau",
                          "symmetric closed form",
                          "PWIT vs ODE",
                          "PWIT size law",
                          "engine vs brute force",
                          "hierarchical certification",
                          "lens volume bound",
                          "large-d theorems (substituted)",
                          "determinism"};
  bool all = true;
  bool results[11] = {};
  auto report = [&](int c, const Outcome& o) {
    results[c] = o.pass;
    all = all && o.pass;
    std::printf("[%s] criterion %2d  %-31s %s\n", o.pass ? "PASS" : "FAIL", c, titles[c], o.detail.c_str());
    std::fflush(stdout);
  };
  auto run = [&](int c, const std::function<Outcome()>& f) {
    if (!want(c)) return;
    try {
      report(c, f());
    } catch (const std::exception& e) {
      report(c, {false, std::string("exception: ") + e.what()});
    }
  };
  run(1, one_type_closed_form);
  run(2, asymmetric_plateau);
  run(3, symmetric_closed_form);
  run(4, pwit_vs_ode);
  run(5, pwit_size_law);
  run(6, engine_oracle);
  run(7, hierarchical);
  run(8, lens_volume);
  if (want(9)) {
    // Criterion 9 leans on 2-4; evaluate them if they were not requested.
    if (!want(2)) results[2] = asymmetric_plateau().pass;
    if (!want(3)) results[3] = symmetric_closed_form().pass;
    if (!want(4)) results[4] = pwit_vs_ode().pass;
    run(9, [&] { return substituted(results[2], results[3], results[4]); });
  }
  run(10, determinism);
  std::printf("%s\n", all ? "all acceptance criteria pass" : "some acceptance criteria FAIL");
  return all ? 0 : 1;
}
