// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smatch/odes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "smatch/point_models.hpp"
#include "smatch/types.hpp"

namespace smatch {

OdeSystem OdeSystem::one_type() { return OdeSystem(OdeKind::one_type, {1.0}); }

OdeSystem OdeSystem::asymmetric(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  return OdeSystem(OdeKind::asymmetric, {1.0 - eps, eps});
}

OdeSystem OdeSystem::symmetric(std::vector<double> probs) {
  if (probs.size() < 2) throw std::invalid_argument("symmetric system needs k >= 2");
  check_probabilities(probs);
  for (double p : probs) {
    if (!(p > 0.0)) throw std::invalid_argument("symmetric system needs positive probabilities");
  }
  return OdeSystem(OdeKind::symmetric, std::move(probs));
}

void OdeSystem::derivative(std::span<const double> x, std::span<double> dx) const {
  switch (kind_) {
    case OdeKind::one_type:
      dx[0] = -x[0] * x[0];
      return;
    case OdeKind::asymmetric:
      dx[0] = -x[0] * (x[0] + x[1]);
      dx[1] = -x[1] * x[0];
      return;
    case OdeKind::symmetric: {
      const double total = std::accumulate(x.begin(), x.end(), 0.0);
      for (std::size_t i = 0; i < x.size(); ++i) dx[i] = -x[i] * (total - x[i]);
      return;
    }
  }
}

namespace {

// Dormand-Prince 5(4) tableau. The systems are autonomous, so the nodes
// c_i are not needed.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeTrajectory integrate(const OdeSystem& system, double t_max, const IntegrateOptions& options) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto& outs = options.output_times;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    if (!(outs[i] > 0.0 && outs[i] <= t_max) || (i > 0 && !(outs[i] > outs[i - 1])))
      throw std::invalid_argument("output times must increase within (0, t_max]");
  }

  const std::size_t n = system.dimension();
  const double tol = options.tolerance;
  OdeTrajectory traj;
  traj.kind = system.kind();
  std::vector<double> y = system.initial_state();
  traj.times.push_back(0.0);
  traj.states.push_back(y);

  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.resize(n);
  std::vector<double> tmp(n), y5(n);

  double t = 0.0;
  double h = std::min(options.initial_step, t_max);
  std::size_t next_out = 0;
  system.derivative(y, k[0]);

  while (t < t_max) {
    double target = t_max;
    if (!outs.empty() && next_out < outs.size()) target = outs[next_out];
    if (options.max_step > 0.0) h = std::min(h, options.max_step);
    // h is the proposed step; the attempted one may be cut to land on target.
    const double proposed = h;
    bool lands = false;
    if (t + h >= target) {
      h = target - t;
      lands = true;
    }

    auto stage = [&](std::vector<double>& out, std::initializer_list<std::pair<double, int>> terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        for (auto [a, s] : terms) acc += h * a * k[static_cast<std::size_t>(s)][i];
        tmp[i] = acc;
      }
      system.derivative(tmp, out);
    };
    stage(k[1], {{a21, 0}});
    stage(k[2], {{a31, 0}, {a32, 1}});
    stage(k[3], {{a41, 0}, {a42, 1}, {a43, 2}});
    stage(k[4], {{a51, 0}, {a52, 1}, {a53, 2}, {a54, 3}});
    stage(k[5], {{a61, 0}, {a62, 1}, {a63, 2}, {a64, 3}, {a65, 4}});
    bool positive = true;
    for (std::size_t i = 0; i < n; ++i) {
      y5[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
      positive = positive && y5[i] > 0.0;
    }
    double err = 0.0;
    if (positive) {
      system.derivative(y5, k[6]);
      for (std::size_t i = 0; i < n; ++i) {
        const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                              e6 * k[5][i] + e7 * k[6][i]);
        const double scale = tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
        err = std::max(err, std::abs(e) / scale);
      }
    }

    if (!positive || err > 1.0) {
      ++traj.rejected;
      h *= positive ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.5;
      if (h < options.min_step)
        throw SolverError("step size fell below the minimum at t = " + std::to_string(t));
      continue;
    }

    ++traj.steps;
    traj.max_error_estimate = std::max(traj.max_error_estimate, err);
    t = lands ? target : t + h;
    y = y5;
    k[0] = k[6];
    const bool record = outs.empty() ? true : (lands && next_out < outs.size());
    if (record) {
      traj.times.push_back(t);
      traj.states.push_back(y);
      if (!outs.empty()) ++next_out;
    }
    const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
    h = h < proposed ? proposed : h * grow;
  }
  if (traj.times.back() != t_max) {
    traj.times.push_back(t_max);
    traj.states.push_back(y);
  }
  return traj;
}

OdeTrajectory integrate(const OdeSystem& system, double t_max, double tolerance) {
  IntegrateOptions options;
  options.tolerance = tolerance;
  return integrate(system, t_max, options);
}

PlateauEstimate plateau_detect(const OdeTrajectory& trajectory, std::size_t component,
                               double accuracy) {
  if (trajectory.size() == 0) throw std::invalid_argument("empty trajectory");
  const auto& y = trajectory.final_state();
  if (component >= y.size()) throw std::invalid_argument("component out of range");
  PlateauEstimate out;
  out.time = trajectory.final_time();
  out.value = y[component];
  switch (trajectory.kind) {
    case OdeKind::one_type:
      out.bound = y[0];
      break;
    case OdeKind::asymmetric:
      // b(t) - b(inf) <= r(t), and r itself tends to 0.
      out.bound = y[0];
      break;
    case OdeKind::symmetric: {
      double others = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j)
        if (j != component) others += y[j];
      out.bound = others;
      break;
    }
  }
  if (out.bound > accuracy)
    throw InsufficientHorizon("certified plateau bound " + std::to_string(out.bound) +
                                  " exceeds requested accuracy at t = " + std::to_string(out.time),
                              out.bound);
  return out;
}

double closed_form_one_type(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  return 1.0 / (1.0 + t);
}

double closed_form_b_infinity(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
  return eps * std::exp(1.0 - 1.0 / eps);
}

namespace {
void check_two_value(double p1, double p2, int k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (!(p2 > 0.0) || !(p1 > p2)) throw std::invalid_argument("need p1 > p2 > 0");
  if (std::abs(p1 + (k - 1) * p2 - 1.0) > 1e-9)
    throw std::invalid_argument("p1 + (k-1) p2 must equal 1");
}
}  // namespace

double closed_form_x1_infinity(double p1, double p2, int k) {
  check_two_value(p1, p2, k);
  return std::pow(p1 - p2, k - 1) * std::pow(p1, -(k - 2));
}

double two_value_x2(double x1, double p1, double p2, int k) {
  check_two_value(p1, p2, k);
  const double e = static_cast<double>(k - 2) / static_cast<double>(k - 1);
  const double c = (p1 - p2) * std::pow(p1, -e);
  return x1 - c * std::pow(x1, e);
}

SmallGap small_gap_asymptotic(int k, double delta) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (!(delta > 0.0) || !(delta < 1.0 / k)) throw std::invalid_argument("delta must lie in (0, 1/k)");
  const double kk = k;
  return {std::pow(kk * kk * delta / (1.0 + kk * (kk - 1.0) * delta), k - 1),
          std::pow(kk, 2 * (k - 1)) * std::pow(delta, k - 1)};
}

}  // namespace smatch
