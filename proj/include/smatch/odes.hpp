// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Root-availability ODEs of the PWIT models and their closed forms.
//
//   one-type:    x' = -x^2,                      x(0) = 1
//   asymmetric:  r' = -r (r + b), b' = -b r,     r(0) = 1 - eps, b(0) = eps
//   symmetric:   x_i' = -x_i sum_{j != i} x_j,   x_i(0) = p_i
//
// Every right-hand side is nonpositive, so trajectories are componentwise
// non-increasing and stay in (0, initial value].

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smatch {

enum class OdeKind { one_type, asymmetric, symmetric };

class OdeSystem {
 public:
  static OdeSystem one_type();
  static OdeSystem asymmetric(double eps);
  static OdeSystem symmetric(std::vector<double> probs);

  OdeKind kind() const { return kind_; }
  std::size_t dimension() const { return initial_.size(); }
  const std::vector<double>& initial_state() const { return initial_; }
  void derivative(std::span<const double> x, std::span<double> dx) const;

 private:
  OdeSystem(OdeKind kind, std::vector<double> initial) : kind_(kind), initial_(std::move(initial)) {}
  OdeKind kind_;
  std::vector<double> initial_;
};

struct IntegrateOptions {
  double tolerance = 1e-9;
  /// When nonempty (increasing, within (0, t_max]), states are recorded
  /// exactly at these times; otherwise at every accepted step.
  std::vector<double> output_times;
  double max_step = 0.0;  ///< 0: unlimited
  double initial_step = 1e-4;
  double min_step = 1e-14;
};

struct OdeTrajectory {
  OdeKind kind = OdeKind::one_type;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_error_estimate = 0.0;  ///< largest accepted scaled local error

  std::size_t size() const { return times.size(); }
  double final_time() const { return times.back(); }
  const std::vector<double>& final_state() const { return states.back(); }
};

/// Adaptive Dormand-Prince 5(4) integration from t = 0 to t_max with mixed
/// absolute/relative local error control at `tolerance`. A step that would
/// make any component nonpositive is rejected and retried smaller; throws
/// SolverError if that drives the step below min_step.
OdeTrajectory integrate(const OdeSystem& system, double t_max, const IntegrateOptions& options);
OdeTrajectory integrate(const OdeSystem& system, double t_max, double tolerance);

/// Limit of one component with a certified error bound: the limit lies in
/// [value - bound, value].
struct PlateauEstimate {
  double value = 0.0;
  double bound = 0.0;
  double time = 0.0;
  double lower() const { return value - bound < 0.0 ? 0.0 : value - bound; }
};

/// The terminal value of `component` together with the bound supplied by
/// the sum of the other components (r for b in the asymmetric system,
/// sum_{j != i} x_j for x_i in the symmetric one, x itself in the
/// one-type system). Throws InsufficientHorizon if the bound exceeds
/// `accuracy`.
PlateauEstimate plateau_detect(const OdeTrajectory& trajectory, std::size_t component,
                               double accuracy);

double closed_form_one_type(double t);

/// eps * e^{1 - 1/eps}: limiting P(root blue and unmatched).
double closed_form_b_infinity(double eps);

/// (p1 - p2)^{k-1} p1^{-(k-2)} for p1 > p2 = ... = p_k.
double closed_form_x1_infinity(double p1, double p2, int k);

/// x2 = x1 - c x1^{(k-2)/(k-1)}, c = (p1 - p2) p1^{-(k-2)/(k-1)}.
double two_value_x2(double x1, double p1, double p2, int k);

struct SmallGap {
  double exact;       ///< (k^2 d / (1 + k (k-1) d))^{k-1}
  double asymptotic;  ///< k^{2(k-1)} d^{k-1}
};

/// Ratio x1(inf)/x1(0) for p1 = 1/k + (k-1) d, p2 = ... = 1/k - d.
SmallGap small_gap_asymptotic(int k, double delta);

}  // namespace smatch
