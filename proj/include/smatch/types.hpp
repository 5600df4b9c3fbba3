// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace smatch {

/// Weight of an absent edge. Ordered above every finite weight.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline constexpr std::size_t kNoVertex = std::numeric_limits<std::size_t>::max();

inline bool is_finite_weight(double w) { return w < kInfinity; }

/// Two edges at one vertex carry the same finite weight, so the stable
/// matching is not unique.
class TieError : public std::invalid_argument {
 public:
  TieError(std::size_t vertex, std::size_t a, std::size_t b, double weight)
      : std::invalid_argument("equal weights " + std::to_string(weight) + " at vertex " +
                              std::to_string(vertex) + " (to " + std::to_string(a) + " and " +
                              std::to_string(b) + ")"),
        vertex_(vertex),
        a_(a),
        b_(b),
        weight_(weight) {}

  std::size_t vertex() const { return vertex_; }
  std::size_t first() const { return a_; }
  std::size_t second() const { return b_; }
  double weight() const { return weight_; }

 private:
  std::size_t vertex_, a_, b_;
  double weight_;
};

/// A lazily explored structure grew past its configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// ODE integration could not proceed (positivity lost at minimum step).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// A certified plateau bound is wider than the requested accuracy.
class InsufficientHorizon : public std::runtime_error {
 public:
  InsufficientHorizon(const std::string& what, double bound)
      : std::runtime_error(what), bound_(bound) {}
  double bound() const { return bound_; }

 private:
  double bound_;
};

}  // namespace smatch
