// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Colored Poisson configurations, color-compatibility rules and the
// weight functions that turn a configuration into a matching instance.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smatch/matching.hpp"
#include "smatch/rng.hpp"

namespace smatch {

enum class Domain { torus, segment };

/// Points in [0, side)^dimension with one color index per point. When
/// palm_origin is set, point 0 is the added point at the origin.
struct PointConfig {
  int dimension = 1;
  Domain domain = Domain::torus;
  double side = 0.0;
  std::vector<double> coords;  ///< row-major, size() * dimension
  std::vector<int> colors;
  bool palm_origin = false;

  std::size_t size() const { return colors.size(); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dimension),
            static_cast<std::size_t>(dimension)};
  }
  void validate() const;
};

enum class RuleKind { one_type, asymmetric_two_type, symmetric_k_type };

/// Which color pairs may be matched. Colors are 0-based; in the
/// asymmetric two-type rule color 0 is red and color 1 is blue.
class ColorRule {
 public:
  static ColorRule one_type();
  static ColorRule asymmetric_two_type();
  static ColorRule symmetric(int k);

  RuleKind kind() const { return kind_; }
  int colors() const { return k_; }
  bool compatible(int a, int b) const { return allowed_[static_cast<std::size_t>(a * k_ + b)] != 0; }

 private:
  ColorRule(RuleKind kind, int k);
  RuleKind kind_;
  int k_;
  std::vector<char> allowed_;
};

inline constexpr int kRed = 0;
inline constexpr int kBlue = 1;

enum class MetricKind { euclidean_torus, hierarchical_rho, hierarchical_rho_tilde };

std::string to_string(RuleKind kind);
std::string to_string(MetricKind kind);
RuleKind parse_rule_kind(const std::string& s);
MetricKind parse_metric_kind(const std::string& s);

/// Throws std::invalid_argument unless probs is a probability vector.
void check_probabilities(std::span<const double> probs);

/// Draws a color index from probs.
int sample_color(SplitMix64& rng, std::span<const double> probs);

/// Poisson(rate * side^d) points, i.i.d. uniform positions and colors.
PointConfig sample_config(double rate, int dimension, double side,
                          std::span<const double> color_probs, std::uint64_t seed,
                          Domain domain = Domain::torus);

/// Prepends a point at the origin with an independently drawn color.
PointConfig palm_version(const PointConfig& config, std::span<const double> color_probs,
                         std::uint64_t seed);

/// Minimum-image Euclidean distance on the flat torus of the given side.
double torus_distance(std::span<const double> a, std::span<const double> b, double side);

/// Dyadic ultrametric 2^{-sup{k : floor(2^k x) = floor(2^k y)}} on the
/// nonnegative reals, evaluated exactly (scaling by 2^k is exact in
/// binary floating point). Zero iff x == y.
double rho(double x, double y);

/// rho(x, y) + |x - y|, which breaks rho's ties while preserving its order.
double rho_tilde(double x, double y);

/// Weight between points i and j, kInfinity when their colors are
/// incompatible under rule.
double weight(const PointConfig& config, const ColorRule& rule, MetricKind metric,
              std::size_t i, std::size_t j);

/// Lazy weighted view of a configuration. Neighbor queries use a cell grid
/// on the torus (dimension <= 3) and a sorted coordinate array on the
/// segment; other cases scan.
class PointInstance final : public InstanceView {
 public:
  PointInstance(PointConfig config, ColorRule rule, MetricKind metric);

  std::size_t size() const override { return config_.size(); }
  double weight(std::size_t i, std::size_t j) const override;
  void for_each_neighbor_below(std::size_t v, double bound, const NeighborFn& fn) const override;
  double scale_hint() const override { return scale_hint_; }
  double weight_ceiling() const override { return ceiling_; }

  const PointConfig& config() const { return config_; }
  const ColorRule& rule() const { return rule_; }
  MetricKind metric() const { return metric_; }

 private:
  void build_grid();

  PointConfig config_;
  ColorRule rule_;
  MetricKind metric_;
  double scale_hint_ = kInfinity;
  double ceiling_ = kInfinity;

  // Torus grid.
  int cells_per_axis_ = 0;
  double cell_size_ = 0.0;
  std::vector<std::size_t> cell_start_;
  std::vector<std::size_t> cell_points_;

  // Segment order.
  std::vector<std::size_t> by_coordinate_;
  std::vector<double> sorted_coordinate_;
};

/// Builds the lazy instance; when check_ties is set, rejects configurations
/// violating the distinct-weights condition with TieError.
PointInstance build_instance(const PointConfig& config, const ColorRule& rule, MetricKind metric,
                             bool check_ties = true);

}  // namespace smatch
