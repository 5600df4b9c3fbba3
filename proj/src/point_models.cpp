// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smatch/point_models.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smatch {

void PointConfig::validate() const {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (coords.size() != colors.size() * static_cast<std::size_t>(dimension))
    throw std::invalid_argument("coordinate count does not match point count");
  for (double c : coords) {
    if (!(c >= 0.0) || !(c < side || (c == 0.0 && side == 0.0)))
      throw std::invalid_argument("coordinate outside [0, side)");
  }
}

ColorRule::ColorRule(RuleKind kind, int k)
    : kind_(kind), k_(k), allowed_(static_cast<std::size_t>(k * k), 0) {}

ColorRule ColorRule::one_type() {
  ColorRule r(RuleKind::one_type, 1);
  r.allowed_[0] = 1;
  return r;
}

ColorRule ColorRule::asymmetric_two_type() {
  ColorRule r(RuleKind::asymmetric_two_type, 2);
  r.allowed_[kRed * 2 + kRed] = 1;
  r.allowed_[kRed * 2 + kBlue] = 1;
  r.allowed_[kBlue * 2 + kRed] = 1;
  return r;
}

ColorRule ColorRule::symmetric(int k) {
  if (k < 2) throw std::invalid_argument("symmetric rule needs at least two colors");
  ColorRule r(RuleKind::symmetric_k_type, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) r.allowed_[static_cast<std::size_t>(a * k + b)] = a != b;
  return r;
}

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::one_type: return "one";
    case RuleKind::asymmetric_two_type: return "asym";
    case RuleKind::symmetric_k_type: return "sym";
  }
  return "?";
}

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean_torus: return "euclidean";
    case MetricKind::hierarchical_rho: return "rho";
    case MetricKind::hierarchical_rho_tilde: return "rho_tilde";
  }
  return "?";
}

RuleKind parse_rule_kind(const std::string& s) {
  if (s == "one" || s == "one_type") return RuleKind::one_type;
  if (s == "asym" || s == "asymmetric" || s == "asymmetric_two_type")
    return RuleKind::asymmetric_two_type;
  if (s == "sym" || s == "symmetric" || s == "symmetric_k_type") return RuleKind::symmetric_k_type;
  throw std::invalid_argument("unknown color rule '" + s + "'");
}

MetricKind parse_metric_kind(const std::string& s) {
  if (s == "euclidean" || s == "euclidean_torus") return MetricKind::euclidean_torus;
  if (s == "rho" || s == "hierarchical_rho") return MetricKind::hierarchical_rho;
  if (s == "rho_tilde" || s == "hierarchical_rho_tilde") return MetricKind::hierarchical_rho_tilde;
  throw std::invalid_argument("unknown metric '" + s + "'");
}

void check_probabilities(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("empty probability vector");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("probabilities do not sum to 1");
}

int sample_color(SplitMix64& rng, std::span<const double> probs) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < probs.size(); ++c) {
    acc += probs[c];
    if (u < acc) return static_cast<int>(c);
  }
  return static_cast<int>(probs.size() - 1);
}

PointConfig sample_config(double rate, int dimension, double side,
                          std::span<const double> color_probs, std::uint64_t seed,
                          Domain domain) {
  if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (!(side >= 0.0)) throw std::invalid_argument("side must be nonnegative");
  check_probabilities(color_probs);

  PointConfig cfg;
  cfg.dimension = dimension;
  cfg.domain = domain;
  cfg.side = side;
  SplitMix64 rng(seed);
  const double mean = rate * std::pow(side, dimension);
  const std::size_t n = static_cast<std::size_t>(rng.poisson(mean));
  cfg.coords.resize(n * static_cast<std::size_t>(dimension));
  cfg.colors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < dimension; ++a) {
      double c = side * rng.uniform();
      if (c >= side) c = std::nextafter(side, 0.0);
      cfg.coords[i * static_cast<std::size_t>(dimension) + static_cast<std::size_t>(a)] = c;
    }
    cfg.colors[i] = sample_color(rng, color_probs);
  }
  return cfg;
}

PointConfig palm_version(const PointConfig& config, std::span<const double> color_probs,
                         std::uint64_t seed) {
  check_probabilities(color_probs);
  PointConfig out;
  out.dimension = config.dimension;
  out.domain = config.domain;
  out.side = config.side;
  out.coords.assign(static_cast<std::size_t>(config.dimension), 0.0);
  out.coords.insert(out.coords.end(), config.coords.begin(), config.coords.end());
  SplitMix64 rng(seed);
  out.colors.push_back(sample_color(rng, color_probs));
  out.colors.insert(out.colors.end(), config.colors.begin(), config.colors.end());
  out.palm_origin = true;
  return out;
}

double torus_distance(std::span<const double> a, std::span<const double> b, double side) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = std::abs(a[k] - b[k]);
    if (d > side - d) d = side - d;
    s += d * d;
  }
  return std::sqrt(s);
}

double rho(double x, double y) {
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("rho is defined on nonnegative reals");
  if (x == y) return 0.0;
  // floor(2^k x) and floor(2^k y) first differ where their integer
  // parts do; the top differing bit gives the level. Scaling by powers of
  // two and taking fractional parts are exact in binary floating point.
  constexpr double kTwo32 = 4294967296.0;
  if (std::max(x, y) >= 0x1p63) {
    int k = 0;
    while (std::floor(std::ldexp(x, k)) != std::floor(std::ldexp(y, k))) --k;
    while (std::floor(std::ldexp(x, k + 1)) == std::floor(std::ldexp(y, k + 1))) ++k;
    return std::ldexp(1.0, -k);
  }
  int shift = 0;
  for (;;) {
    const double fx = std::floor(x), fy = std::floor(y);
    const auto a = static_cast<std::uint64_t>(fx), b = static_cast<std::uint64_t>(fy);
    if (a != b) return std::ldexp(1.0, std::bit_width(a ^ b) - shift);
    x = (x - fx) * kTwo32;
    y = (y - fy) * kTwo32;
    shift += 32;
  }
}

double rho_tilde(double x, double y) { return rho(x, y) + std::abs(x - y); }

namespace {

double metric_value(const PointConfig& config, MetricKind metric, std::size_t i, std::size_t j) {
  switch (metric) {
    case MetricKind::euclidean_torus:
      return torus_distance(config.point(i), config.point(j), config.side);
    case MetricKind::hierarchical_rho:
      return rho(config.coords[i], config.coords[j]);
    case MetricKind::hierarchical_rho_tilde:
      return rho_tilde(config.coords[i], config.coords[j]);
  }
  return kInfinity;
}

void check_metric(const PointConfig& config, MetricKind metric) {
  if (metric != MetricKind::euclidean_torus && config.dimension != 1)
    throw std::invalid_argument("hierarchical metrics require dimension 1");
}

}  // namespace

double weight(const PointConfig& config, const ColorRule& rule, MetricKind metric, std::size_t i,
              std::size_t j) {
  check_metric(config, metric);
  if (i == j) return kInfinity;
  if (!rule.compatible(config.colors[i], config.colors[j])) return kInfinity;
  return metric_value(config, metric, i, j);
}

PointInstance::PointInstance(PointConfig config, ColorRule rule, MetricKind metric)
    : config_(std::move(config)), rule_(std::move(rule)), metric_(metric) {
  check_metric(config_, metric_);
  for (int c : config_.colors) {
    if (c < 0 || c >= rule_.colors()) throw std::invalid_argument("color index outside the rule");
  }
  const std::size_t n = config_.size();
  if (n == 0) return;
  const int d = config_.dimension;
  if (metric_ == MetricKind::euclidean_torus) {
    const double spacing = std::pow(std::pow(config_.side, d) / static_cast<double>(n), 1.0 / d);
    scale_hint_ = 2.0 * spacing;
    ceiling_ = 0.5 * config_.side * std::sqrt(static_cast<double>(d)) * (1.0 + 1e-12);
    if (d <= 3 && n >= 32) build_grid();
  } else {
    by_coordinate_.resize(n);
    std::iota(by_coordinate_.begin(), by_coordinate_.end(), std::size_t{0});
    std::sort(by_coordinate_.begin(), by_coordinate_.end(),
              [&](std::size_t a, std::size_t b) { return config_.coords[a] < config_.coords[b]; });
    sorted_coordinate_.resize(n);
    for (std::size_t k = 0; k < n; ++k) sorted_coordinate_[k] = config_.coords[by_coordinate_[k]];
    scale_hint_ = 4.0 * config_.side / static_cast<double>(n);
    // Every dyadic block of length 2^ceil(log2 side) containing 0 holds all
    // points, so rho <= that length and rho_tilde < twice it.
    ceiling_ = 2.0 * std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(std::max(config_.side, 1e-300)))));
  }
}

void PointInstance::build_grid() {
  const std::size_t n = config_.size();
  const int d = config_.dimension;
  const double spacing = std::pow(std::pow(config_.side, d) / static_cast<double>(n), 1.0 / d);
  int g = std::max(1, static_cast<int>(std::floor(config_.side / spacing)));
  while (g > 1 && std::pow(static_cast<double>(g), d) > 4.0 * static_cast<double>(n)) --g;
  if (g < 3) return;
  cells_per_axis_ = g;
  cell_size_ = config_.side / g;
  std::size_t cells = 1;
  for (int a = 0; a < d; ++a) cells *= static_cast<std::size_t>(g);

  auto cell_of = [&](std::size_t i) {
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      int c = static_cast<int>(config_.point(i)[static_cast<std::size_t>(a)] / cell_size_);
      c = std::clamp(c, 0, g - 1);
      idx = idx * static_cast<std::size_t>(g) + static_cast<std::size_t>(c);
    }
    return idx;
  };
  std::vector<std::size_t> counts(cells + 1, 0);
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) {
    owner[i] = cell_of(i);
    ++counts[owner[i] + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) counts[c + 1] += counts[c];
  cell_start_ = counts;
  cell_points_.resize(n);
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i < n; ++i) cell_points_[fill[owner[i]]++] = i;
}

double PointInstance::weight(std::size_t i, std::size_t j) const {
  if (i == j) return kInfinity;
  if (!rule_.compatible(config_.colors[i], config_.colors[j])) return kInfinity;
  return metric_value(config_, metric_, i, j);
}

void PointInstance::for_each_neighbor_below(std::size_t v, double bound,
                                            const NeighborFn& fn) const {
  auto visit = [&](std::size_t j) {
    if (j == v) return;
    const double w = weight(v, j);
    if (w < bound) fn(j, w);
  };

  if (!by_coordinate_.empty() && bound < kInfinity) {
    // Both hierarchical weights dominate |x - y|.
    const double x = config_.coords[v];
    auto first = std::upper_bound(sorted_coordinate_.begin(), sorted_coordinate_.end(), x - bound);
    auto last = std::lower_bound(sorted_coordinate_.begin(), sorted_coordinate_.end(), x + bound);
    for (auto it = first; it != last; ++it)
      visit(by_coordinate_[static_cast<std::size_t>(it - sorted_coordinate_.begin())]);
    return;
  }

  if (cells_per_axis_ > 0 && bound < kInfinity) {
    const int d = config_.dimension;
    const int g = cells_per_axis_;
    const int reach = static_cast<int>(std::ceil(bound / cell_size_));
    if (2 * reach + 1 < g) {
      int home[3] = {0, 0, 0};
      for (int a = 0; a < d; ++a)
        home[a] = std::clamp(static_cast<int>(config_.point(v)[static_cast<std::size_t>(a)] / cell_size_), 0, g - 1);
      int off[3] = {-reach, -reach, -reach};
      for (int a = d; a < 3; ++a) off[a] = 0;
      while (true) {
        std::size_t idx = 0;
        for (int a = 0; a < d; ++a) {
          const int c = ((home[a] + off[a]) % g + g) % g;
          idx = idx * static_cast<std::size_t>(g) + static_cast<std::size_t>(c);
        }
        for (std::size_t k = cell_start_[idx]; k < cell_start_[idx + 1]; ++k) visit(cell_points_[k]);
        int a = d - 1;
        while (a >= 0 && off[a] == reach) {
          off[a] = -reach;
          --a;
        }
        if (a < 0) break;
        ++off[a];
      }
      return;
    }
  }

  for (std::size_t j = 0; j < config_.size(); ++j) visit(j);
}

PointInstance build_instance(const PointConfig& config, const ColorRule& rule, MetricKind metric,
                             bool check_ties) {
  if (config.size() == 0) throw std::invalid_argument("configuration has no points");
  PointInstance inst(config, rule, metric);
  if (check_ties) {
    if (auto tie = find_weight_tie(inst)) throw TieError(tie->vertex, tie->first, tie->second, tie->weight);
  }
  return inst;
}

}  // namespace smatch
