// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference for small instances: enumerate every matching made
// of finite edges and keep those with no blocking pair.

#pragma once

#include <cstdint>
#include <vector>

#include "smatch/matching.hpp"
#include "smatch/point_models.hpp"
#include "smatch/rng.hpp"

namespace oracle {

using smatch::kInfinity;

inline bool blocking_free(const smatch::InstanceView& view, const std::vector<std::size_t>& partner) {
  const std::size_t n = view.size();
  auto d = [&](std::size_t v) { return partner[v] == v ? kInfinity : view.weight(v, partner[v]); };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      const double w = view.weight(x, y);
      if (w < d(x) && w < d(y)) return false;
    }
  return true;
}

namespace detail {
inline void enumerate(const smatch::InstanceView& view, std::vector<std::size_t>& partner, std::size_t next,
                      std::vector<std::vector<std::size_t>>& out) {
  const std::size_t n = view.size();
  while (next < n && partner[next] != smatch::kNoVertex) ++next;
  if (next == n) {
    if (blocking_free(view, partner)) out.push_back(partner);
    return;
  }
  partner[next] = next;  // leave unmatched
  enumerate(view, partner, next + 1, out);
  for (std::size_t j = next + 1; j < n; ++j) {
    if (partner[j] != smatch::kNoVertex || !(view.weight(next, j) < kInfinity)) continue;
    partner[next] = j;
    partner[j] = next;
    enumerate(view, partner, next + 1, out);
    partner[j] = smatch::kNoVertex;
  }
  partner[next] = smatch::kNoVertex;
}
}  // namespace detail

/// Every stable matching, as partner maps (partner[v] == v when unmatched).
inline std::vector<std::vector<std::size_t>> stable_matchings(const smatch::InstanceView& view) {
  std::vector<std::size_t> partner(view.size(), smatch::kNoVertex);
  std::vector<std::vector<std::size_t>> out;
  detail::enumerate(view, partner, 0, out);
  return out;
}

/// Random instance on n vertices: colors drawn from probs, i.i.d. uniform
/// weights on compatible pairs, +inf elsewhere.
inline smatch::WeightedInstance random_instance(std::size_t n, const smatch::ColorRule& rule,
                                                const std::vector<double>& probs, std::uint64_t seed) {
  smatch::SplitMix64 rng(seed);
  std::vector<int> colors(n);
  for (auto& c : colors) c = smatch::sample_color(rng, probs);
  smatch::WeightedInstance inst(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = 0.01 + rng.uniform();
      if (rule.compatible(colors[i], colors[j])) inst.set_weight(i, j, w);
    }
  inst.set_colors(colors);
  return inst;
}

struct RuleCase {
  smatch::ColorRule rule;
  std::vector<double> probs;
};

inline std::vector<RuleCase> rule_cases() {
  return {{smatch::ColorRule::one_type(), {1.0}},
          {smatch::ColorRule::asymmetric_two_type(), {0.6, 0.4}},
          {smatch::ColorRule::symmetric(3), {0.4, 0.3, 0.3}}};
}

}  // namespace oracle
