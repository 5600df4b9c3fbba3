// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smatch/pwit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smatch/parallel.hpp"
#include "smatch/rng.hpp"

namespace smatch {

std::vector<std::uint32_t> DescendingTree::label(std::size_t v) const {
  std::vector<std::uint32_t> out;
  while (v != 0) {
    out.push_back(nodes[v].ordinal);
    v = nodes[v].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

DescendingTree generate_descending_tree(double T, std::span<const double> color_probs,
                                        std::uint64_t seed, std::size_t node_cap) {
  if (!(T >= 0.0)) throw std::invalid_argument("tree bound must be nonnegative");
  check_probabilities(color_probs);
  DescendingTree tree;
  tree.bound = T;

  std::vector<std::uint64_t> keys;
  {
    SplitMix64 rng(seed);
    PwitNode root;
    root.color = sample_color(rng, color_probs);
    tree.nodes.push_back(root);
    keys.push_back(seed);
  }

  for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
    // The node's stream: one draw for its own color, then its child gaps.
    SplitMix64 rng(keys[v]);
    rng();
    const double limit = v == 0 ? T : tree.nodes[v].weight;
    tree.nodes[v].first_child = tree.nodes.size();
    double t = rng.exponential();
    std::uint32_t ordinal = 0;
    while (t < limit) {
      if (tree.nodes.size() >= node_cap) {
        tree.censored = true;
        return tree;
      }
      ++ordinal;
      PwitNode child;
      child.parent = v;
      child.ordinal = ordinal;
      child.depth = tree.nodes[v].depth + 1;
      child.weight = t;
      const std::uint64_t key = derive_seed(keys[v], ordinal);
      SplitMix64 child_rng(key);
      child.color = sample_color(child_rng, color_probs);
      tree.nodes.push_back(child);
      keys.push_back(key);
      ++tree.nodes[v].child_count;
      t += rng.exponential();
    }
  }
  return tree;
}

namespace {

// available[v]: v (not the root) is not matched below its own edge weight
// within its subtree.
std::vector<char> availability(const DescendingTree& tree, const ColorRule& rule) {
  if (tree.censored) throw std::invalid_argument("availability of a censored tree is undefined");
  const std::size_t n = tree.nodes.size();
  std::vector<char> available(n, 1);
  for (std::size_t v = n; v-- > 1;) {
    const PwitNode& node = tree.nodes[v];
    for (std::size_t c = node.first_child; c < node.first_child + node.child_count; ++c) {
      if (available[c] && rule.compatible(node.color, tree.nodes[c].color)) {
        available[v] = 0;
        break;
      }
    }
  }
  return available;
}

double lightest_available(const DescendingTree& tree, const ColorRule& rule,
                          const std::vector<char>& available, int root_color) {
  const PwitNode& root = tree.nodes[0];
  for (std::size_t c = root.first_child; c < root.first_child + root.child_count; ++c) {
    if (available[c] && rule.compatible(root_color, tree.nodes[c].color)) return tree.nodes[c].weight;
  }
  return kInfinity;
}

}  // namespace

double root_match_weight(const DescendingTree& tree, const ColorRule& rule) {
  return lightest_available(tree, rule, availability(tree, rule), tree.nodes[0].color);
}

double root_match_weight_as(const DescendingTree& tree, const ColorRule& rule, int root_color) {
  return lightest_available(tree, rule, availability(tree, rule), root_color);
}

bool root_matched_within(const DescendingTree& tree, const ColorRule& rule, double t) {
  if (t > tree.bound) throw std::invalid_argument("threshold above the tree bound");
  return root_match_weight(tree, rule) < t;
}

bool root_matched_within(const DescendingTree& tree, const ColorRule& rule) {
  return root_matched_within(tree, rule, tree.bound);
}

TreeInstance::TreeInstance(const DescendingTree& tree, const ColorRule& rule)
    : tree_(&tree), rule_(rule) {}

double TreeInstance::weight(std::size_t i, std::size_t j) const {
  const auto& nodes = tree_->nodes;
  if (i == j) return kInfinity;
  if (nodes[j].parent == i) std::swap(i, j);
  if (nodes[i].parent != j) return kInfinity;
  return rule_.compatible(nodes[i].color, nodes[j].color) ? nodes[i].weight : kInfinity;
}

void TreeInstance::for_each_neighbor_below(std::size_t v, double bound,
                                           const NeighborFn& fn) const {
  const auto& nodes = tree_->nodes;
  const PwitNode& node = nodes[v];
  if (node.parent != kNoVertex && node.weight < bound &&
      rule_.compatible(node.color, nodes[node.parent].color))
    fn(node.parent, node.weight);
  for (std::size_t c = node.first_child; c < node.first_child + node.child_count; ++c) {
    if (!(nodes[c].weight < bound)) break;
    if (rule_.compatible(node.color, nodes[c].color)) fn(c, nodes[c].weight);
  }
}

PwitModelSpec PwitModelSpec::one_type() { return {PwitModel::one_type, {1.0}}; }

PwitModelSpec PwitModelSpec::asymmetric(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  return {PwitModel::asymmetric, {1.0 - eps, eps}};
}

PwitModelSpec PwitModelSpec::symmetric(std::vector<double> probs) {
  if (probs.size() < 2) throw std::invalid_argument("symmetric model needs at least two colors");
  check_probabilities(probs);
  return {PwitModel::symmetric, std::move(probs)};
}

ColorRule PwitModelSpec::rule() const {
  switch (model) {
    case PwitModel::one_type: return ColorRule::one_type();
    case PwitModel::asymmetric: return ColorRule::asymmetric_two_type();
    case PwitModel::symmetric: return ColorRule::symmetric(static_cast<int>(probs.size()));
  }
  throw std::logic_error("unknown PWIT model");
}

double RootEstimates::estimate(std::size_t t_index, std::size_t color) const {
  if (used == 0) return std::nan("");
  return probs[color] * static_cast<double>(unmatched[t_index * colors + color]) /
         static_cast<double>(used);
}

double RootEstimates::standard_error(std::size_t t_index, std::size_t color) const {
  if (used == 0) return std::nan("");
  const double q = static_cast<double>(unmatched[t_index * colors + color]) / static_cast<double>(used);
  return probs[color] * std::sqrt(q * (1.0 - q) / static_cast<double>(used));
}

double RootEstimates::censored_fraction() const {
  return replicates == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(replicates);
}

RootEstimates estimate_root_probabilities(const PwitModelSpec& spec, double T,
                                          std::span<const double> times, std::size_t replicates,
                                          std::uint64_t seed, unsigned workers,
                                          std::size_t node_cap) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  for (double t : times) {
    if (!(t >= 0.0 && t <= T)) throw std::invalid_argument("time grid point outside [0, T]");
  }
  const ColorRule rule = spec.rule();
  const std::size_t k = spec.probs.size();
  const std::size_t nt = times.size();

  struct Partial {
    std::vector<std::uint64_t> unmatched;
    std::size_t used = 0, censored = 0;
    double nodes = 0.0;
  };
  auto parts = parallel_replicates<Partial>(
      replicates, workers == 0 ? default_workers() : workers, [&](Partial& acc, std::size_t r) {
        if (acc.unmatched.empty()) acc.unmatched.assign(nt * k, 0);
        const DescendingTree tree = generate_descending_tree(T, spec.probs, derive_seed(seed, r), node_cap);
        if (tree.censored) {
          ++acc.censored;
          return;
        }
        ++acc.used;
        acc.nodes += static_cast<double>(tree.node_count());
        const std::vector<char> avail = availability(tree, rule);
        for (std::size_t c = 0; c < k; ++c) {
          const double w = lightest_available(tree, rule, avail, static_cast<int>(c));
          for (std::size_t ti = 0; ti < nt; ++ti) {
            if (w >= times[ti]) ++acc.unmatched[ti * k + c];
          }
        }
      });

  RootEstimates out;
  out.times.assign(times.begin(), times.end());
  out.probs = spec.probs;
  out.colors = k;
  out.replicates = replicates;
  out.unmatched.assign(nt * k, 0);
  for (const Partial& p : parts) {
    out.used += p.used;
    out.censored += p.censored;
    out.node_count_sum += p.nodes;
    for (std::size_t i = 0; i < p.unmatched.size(); ++i) out.unmatched[i] += p.unmatched[i];
  }
  return out;
}

std::vector<std::size_t> sample_tree_sizes(double T, std::size_t replicates, std::uint64_t seed,
                                           unsigned workers, std::size_t node_cap) {
  const double one[] = {1.0};
  std::vector<std::size_t> sizes(replicates);
  parallel_replicates<char>(replicates, workers == 0 ? default_workers() : workers,
                            [&](char&, std::size_t r) {
                              const DescendingTree tree =
                                  generate_descending_tree(T, one, derive_seed(seed, r), node_cap);
                              sizes[r] = tree.censored ? node_cap + 1 : tree.node_count();
                            });
  return sizes;
}

}  // namespace smatch
