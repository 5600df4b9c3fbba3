// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Descending fragment of the Poisson-weighted infinite tree.
//
// Only vertices reachable from the root along paths with strictly
// decreasing weights below T are generated: a vertex entered along an edge
// of weight t gets children at the points of a unit-rate Poisson process on
// [0, t). This fragment decides whether the root is matched below T.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smatch/matching.hpp"
#include "smatch/point_models.hpp"

namespace smatch {

struct PwitNode {
  std::size_t parent = kNoVertex;  ///< kNoVertex at the root
  std::uint32_t ordinal = 0;       ///< j in the label v j (1-based; 0 at the root)
  std::uint32_t depth = 0;
  double weight = kInfinity;       ///< edge weight to the parent
  int color = 0;
  std::size_t first_child = 0;     ///< children are contiguous, weights increasing
  std::size_t child_count = 0;
};

struct DescendingTree {
  std::vector<PwitNode> nodes;  ///< breadth-first; nodes[0] is the root
  double bound = 0.0;
  bool censored = false;        ///< generation stopped at the node cap

  std::size_t node_count() const { return nodes.size(); }
  /// Label of node v as its sequence of child ordinals from the root.
  std::vector<std::uint32_t> label(std::size_t v) const;
};

inline constexpr std::size_t kDefaultNodeCap = 10'000'000;

/// Samples the descending tree with bound T. Each node draws its color and
/// child gaps from its own stream, derived from its parent's stream key and
/// its ordinal, so a tree grown to a larger T contains the smaller one.
/// Sets `censored` (and stops) when more than node_cap nodes would be made.
DescendingTree generate_descending_tree(double T, std::span<const double> color_probs,
                                        std::uint64_t seed, std::size_t node_cap = kDefaultNodeCap);

/// Weight of the edge along which the root is matched in the stable
/// matching of the tree, or kInfinity if it is not matched below the bound.
///
/// A child w entered at weight s is available iff it is not matched below s
/// within its own subtree; a node matches its lightest compatible available
/// child. Availability does not depend on the root's bound, so one pass
/// answers every threshold t <= bound.
double root_match_weight(const DescendingTree& tree, const ColorRule& rule);

/// Same, as if the root had color `root_color`; the rest of the tree is
/// unchanged. Used to average over the root color exactly.
double root_match_weight_as(const DescendingTree& tree, const ColorRule& rule, int root_color);

/// root_match_weight(tree, rule) < t, for t <= tree.bound.
bool root_matched_within(const DescendingTree& tree, const ColorRule& rule, double t);
bool root_matched_within(const DescendingTree& tree, const ColorRule& rule);

/// The tree as a finite weighted graph (edges between compatible
/// parent/child pairs), for cross-checking with the generic engine.
class TreeInstance final : public InstanceView {
 public:
  TreeInstance(const DescendingTree& tree, const ColorRule& rule);
  std::size_t size() const override { return tree_->nodes.size(); }
  double weight(std::size_t i, std::size_t j) const override;
  void for_each_neighbor_below(std::size_t v, double bound, const NeighborFn& fn) const override;

 private:
  const DescendingTree* tree_;
  ColorRule rule_;
};

enum class PwitModel { one_type, asymmetric, symmetric };

/// Model family plus its color probabilities: {1} for one-type,
/// {1 - eps, eps} for asymmetric, {p_1..p_k} for symmetric.
struct PwitModelSpec {
  PwitModel model = PwitModel::one_type;
  std::vector<double> probs{1.0};

  static PwitModelSpec one_type();
  static PwitModelSpec asymmetric(double eps);
  static PwitModelSpec symmetric(std::vector<double> probs);
  ColorRule rule() const;
};

/// P(root has color i and is not matched below t), estimated on a grid of t.
///
/// The root's color is independent of everything below it, so each
/// replicate scores every root color: the estimate is
/// p_i * (fraction of trees in which a root of color i stays unmatched
/// below t). This is unbiased, exact at t = 0, and its standard error is
/// the binomial one scaled by p_i.
struct RootEstimates {
  std::vector<double> times;
  std::vector<double> probs;
  std::size_t colors = 0;
  std::size_t replicates = 0;   ///< requested
  std::size_t used = 0;         ///< not censored
  std::size_t censored = 0;
  /// unmatched[t_index * colors + i] = used replicates in which a root of
  /// color i is not matched below times[t_index].
  std::vector<std::uint64_t> unmatched;
  double node_count_sum = 0.0;

  double estimate(std::size_t t_index, std::size_t color) const;
  double standard_error(std::size_t t_index, std::size_t color) const;
  double censored_fraction() const;
};

/// Replicate r uses the tree seeded with derive_seed(seed, r). Counts are
/// integers, so the result is independent of the worker count. A time grid
/// point above T is rejected.
RootEstimates estimate_root_probabilities(const PwitModelSpec& spec, double T,
                                          std::span<const double> times, std::size_t replicates,
                                          std::uint64_t seed, unsigned workers = 0,
                                          std::size_t node_cap = kDefaultNodeCap);

/// Sizes of independent descending trees (for the size law); censored
/// replicates report node_cap + 1.
std::vector<std::size_t> sample_tree_sizes(double T, std::size_t replicates, std::uint64_t seed,
                                           unsigned workers = 0,
                                           std::size_t node_cap = kDefaultNodeCap);

}  // namespace smatch
