// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Stable matchings on finite weighted graphs.
//
// A weighted graph is presented through InstanceView: a vertex count, a
// symmetric weight function with kInfinity for absent edges, and a way to
// enumerate the neighbors of a vertex strictly below a bound. Dense
// instances (WeightedInstance) scan a row; geometric instances answer the
// neighbor query from a spatial index.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smatch/types.hpp"

namespace smatch {

class InstanceView {
 public:
  using NeighborFn = std::function<void(std::size_t, double)>;

  virtual ~InstanceView() = default;

  virtual std::size_t size() const = 0;

  /// Symmetric; kInfinity for absent edges and on the diagonal.
  virtual double weight(std::size_t i, std::size_t j) const = 0;

  /// Calls fn(j, weight(v, j)) for every j with weight(v, j) < bound, in
  /// unspecified order. Never reports v itself. The default scans all j.
  virtual void for_each_neighbor_below(std::size_t v, double bound, const NeighborFn& fn) const;

  /// Typical nearest-neighbor weight, used to size the first shell of the
  /// matching sweep. kInfinity means "one shell holding every edge".
  virtual double scale_hint() const { return kInfinity; }

  /// Upper bound on every finite weight (kInfinity if unknown).
  virtual double weight_ceiling() const { return kInfinity; }
};

/// Finite vertex set with a dense symmetric weight matrix and optional
/// colors and labels.
class WeightedInstance final : public InstanceView {
 public:
  explicit WeightedInstance(std::size_t n = 0);

  /// Copies every weight of `view` into a dense matrix.
  static WeightedInstance materialize(const InstanceView& view);

  std::size_t size() const override { return n_; }
  double weight(std::size_t i, std::size_t j) const override { return w_[i * n_ + j]; }
  void for_each_neighbor_below(std::size_t v, double bound, const NeighborFn& fn) const override;

  /// Sets both (i, j) and (j, i). Weight must be positive or kInfinity.
  void set_weight(std::size_t i, std::size_t j, double w);

  bool has_colors() const { return !colors_.empty(); }
  int color(std::size_t v) const { return colors_.empty() ? 0 : colors_[v]; }
  void set_colors(std::vector<int> colors);

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);
  /// Label of v, or its index if no labels were set.
  std::string label(std::size_t v) const;

  /// Multiplies every finite weight by (1 + scale * u), u uniform in [0,1)
  /// drawn per edge from `seed`. Changes the instance; used to break ties
  /// deliberately when the caller accepts that.
  WeightedInstance jittered(std::uint64_t seed, double scale) const;

  /// Applies f to every finite weight.
  WeightedInstance rescaled(const std::function<double(double)>& f) const;

 private:
  std::size_t n_;
  std::vector<double> w_;
  std::vector<int> colors_;
  std::vector<std::string> labels_;
};

/// Involution on vertices with per-vertex match weight (kInfinity when
/// unmatched). Stability is not implied; see verify_stable.
struct Matching {
  std::vector<std::size_t> partner;
  std::vector<double> match_weight;

  static Matching empty(std::size_t n);

  std::size_t size() const { return partner.size(); }
  bool is_matched(std::size_t v) const { return partner[v] != v; }
  std::size_t unmatched_count() const;

  friend bool operator==(const Matching&, const Matching&) = default;
};

struct VertexPair {
  std::size_t x;
  std::size_t y;
};

struct WeightTie {
  std::size_t vertex;
  std::size_t first;
  std::size_t second;
  double weight;
};

/// First vertex carrying two equal finite weights, if any.
std::optional<WeightTie> find_weight_tie(const InstanceView& view);

/// The unique stable matching.
///
/// Mutually-closest pairs are matched and removed until no finite edge
/// joins two unmatched vertices; equivalently, edges are taken in
/// increasing weight order and kept when both ends are free. Edges are
/// gathered in geometric shells starting at view.scale_hint(), each shell
/// only between vertices still unmatched, so sparse geometric views never
/// materialize the full edge set.
///
/// Throws TieError if two equal-weight edges sharing a vertex are both
/// candidates, since the result would then depend on tie-breaking.
Matching stable_match(const InstanceView& view);

/// Throws std::invalid_argument unless m is an involution on the vertices
/// of view whose match weights agree with the instance.
void validate_matching(const InstanceView& view, const Matching& m);

/// Empty optional if m is stable, otherwise one pair with
/// weight(x, y) < min(d(x), d(y)).
std::optional<VertexPair> verify_stable(const InstanceView& view, const Matching& m);

struct ClosureEdge {
  std::size_t u;
  std::size_t v;
  double weight;
};

/// Union of the descending paths from `root` with weights below `radius`.
struct DescendingClosure {
  std::size_t root = 0;
  double radius = 0.0;
  std::vector<std::size_t> vertices;  ///< root first
  std::vector<ClosureEdge> edges;
};

inline constexpr std::size_t kDefaultClosureCap = 10'000'000;

/// Explores only neighbors strictly below the weight of the edge a vertex
/// was entered by (below `radius` at the root). Throws CapExceeded when
/// more than `cap` vertices are reached.
DescendingClosure descending_closure(const InstanceView& view, std::size_t root, double radius,
                                     std::size_t cap = kDefaultClosureCap);

/// Whether the root is matched along an edge lighter than the closure
/// radius in the stable matching of any instance containing the closure.
///
/// A vertex y entered at weight b is matched below b iff it has a neighbor
/// z with weight(y, z) = s < b that is not itself matched below s. States
/// are resolved in increasing order of their bound, so every state depends
/// only on ones already decided.
bool matched_within(const DescendingClosure& closure);

/// True iff f (strictly increasing, f(inf) = inf) leaves the stable
/// matching unchanged.
bool check_rescale_invariance(const WeightedInstance& instance,
                              const std::function<double(double)>& f);

}  // namespace smatch
