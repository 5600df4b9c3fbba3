// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "smatch/rng.hpp"

namespace smatch {

void InstanceView::for_each_neighbor_below(std::size_t v, double bound,
                                           const NeighborFn& fn) const {
  const std::size_t n = size();
  for (std::size_t j = 0; j < n; ++j) {
    if (j == v) continue;
    const double w = weight(v, j);
    if (w < bound) fn(j, w);
  }
}

WeightedInstance::WeightedInstance(std::size_t n) : n_(n), w_(n * n, kInfinity) {}

WeightedInstance WeightedInstance::materialize(const InstanceView& view) {
  WeightedInstance out(view.size());
  for (std::size_t i = 0; i < out.n_; ++i) {
    view.for_each_neighbor_below(i, kInfinity, [&](std::size_t j, double w) {
      out.w_[i * out.n_ + j] = w;
    });
  }
  return out;
}

void WeightedInstance::for_each_neighbor_below(std::size_t v, double bound,
                                               const NeighborFn& fn) const {
  const double* row = w_.data() + v * n_;
  for (std::size_t j = 0; j < n_; ++j) {
    if (row[j] < bound) fn(j, row[j]);
  }
}

void WeightedInstance::set_weight(std::size_t i, std::size_t j, double w) {
  if (i >= n_ || j >= n_) throw std::out_of_range("vertex index out of range");
  if (i == j) throw std::invalid_argument("self-weight is always infinite");
  if (std::isnan(w) || !(w > 0.0)) throw std::invalid_argument("weights must be positive or inf");
  w_[i * n_ + j] = w;
  w_[j * n_ + i] = w;
}

void WeightedInstance::set_colors(std::vector<int> colors) {
  if (!colors.empty() && colors.size() != n_)
    throw std::invalid_argument("color list length differs from vertex count");
  colors_ = std::move(colors);
}

void WeightedInstance::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != n_)
    throw std::invalid_argument("label list length differs from vertex count");
  labels_ = std::move(labels);
}

std::string WeightedInstance::label(std::size_t v) const {
  return labels_.empty() ? std::to_string(v) : labels_[v];
}

WeightedInstance WeightedInstance::jittered(std::uint64_t seed, double scale) const {
  WeightedInstance out = *this;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double w = w_[i * n_ + j];
      if (!is_finite_weight(w)) continue;
      SplitMix64 rng(derive_seed(seed, i * n_ + j));
      const double jw = w * (1.0 + scale * rng.uniform());
      out.w_[i * n_ + j] = out.w_[j * n_ + i] = jw;
    }
  }
  return out;
}

WeightedInstance WeightedInstance::rescaled(const std::function<double(double)>& f) const {
  WeightedInstance out = *this;
  for (double& w : out.w_) {
    if (is_finite_weight(w)) w = f(w);
  }
  return out;
}

Matching Matching::empty(std::size_t n) {
  Matching m;
  m.partner.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.partner[i] = i;
  m.match_weight.assign(n, kInfinity);
  return m;
}

std::size_t Matching::unmatched_count() const {
  std::size_t c = 0;
  for (std::size_t v = 0; v < partner.size(); ++v) c += partner[v] == v;
  return c;
}

std::optional<WeightTie> find_weight_tie(const InstanceView& view) {
  std::vector<std::pair<double, std::size_t>> row;
  for (std::size_t v = 0; v < view.size(); ++v) {
    row.clear();
    view.for_each_neighbor_below(v, kInfinity,
                                 [&](std::size_t j, double w) { row.emplace_back(w, j); });
    std::sort(row.begin(), row.end());
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k].first == row[k - 1].first)
        return WeightTie{v, row[k - 1].second, row[k].second, row[k].first};
    }
  }
  return std::nullopt;
}

namespace {

struct Edge {
  double w;
  std::size_t u;
  std::size_t v;
};

// Equal-weight edges sharing an endpoint make the greedy order ambiguous.
void reject_shell_ties(const std::vector<Edge>& edges) {
  std::vector<std::size_t> ends;
  for (std::size_t a = 0; a < edges.size();) {
    std::size_t b = a + 1;
    while (b < edges.size() && edges[b].w == edges[a].w) ++b;
    if (b - a > 1) {
      ends.clear();
      for (std::size_t k = a; k < b; ++k) {
        ends.push_back(edges[k].u);
        ends.push_back(edges[k].v);
      }
      std::sort(ends.begin(), ends.end());
      auto dup = std::adjacent_find(ends.begin(), ends.end());
      if (dup != ends.end()) {
        const std::size_t x = *dup;
        std::size_t others[2] = {kNoVertex, kNoVertex};
        int found = 0;
        for (std::size_t k = a; k < b && found < 2; ++k) {
          if (edges[k].u == x) others[found++] = edges[k].v;
          else if (edges[k].v == x) others[found++] = edges[k].u;
        }
        throw TieError(x, others[0], others[1], edges[a].w);
      }
    }
    a = b;
  }
}

}  // namespace

Matching stable_match(const InstanceView& view) {
  const std::size_t n = view.size();
  Matching m = Matching::empty(n);
  std::vector<std::size_t> free_vertices(n);
  for (std::size_t i = 0; i < n; ++i) free_vertices[i] = i;

  const double ceiling = view.weight_ceiling();
  double lo = 0.0;
  double hi = view.scale_hint();
  if (!(hi > 0.0) || hi >= ceiling) hi = kInfinity;

  std::vector<Edge> edges;
  while (free_vertices.size() >= 2) {
    edges.clear();
    for (std::size_t u : free_vertices) {
      view.for_each_neighbor_below(u, hi, [&](std::size_t v, double w) {
        if (v > u && m.partner[v] == v && w >= lo) edges.push_back({w, u, v});
      });
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
    });
    reject_shell_ties(edges);
    for (const Edge& e : edges) {
      if (m.partner[e.u] == e.u && m.partner[e.v] == e.v) {
        m.partner[e.u] = e.v;
        m.partner[e.v] = e.u;
        m.match_weight[e.u] = m.match_weight[e.v] = e.w;
      }
    }
    std::erase_if(free_vertices, [&](std::size_t v) { return m.partner[v] != v; });
    if (hi == kInfinity) break;
    lo = hi;
    hi = hi * 4.0;
    if (hi > ceiling) hi = kInfinity;
  }
  return m;
}

void validate_matching(const InstanceView& view, const Matching& m) {
  const std::size_t n = view.size();
  if (m.partner.size() != n || m.match_weight.size() != n)
    throw std::invalid_argument("matching size differs from instance size");
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t y = m.partner[x];
    if (y >= n) throw std::invalid_argument("partner index out of range");
    if (m.partner[y] != x) throw std::invalid_argument("partner map is not an involution");
    if (y == x) {
      if (m.match_weight[x] != kInfinity)
        throw std::invalid_argument("unmatched vertex with finite match weight");
    } else {
      const double w = view.weight(x, y);
      if (!is_finite_weight(w)) throw std::invalid_argument("matched along an absent edge");
      if (m.match_weight[x] != w) throw std::invalid_argument("match weight differs from edge weight");
    }
  }
}

std::optional<VertexPair> verify_stable(const InstanceView& view, const Matching& m) {
  validate_matching(view, m);
  std::optional<VertexPair> witness;
  for (std::size_t x = 0; x < view.size() && !witness; ++x) {
    view.for_each_neighbor_below(x, m.match_weight[x], [&](std::size_t y, double w) {
      if (!witness && w < m.match_weight[y]) witness = VertexPair{x, y};
    });
  }
  return witness;
}

DescendingClosure descending_closure(const InstanceView& view, std::size_t root, double radius,
                                     std::size_t cap) {
  if (!(radius > 0.0)) throw std::invalid_argument("closure radius must be positive");
  if (root >= view.size()) throw std::out_of_range("closure root out of range");

  // Largest bound with which each vertex is reached by a descending path.
  // Popping in decreasing bound order finalizes a vertex at its first pop.
  std::unordered_map<std::size_t, double> best;
  std::priority_queue<std::pair<double, std::size_t>> frontier;
  DescendingClosure out;
  out.root = root;
  out.radius = radius;
  best[root] = radius;
  out.vertices.push_back(root);
  frontier.emplace(radius, root);

  while (!frontier.empty()) {
    const auto [bound, v] = frontier.top();
    frontier.pop();
    if (bound < best[v]) continue;
    view.for_each_neighbor_below(v, bound, [&](std::size_t y, double w) {
      auto [it, inserted] = best.try_emplace(y, w);
      if (inserted) {
        out.vertices.push_back(y);
        if (out.vertices.size() > cap)
          throw CapExceeded("descending closure exceeds " + std::to_string(cap) + " vertices");
        frontier.emplace(w, y);
      } else if (w > it->second) {
        it->second = w;
        frontier.emplace(w, y);
      }
    });
  }

  // An edge belongs to the closure iff it is lighter than the best bound at
  // one of its ends.
  for (std::size_t u : out.vertices) {
    view.for_each_neighbor_below(u, best[u], [&](std::size_t y, double w) {
      const double by = best.at(y);
      if (u < y || !(w < by)) out.edges.push_back({u, y, w});
    });
  }
  return out;
}

bool matched_within(const DescendingClosure& closure) {
  std::unordered_map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < closure.vertices.size(); ++i) local[closure.vertices[i]] = i;
  const std::size_t n = closure.vertices.size();

  // Directed state s = 2*e + dir: "the head of edge e, entered along e".
  struct Arc {
    std::size_t head;
    double weight;
    std::size_t state;  // state of entering `head` along this arc
  };
  std::vector<std::vector<Arc>> adj(n);
  const std::size_t m = closure.edges.size();
  for (std::size_t e = 0; e < m; ++e) {
    const auto& ce = closure.edges[e];
    const std::size_t a = local.at(ce.u), b = local.at(ce.v);
    adj[a].push_back({b, ce.weight, 2 * e});
    adj[b].push_back({a, ce.weight, 2 * e + 1});
  }
  for (auto& arcs : adj) {
    std::sort(arcs.begin(), arcs.end(),
              [](const Arc& x, const Arc& y) { return x.weight < y.weight; });
  }

  std::vector<std::size_t> order(2 * m);
  for (std::size_t s = 0; s < 2 * m; ++s) order[s] = s;
  std::sort(order.begin(), order.end(), [&](std::size_t s, std::size_t t) {
    return closure.edges[s / 2].weight < closure.edges[t / 2].weight;
  });

  std::vector<char> matched_below(2 * m, 0);
  auto decide = [&](std::size_t vertex, double bound) {
    for (const Arc& arc : adj[vertex]) {
      if (!(arc.weight < bound)) break;
      if (!matched_below[arc.state]) return true;
    }
    return false;
  };
  for (std::size_t s : order) {
    const auto& ce = closure.edges[s / 2];
    const std::size_t head = local.at(s % 2 == 0 ? ce.v : ce.u);
    matched_below[s] = decide(head, ce.weight);
  }
  return decide(0, closure.radius);
}

bool check_rescale_invariance(const WeightedInstance& instance,
                              const std::function<double(double)>& f) {
  const Matching a = stable_match(instance);
  const Matching b = stable_match(instance.rescaled(f));
  return a.partner == b.partner;
}

}  // namespace smatch
