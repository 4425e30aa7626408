#pragma once

// Brute-force references used only by the tests. Nothing here reuses the
// library's incremental bookkeeping.

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "flmig/graph.hpp"
#include "flmig/partition.hpp"
#include "flmig/rng.hpp"

namespace oracle {

using flmig::CommunityId;
using flmig::Graph;
using flmig::NodeId;

/// Dense adjacency matrix; A[v][v] holds twice the self-loop weight so that row sums are degrees.
inline std::vector<std::vector<double>> adjacency_matrix(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (NodeId u = 0; u < n; ++u) {
    for (const auto& nb : g.neighbors(u)) a[u][nb.node] += nb.weight;
    a[u][u] += 2.0 * g.self_loop(u);
  }
  return a;
}

/// Literal double sum: Q = 1/2m sum_ij [A_ij - rho k_i k_j / 2m] delta(c_i, c_j).
inline double modularity_reference(const Graph& g, std::span<const CommunityId> c, double rho = 1.0) {
  const auto a = adjacency_matrix(g);
  const std::size_t n = g.node_count();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c[i] == c[j]) q += a[i][j] - rho * k[i] * k[j] / two_m;
  return q / two_m;
}

/// Reachability by repeated boolean squaring of (I + A) restricted to `subset`.
inline std::vector<std::vector<bool>> reachability(const Graph& g, std::span<const NodeId> subset) {
  const std::size_t s = subset.size();
  std::map<NodeId, std::size_t> slot;
  for (std::size_t i = 0; i < s; ++i) slot[subset[i]] = i;
  std::vector<std::vector<bool>> r(s, std::vector<bool>(s, false));
  for (std::size_t i = 0; i < s; ++i) {
    r[i][i] = true;
    for (const auto& nb : g.neighbors(subset[i])) {
      auto it = slot.find(nb.node);
      if (it != slot.end()) r[i][it->second] = true;
    }
  }
  for (std::size_t len = 1; len < s; len *= 2) {
    auto next = r;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t k = 0; k < s; ++k)
        if (r[i][k])
          for (std::size_t j = 0; j < s; ++j)
            if (r[k][j]) next[i][j] = true;
    r = std::move(next);
  }
  return r;
}

inline bool connected_by_closure(const Graph& g, std::span<const NodeId> members) {
  if (members.empty()) return true;
  const auto r = reachability(g, members);
  for (std::size_t j = 0; j < members.size(); ++j)
    if (!r[0][j]) return false;
  return true;
}

struct Recount {
  std::map<CommunityId, double> total_degree;
  std::map<CommunityId, double> internal_weight;
  std::map<CommunityId, std::size_t> size;
};

/// Community aggregates recomputed from the edge list.
inline Recount recount(const Graph& g, std::span<const CommunityId> c) {
  Recount r;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    r.size[c[u]] += 1;
    r.total_degree[c[u]] += g.degree(u);
    r.internal_weight[c[u]] += g.self_loop(u);
    for (const auto& nb : g.neighbors(u))
      if (u < nb.node && c[u] == c[nb.node]) r.internal_weight[c[u]] += nb.weight;
  }
  return r;
}

/// Largest Q improvement from any single-node move into a neighboring community, by full recomputation.
inline double best_single_move_gain(const Graph& g, std::span<const CommunityId> c, double rho = 1.0) {
  std::vector<CommunityId> work(c.begin(), c.end());
  const double base = modularity_reference(g, work, rho);
  double best = -INFINITY;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const CommunityId own = work[v];
    for (const auto& nb : g.neighbors(v)) {
      if (work[nb.node] == own) continue;
      work[v] = work[nb.node];
      best = std::max(best, modularity_reference(g, work, rho) - base);
      work[v] = own;
    }
  }
  return best;
}

/// Erdos-Renyi G(n, p), optionally with random integer weights and self-loops.
inline Graph random_graph(flmig::Rng& rng, std::size_t n, double p, bool weighted = false, double loop_p = 0.0) {
  flmig::GraphBuilder b(n);
  for (NodeId u = 0; u < n; ++u) {
    if (loop_p > 0.0 && rng.uniform() < loop_p) b.add_edge(u, u, weighted ? 1.0 + rng.below(3) : 1.0);
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.uniform() < p) b.add_edge(u, v, weighted ? 1.0 + rng.below(4) : 1.0);
  }
  return std::move(b).build();
}

/// Uniform labels in [0, k).
inline std::vector<CommunityId> random_assignment(flmig::Rng& rng, std::size_t n, std::size_t k) {
  std::vector<CommunityId> c(n);
  for (auto& x : c) x = static_cast<CommunityId>(rng.below(k));
  return c;
}

/// Two disjoint triangles {0,1,2} and {3,4,5}.
inline Graph two_triangles() {
  return flmig::parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").graph;
}

inline std::string data_path(const std::string& name) { return std::string(FLMIG_TEST_DATA) + "/" + name; }

}  // namespace oracle
