#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "flmig/graph.hpp"
#include "flmig/partition.hpp"

namespace flmig {

/// Resolution parameter of the null-model term; 1 gives classic modularity.
class Resolution {
public:
  constexpr Resolution() = default;
  explicit Resolution(double rho) : rho_(rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("resolution must be positive");
  }
  constexpr double value() const noexcept { return rho_; }

private:
  double rho_ = 1.0;
};

class UndefinedModularity : public std::domain_error {
public:
  UndefinedModularity() : std::domain_error("modularity is undefined on a graph without edges") {}
};

/**
 * Q = sum_C [ w_C / m - rho * (d_C / 2m)^2 ]. Terms are added in order of
 * each community's lowest node, so relabeling communities cannot change
 * the result in the last bit.
 */
inline double modularity(const Graph& g, const Partition& p, Resolution rho = {}) {
  const double two_m = g.total_weight_2m();
  if (!(two_m > 0.0)) throw UndefinedModularity();
  const double m = two_m / 2.0;
  std::vector<char> done(p.id_capacity(), 0);
  double q = 0.0;
  for (NodeId v = 0; v < p.node_count(); ++v) {
    const CommunityId c = p.community_of(v);
    if (done[c]) continue;
    done[c] = 1;
    const double share = p.total_degree(c) / two_m;
    q += p.internal_weight(c) / m - rho.value() * share * share;
  }
  return q;
}

inline double modularity(const Graph& g, std::span<const CommunityId> assignment, Resolution rho = {}) {
  return modularity(g, Partition::from_assignment(g, assignment), rho);
}

/**
 * Q(after) - Q(before) for moving a node of degree d out of its community
 * (whose remaining members have weight `edge_from` towards it and total
 * degree `degree_from`) into a community with `edge_to` / `degree_to`.
 *
 * Evaluated as one numerator over 2m^2 so that integer weights at rho = 1
 * give an exactly signed result.
 */
inline double move_gain(Weight edge_to, Weight degree_to, Weight edge_from, Weight degree_from, Weight d,
                        double two_m, Resolution rho = {}) {
  const double numerator = two_m * (edge_to - edge_from) - rho.value() * d * (degree_to - degree_from);
  return 2.0 * numerator / (two_m * two_m);
}

/**
 * Exact Q(after) - Q(before) for moving v into `target` (remove, then
 * insert). `scan` must be fresh for v.
 */
inline double modularity_gain(const Graph& g, const Partition& p, NodeId v, CommunityId target,
                              const NeighborCommunityScan& scan, Resolution rho = {}) {
  const CommunityId from = p.community_of(v);
  if (target == from) return 0.0;
  const Weight d = g.degree(v);
  return move_gain(scan.weight_to(target), p.empty(target) ? 0.0 : p.total_degree(target), scan.weight_to(from),
                   p.total_degree(from) - d, d, g.total_weight_2m(), rho);
}

/// Overlap counts between two labelings of the same node set.
class ContingencyTable {
public:
  ContingencyTable(std::span<const CommunityId> a, std::span<const CommunityId> b) : n_(a.size()) {
    if (a.size() != b.size()) throw std::invalid_argument("partitions cover different node sets");
    for (std::size_t i = 0; i < a.size(); ++i) {
      ++cells_[{a[i], b[i]}];
      ++rows_[a[i]];
      ++cols_[b[i]];
    }
  }

  std::size_t n() const noexcept { return n_; }
  const std::map<std::pair<CommunityId, CommunityId>, std::size_t>& cells() const noexcept { return cells_; }
  const std::map<CommunityId, std::size_t>& row_sums() const noexcept { return rows_; }
  const std::map<CommunityId, std::size_t>& column_sums() const noexcept { return cols_; }

private:
  std::size_t n_;
  std::map<std::pair<CommunityId, CommunityId>, std::size_t> cells_;
  std::map<CommunityId, std::size_t> rows_;
  std::map<CommunityId, std::size_t> cols_;
};

/**
 * Normalized mutual information (Danon et al. form):
 *   -2 sum_ij M_ij log(n M_ij / (M_i. M_.j)) / (sum_i M_i. log(M_i./n) + sum_j M_.j log(M_.j/n)).
 * Both sides all-in-one gives 1; exactly one side all-in-one gives 0.
 */
inline double nmi(std::span<const CommunityId> a, std::span<const CommunityId> b) {
  if (a.empty()) throw std::invalid_argument("nmi of empty partitions");
  ContingencyTable table(a, b);
  const double n = static_cast<double>(table.n());
  const bool a_single = table.row_sums().size() == 1;
  const bool b_single = table.column_sums().size() == 1;
  if (a_single && b_single) return 1.0;
  if (a_single || b_single) return 0.0;

  double numerator = 0.0;
  for (const auto& [key, count] : table.cells()) {
    const double mij = static_cast<double>(count);
    const double mi = static_cast<double>(table.row_sums().at(key.first));
    const double mj = static_cast<double>(table.column_sums().at(key.second));
    numerator += mij * std::log(n * mij / (mi * mj));
  }
  double denominator = 0.0;
  for (const auto& [label, count] : table.row_sums()) denominator += count * std::log(count / n);
  for (const auto& [label, count] : table.column_sums()) denominator += count * std::log(count / n);
  return -2.0 * numerator / denominator;
}

}  // namespace flmig
