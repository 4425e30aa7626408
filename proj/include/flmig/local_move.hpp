#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "flmig/graph.hpp"
#include "flmig/partition.hpp"
#include "flmig/quality.hpp"

namespace flmig {

struct LocalMoveStats {
  std::size_t moves = 0;
  std::uint64_t gain_evaluations = 0;
};

/// Best neighbor community for v, or its own community when no move has positive gain.
struct BestMove {
  CommunityId community;
  double gain;
};

/**
 * Argmax of the move gain over communities adjacent to v. Ties among the
 * maximal positive gains go to the smallest community id.
 */
inline BestMove best_neighbor_move(const Graph& g, const Partition& p, NodeId v, const NeighborCommunityScan& scan,
                                   Resolution rho, std::uint64_t* evaluations = nullptr) {
  const CommunityId from = p.community_of(v);
  const Weight d = g.degree(v);
  const Weight edge_from = scan.weight_to(from);
  const Weight degree_from = p.total_degree(from) - d;
  BestMove best{from, 0.0};
  for (const auto& link : scan.links) {
    if (link.community == from) continue;
    const double gain =
        move_gain(link.weight, p.total_degree(link.community), edge_from, degree_from, d, g.total_weight_2m(), rho);
    if (evaluations) ++*evaluations;
    if (gain > best.gain || (gain == best.gain && best.community != from && link.community < best.community))
      best = {link.community, gain};
  }
  return best;
}

/**
 * Queue-driven local move. Nodes are processed FIFO starting from
 * `initial_queue`; a node that moves re-enqueues its neighbors outside the
 * chosen community. A move also shifts the total degree of two communities,
 * which can open an improving move for a node that is not a neighbor, so once
 * the queue drains every node is checked again and those with an improving
 * move are enqueued. On return no node has a positive-gain move into a
 * neighboring community. Nodes without neighbors are never enqueued.
 */
inline LocalMoveStats fast_local_move(const Graph& g, Partition& p, Resolution rho,
                                      std::span<const NodeId> initial_queue) {
  LocalMoveStats stats;
  std::deque<NodeId> queue;
  std::vector<char> queued(g.node_count(), 0);
  auto push = [&](NodeId v) {
    if (queued[v] || g.neighbors(v).empty()) return;
    queued[v] = 1;
    queue.push_back(v);
  };
  for (NodeId v : initial_queue) push(v);

  NeighborScanner scanner;
  while (!queue.empty()) {
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      queued[v] = 0;
      const auto& scan = scanner.scan(g, p, v);
      const BestMove best = best_neighbor_move(g, p, v, scan, rho, &stats.gain_evaluations);
      if (best.community == p.community_of(v)) continue;
      p.move_node(g, v, best.community, scan);
      ++stats.moves;
      for (const auto& nb : g.neighbors(v))
        if (p.community_of(nb.node) != best.community) push(nb.node);
    }
    if (stats.moves == 0) break;  // nothing changed, the initial pass already checked every queued node
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.neighbors(v).empty()) continue;
      const auto& scan = scanner.scan(g, p, v);
      if (best_neighbor_move(g, p, v, scan, rho, &stats.gain_evaluations).community != p.community_of(v)) push(v);
    }
  }
  return stats;
}

/**
 * Classic Louvain phase one: full passes over `order` until a pass makes no
 * move.
 */
inline LocalMoveStats sweep_local_move(const Graph& g, Partition& p, Resolution rho, std::span<const NodeId> order) {
  LocalMoveStats stats;
  NeighborScanner scanner;
  bool moved = true;
  while (moved) {
    moved = false;
    for (NodeId v : order) {
      if (g.neighbors(v).empty()) continue;
      const auto& scan = scanner.scan(g, p, v);
      const BestMove best = best_neighbor_move(g, p, v, scan, rho, &stats.gain_evaluations);
      if (best.community == p.community_of(v)) continue;
      p.move_node(g, v, best.community, scan);
      ++stats.moves;
      moved = true;
    }
  }
  return stats;
}

/// Splits every internally disconnected community into its components. Returns the nodes of split communities.
inline std::vector<NodeId> split_disconnected(const Graph& g, Partition& p) {
  std::vector<NodeId> affected;
  NeighborScanner scanner;
  const auto groups = p.members();
  for (const auto& group : groups) {
    if (group.size() < 2) continue;
    auto components = connected_components(g, group);
    if (components.size() < 2) continue;
    affected.insert(affected.end(), group.begin(), group.end());
    // The component holding the smallest node keeps the id.
    for (std::size_t i = 1; i < components.size(); ++i) {
      const CommunityId fresh = p.take_empty_community();
      for (NodeId v : components[i]) p.move_node(g, v, fresh, scanner.scan(g, p, v));
    }
  }
  std::sort(affected.begin(), affected.end());
  return affected;
}

/**
 * Repeats {split disconnected communities; local move over the affected
 * nodes} until every community induces a connected subgraph.
 */
inline LocalMoveStats refine_communities(const Graph& g, Partition& p, Resolution rho = {}) {
  LocalMoveStats total;
  for (;;) {
    const auto affected = split_disconnected(g, p);
    if (affected.empty()) break;
    const auto stats = fast_local_move(g, p, rho, affected);
    total.moves += stats.moves;
    total.gain_evaluations += stats.gain_evaluations;
  }
  return total;
}

}  // namespace flmig
