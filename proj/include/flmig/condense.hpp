#pragma once

#include <vector>

#include "flmig/graph.hpp"
#include "flmig/partition.hpp"

namespace flmig {

struct CondensedGraph {
  Graph graph;
  /// Super-node of each community id; kNoCommunity for unused ids.
  std::vector<NodeId> node_of_community;
};

/**
 * Collapses every community of `p` into one node. Cross-community weights are
 * summed; the internal weight of a community (self-loops included) becomes
 * the super-node's self-loop, so Q(condensed, singletons) == Q(g, p).
 * Super-node ids follow first occurrence of their community by node id.
 */
inline CondensedGraph condense(const Graph& g, const Partition& p) {
  CondensedGraph out;
  out.node_of_community.assign(p.id_capacity(), kNoCommunity);
  NodeId next = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    NodeId& s = out.node_of_community[p.community_of(v)];
    if (s == kNoCommunity) s = next++;
  }

  GraphBuilder builder(next);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const NodeId su = out.node_of_community[p.community_of(u)];
    if (g.self_loop(u) != 0.0) builder.add_edge(su, su, g.self_loop(u));
    for (const auto& nb : g.neighbors(u)) {
      if (nb.node < u) continue;
      builder.add_edge(su, out.node_of_community[p.community_of(nb.node)], nb.weight);
    }
  }
  out.graph = std::move(builder).build();
  return out;
}

}  // namespace flmig
