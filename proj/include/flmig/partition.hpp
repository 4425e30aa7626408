#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "flmig/graph.hpp"

namespace flmig {

using CommunityId = std::uint32_t;
inline constexpr CommunityId kNoCommunity = std::numeric_limits<CommunityId>::max();

struct CommunityLink {
  CommunityId community;
  Weight weight;  // e_{v,C}: total edge weight from v into C, excluding v's self-loop
};

/// Communities adjacent to one node together with the edge weight into each.
struct NeighborCommunityScan {
  NodeId node = 0;
  std::vector<CommunityLink> links;  // first-appearance order along the adjacency list

  /// e_{v,C}; zero when C is not adjacent.
  Weight weight_to(CommunityId c) const noexcept {
    for (const auto& link : links)
      if (link.community == c) return link.weight;
    return 0.0;
  }
};

/**
 * Node-to-community assignment with per-community aggregates.
 *
 * Community ids live in [0, n). Ids of communities that become empty go to a
 * free list and are handed out again by take_empty_community().
 */
class Partition {
public:
  Partition() = default;

  /// Every node in its own community, community id == node id.
  explicit Partition(const Graph& g)
      : community_of_(g.node_count()),
        total_degree_(g.degrees().begin(), g.degrees().end()),
        internal_weight_(g.node_count()),
        size_(g.node_count(), 1),
        count_(g.node_count()) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      community_of_[v] = v;
      internal_weight_[v] = g.self_loop(v);
    }
  }

  /// Builds aggregates from an explicit assignment; labels must be < n.
  static Partition from_assignment(const Graph& g, std::span<const CommunityId> assignment) {
    const std::size_t n = g.node_count();
    if (assignment.size() != n) throw GraphError("assignment size does not match node count");
    Partition p;
    p.community_of_.assign(assignment.begin(), assignment.end());
    p.total_degree_.assign(n, 0.0);
    p.internal_weight_.assign(n, 0.0);
    p.size_.assign(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      CommunityId c = assignment[v];
      if (c >= n) throw GraphError("community id out of range");
      p.total_degree_[c] += g.degree(v);
      p.internal_weight_[c] += g.self_loop(v);
      ++p.size_[c];
      for (const auto& nb : g.neighbors(v))
        if (v < nb.node && assignment[nb.node] == c) p.internal_weight_[c] += nb.weight;
    }
    p.count_ = 0;
    for (CommunityId c = static_cast<CommunityId>(n); c-- > 0;) {
      if (p.size_[c] == 0)
        p.free_.push_back(c);
      else
        ++p.count_;
    }
    // Lowest free id is handed out first.
    std::sort(p.free_.begin(), p.free_.end(), std::greater<>());
    return p;
  }

  std::size_t node_count() const noexcept { return community_of_.size(); }
  /// Upper bound (exclusive) on community ids.
  std::size_t id_capacity() const noexcept { return size_.size(); }
  std::size_t community_count() const noexcept { return count_; }

  CommunityId community_of(NodeId v) const noexcept { return community_of_[v]; }
  std::span<const CommunityId> assignment() const noexcept { return community_of_; }

  Weight total_degree(CommunityId c) const noexcept { return total_degree_[c]; }
  Weight internal_weight(CommunityId c) const noexcept { return internal_weight_[c]; }
  std::size_t size(CommunityId c) const noexcept { return size_[c]; }
  bool empty(CommunityId c) const noexcept { return size_[c] == 0; }

  /// An id with no members; throws when every id is in use.
  CommunityId take_empty_community() const {
    if (free_.empty()) throw GraphError("no free community id");
    return free_.back();
  }

  /**
   * Moves v into `target` (possibly an empty community) and updates the
   * aggregates from the scan. Returns false, changing nothing, when v is
   * already there.
   */
  bool move_node(const Graph& g, NodeId v, CommunityId target, const NeighborCommunityScan& scan) {
    const CommunityId from = community_of_[v];
    if (from == target) return false;
    const Weight loop = g.self_loop(v);
    const Weight d = g.degree(v);

    internal_weight_[from] -= scan.weight_to(from) + loop;
    total_degree_[from] -= d;
    if (--size_[from] == 0) {
      // Exact reset; an empty community carries no weight.
      internal_weight_[from] = 0.0;
      total_degree_[from] = 0.0;
      free_.push_back(from);
      --count_;
    }

    if (size_[target] == 0) {
      auto it = std::find(free_.rbegin(), free_.rend(), target);
      free_.erase(std::next(it).base());
      ++count_;
    }
    internal_weight_[target] += scan.weight_to(target) + loop;
    total_degree_[target] += d;
    ++size_[target];
    community_of_[v] = target;
    return true;
  }

  /// Members of every non-empty community, indexed by community id.
  std::vector<std::vector<NodeId>> members() const {
    std::vector<std::vector<NodeId>> out(id_capacity());
    for (NodeId v = 0; v < node_count(); ++v) out[community_of_[v]].push_back(v);
    return out;
  }

  /// Community labels renumbered 0..k-1 in order of first occurrence by node id.
  std::vector<CommunityId> dense_labels() const {
    std::vector<CommunityId> remap(id_capacity(), kNoCommunity);
    std::vector<CommunityId> out(node_count());
    CommunityId next = 0;
    for (NodeId v = 0; v < node_count(); ++v) {
      CommunityId& r = remap[community_of_[v]];
      if (r == kNoCommunity) r = next++;
      out[v] = r;
    }
    return out;
  }

  /// Recounts every aggregate from the adjacency; true iff all match exactly.
  bool audit(const Graph& g) const {
    if (community_of_.size() != g.node_count()) return false;
    Partition fresh = from_assignment(g, community_of_);
    if (fresh.count_ != count_) return false;
    for (CommunityId c = 0; c < id_capacity(); ++c) {
      if (fresh.size_[c] != size_[c]) return false;
      if (fresh.total_degree_[c] != total_degree_[c]) return false;
      if (fresh.internal_weight_[c] != internal_weight_[c]) return false;
    }
    for (CommunityId c : free_)
      if (size_[c] != 0) return false;
    return free_.size() + count_ == id_capacity();
  }

private:
  std::vector<CommunityId> community_of_;
  std::vector<Weight> total_degree_;
  std::vector<Weight> internal_weight_;
  std::vector<std::size_t> size_;
  std::vector<CommunityId> free_;
  std::size_t count_ = 0;
};

inline Partition singleton_partition(const Graph& g) { return Partition(g); }

/// Reusable accumulator for neighbor-community scans; avoids per-call allocation.
class NeighborScanner {
public:
  const NeighborCommunityScan& scan(const Graph& g, const Partition& p, NodeId v) {
    if (slot_.size() < p.id_capacity()) slot_.assign(p.id_capacity(), kUnset);
    result_.node = v;
    result_.links.clear();
    for (const auto& nb : g.neighbors(v)) {
      CommunityId c = p.community_of(nb.node);
      std::size_t& s = slot_[c];
      if (s == kUnset) {
        s = result_.links.size();
        result_.links.push_back({c, 0.0});
      }
      result_.links[s].weight += nb.weight;
    }
    for (const auto& link : result_.links) slot_[link.community] = kUnset;
    return result_;
  }

private:
  static constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> slot_;
  NeighborCommunityScan result_;
};

inline NeighborCommunityScan scan_neighbor_communities(const Graph& g, const Partition& p, NodeId v) {
  NeighborScanner scanner;
  return scanner.scan(g, p, v);
}

inline bool is_community_connected(const Graph& g, const Partition& p, CommunityId c) {
  std::vector<NodeId> members;
  for (NodeId v = 0; v < p.node_count(); ++v)
    if (p.community_of(v) == c) members.push_back(v);
  if (members.empty()) return true;
  return connected_components(g, members).size() == 1;
}

inline bool all_communities_connected(const Graph& g, const Partition& p) {
  auto groups = p.members();
  for (const auto& group : groups)
    if (!group.empty() && connected_components(g, group).size() != 1) return false;
  return true;
}

/// Writes "node_label community_id" with dense, first-occurrence community ids.
inline void write_membership(std::ostream& out, std::span<const CommunityId> dense, const NodeLabelMap& labels) {
  for (NodeId v = 0; v < dense.size(); ++v) out << labels.label(v) << ' ' << dense[v] << '\n';
}

/**
 * Reads "node_label community" lines (this library's membership format, and
 * also the LFR community.dat layout). Community tokens are arbitrary and get
 * renumbered densely by first occurrence in node-id order. Every node in
 * `labels` must be covered exactly once.
 */
inline std::vector<CommunityId> read_membership(std::istream& in, const NodeLabelMap& labels) {
  std::vector<std::string> raw(labels.size());
  std::vector<char> seen(labels.size(), 0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    auto tokens = detail::split_tokens(line);
    if (tokens.size() != 2) throw ParseError(line_no, "expected 'node community', got " + std::to_string(tokens.size()) + " tokens");
    if (!labels.contains(tokens[0])) throw ParseError(line_no, "node '" + tokens[0] + "' is not in the graph");
    NodeId v = labels.id(tokens[0]);
    if (seen[v]) throw ParseError(line_no, "node '" + tokens[0] + "' listed twice");
    seen[v] = 1;
    raw[v] = tokens[1];
  }
  for (NodeId v = 0; v < labels.size(); ++v)
    if (!seen[v]) throw GraphError("node '" + labels.label(v) + "' has no community");

  std::unordered_map<std::string, CommunityId> ids;
  std::vector<CommunityId> out(labels.size());
  for (NodeId v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = ids.try_emplace(raw[v], static_cast<CommunityId>(ids.size()));
    out[v] = it->second;
  }
  return out;
}

}  // namespace flmig
