#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace flmig {

using NodeId = std::uint32_t;
using Weight = double;

/// Raised on malformed edge-list / partition input. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class GraphError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Neighbor {
  NodeId node;
  Weight weight;
};

/**
 * Immutable undirected weighted graph in CSR form.
 *
 * A self-loop of weight w is stored outside the adjacency lists. It adds 2w
 * to the node's degree and w to the internal weight of whatever community
 * holds the node, which is what keeps modularity invariant under
 * condensation.
 */
class Graph {
public:
  Graph() = default;

  std::size_t node_count() const noexcept { return degree_.size(); }

  /// Number of distinct undirected non-loop edges.
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const Neighbor> neighbors(NodeId v) const noexcept {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  Weight degree(NodeId v) const noexcept { return degree_[v]; }
  Weight self_loop(NodeId v) const noexcept { return self_loop_[v]; }
  std::span<const Weight> degrees() const noexcept { return degree_; }

  /// 2m: the sum of all degrees.
  Weight total_weight_2m() const noexcept { return total_2m_; }

  bool has_self_loops() const noexcept {
    return std::any_of(self_loop_.begin(), self_loop_.end(), [](Weight w) { return w != 0.0; });
  }

  friend class GraphBuilder;

private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> targets_;
  std::vector<Weight> self_loop_;
  std::vector<Weight> degree_;
  Weight total_2m_ = 0.0;
};

/// How repeated (u, v) pairs are combined.
enum class DuplicateEdges { sum, keep_first };

/// Accumulates edges (merging duplicates) and emits a Graph.
class GraphBuilder {
public:
  explicit GraphBuilder(std::size_t node_count = 0, DuplicateEdges duplicates = DuplicateEdges::sum)
      : loops_(node_count, 0.0), node_count_(node_count), duplicates_(duplicates) {}

  void ensure_nodes(std::size_t n) {
    if (n > node_count_) {
      node_count_ = n;
      loops_.resize(n, 0.0);
    }
  }

  std::size_t node_count() const noexcept { return node_count_; }

  void add_edge(NodeId u, NodeId v, Weight w) {
    if (w < 0.0) throw GraphError("negative edge weight");
    ensure_nodes(std::size_t{std::max(u, v)} + 1);
    if (u == v) {
      if (duplicates_ == DuplicateEdges::sum || !loop_seen(u)) loops_[u] += w;
      return;
    }
    if (u > v) std::swap(u, v);
    edges_.push_back({u, v, w});
  }

  Graph build() && {
    std::stable_sort(edges_.begin(), edges_.end(), [](const RawEdge& a, const RawEdge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    // merge duplicates
    std::vector<RawEdge> merged;
    merged.reserve(edges_.size());
    for (const auto& e : edges_) {
      if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
        if (duplicates_ == DuplicateEdges::sum) merged.back().w += e.w;
      } else {
        merged.push_back(e);
      }
    }

    Graph g;
    const std::size_t n = node_count_;
    std::vector<std::size_t> count(n + 1, 0);
    for (const auto& e : merged) {
      ++count[e.u + 1];
      ++count[e.v + 1];
    }
    std::partial_sum(count.begin(), count.end(), count.begin());
    g.offsets_ = count;
    g.targets_.resize(merged.size() * 2);
    std::vector<std::size_t> cursor(count.begin(), count.end() - 1);
    // Sorted (u, v) input keeps every adjacency list ordered by neighbor id.
    for (const auto& e : merged) g.targets_[cursor[e.u]++] = {e.v, e.w};
    for (const auto& e : merged) g.targets_[cursor[e.v]++] = {e.u, e.w};
    for (NodeId v = 0; v < n; ++v) {
      auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }

    g.self_loop_ = std::move(loops_);
    g.degree_.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
      Weight d = 2.0 * g.self_loop_[v];
      for (const auto& nb : g.neighbors(v)) d += nb.weight;
      g.degree_[v] = d;
    }
    g.total_2m_ = std::accumulate(g.degree_.begin(), g.degree_.end(), 0.0);
    return g;
  }

private:
  struct RawEdge {
    NodeId u, v;
    Weight w;
  };
  bool loop_seen(NodeId u) {
    if (loop_seen_.size() < node_count_) loop_seen_.resize(node_count_, 0);
    bool seen = loop_seen_[u];
    loop_seen_[u] = 1;
    return seen;
  }

  std::vector<RawEdge> edges_;
  std::vector<Weight> loops_;
  std::vector<char> loop_seen_;
  std::size_t node_count_;
  DuplicateEdges duplicates_;
};

/// Bijection between external string labels and dense internal ids.
class NodeLabelMap {
public:
  /// Returns the id for `label`, assigning the next dense id on first sight.
  NodeId intern(const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return it->second;
  }

  const std::string& label(NodeId id) const { return labels_.at(id); }

  bool contains(const std::string& label) const { return index_.contains(label); }

  NodeId id(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw GraphError("unknown node label '" + label + "'");
    return it->second;
  }

  std::size_t size() const noexcept { return labels_.size(); }

  /// Identity map "0".."n-1".
  static NodeLabelMap identity(std::size_t n) {
    NodeLabelMap map;
    for (std::size_t i = 0; i < n; ++i) map.intern(std::to_string(i));
    return map;
  }

private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

struct EdgeListOptions {
  bool weighted = false;
  bool allow_self_loops = false;
  DuplicateEdges duplicates = DuplicateEdges::sum;
};

struct LabeledGraph {
  Graph graph;
  NodeLabelMap labels;
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

inline bool is_comment_or_blank(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#' || line[pos] == '%';
}

inline Weight parse_weight(const std::string& tok, std::size_t line_no) {
  std::size_t used = 0;
  double w = 0.0;
  try {
    w = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line_no, "non-numeric weight '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError(line_no, "non-numeric weight '" + tok + "'");
  if (!(w >= 0.0)) throw ParseError(line_no, "negative weight '" + tok + "'");
  return w;
}

}  // namespace detail

/**
 * Reads "u v" or "u v w" lines. Labels are arbitrary tokens, interned in
 * first-appearance order. Without `weighted` a third column is still
 * validated but every edge counts as 1.
 */
inline LabeledGraph parse_edge_list(std::istream& in, const EdgeListOptions& options = {}) {
  LabeledGraph out;
  GraphBuilder builder(0, options.duplicates);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    auto tokens = detail::split_tokens(line);
    if (tokens.size() != 2 && tokens.size() != 3)
      throw ParseError(line_no, "expected 2 or 3 tokens, got " + std::to_string(tokens.size()));
    Weight w = 1.0;
    if (tokens.size() == 3) {
      Weight parsed = detail::parse_weight(tokens[2], line_no);
      if (options.weighted) w = parsed;
    }
    NodeId u = out.labels.intern(tokens[0]);
    NodeId v = out.labels.intern(tokens[1]);
    if (u == v && !options.allow_self_loops) throw ParseError(line_no, "self-loop on '" + tokens[0] + "'");
    builder.ensure_nodes(out.labels.size());
    builder.add_edge(u, v, w);
  }
  out.graph = std::move(builder).build();
  return out;
}

inline LabeledGraph parse_edge_list(const std::string& text, const EdgeListOptions& options = {}) {
  std::istringstream in(text);
  return parse_edge_list(in, options);
}

/// Writes "label_u label_v weight" lines ordered by internal id, self-loops included.
inline void write_edge_list(std::ostream& out, const Graph& g, const NodeLabelMap& labels) {
  out << "# n " << g.node_count() << " m " << g.edge_count() << '\n';
  out.precision(17);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.self_loop(u) != 0.0) out << labels.label(u) << ' ' << labels.label(u) << ' ' << g.self_loop(u) << '\n';
    for (const auto& nb : g.neighbors(u))
      if (u < nb.node) out << labels.label(u) << ' ' << labels.label(nb.node) << ' ' << nb.weight << '\n';
  }
}

/// Maximal connected subsets of `subset`, using only edges with both ends inside it.
inline std::vector<std::vector<NodeId>> connected_components(const Graph& g, std::span<const NodeId> subset) {
  std::unordered_map<NodeId, std::size_t> slot;
  slot.reserve(subset.size() * 2);
  for (std::size_t i = 0; i < subset.size(); ++i) slot.emplace(subset[i], i);

  std::vector<char> seen(subset.size(), 0);
  std::vector<std::vector<NodeId>> components;
  std::vector<NodeId> stack;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (seen[i]) continue;
    seen[i] = 1;
    auto& comp = components.emplace_back();
    stack.push_back(subset[i]);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const auto& nb : g.neighbors(v)) {
        auto it = slot.find(nb.node);
        if (it != slot.end() && !seen[it->second]) {
          seen[it->second] = 1;
          stack.push_back(nb.node);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
  }
  return components;
}

inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  std::vector<NodeId> all(g.node_count());
  std::iota(all.begin(), all.end(), NodeId{0});
  return connected_components(g, all);
}

}  // namespace flmig
