#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flmig/condense.hpp"
#include "flmig/flmig.hpp"
#include "flmig/local_move.hpp"
#include "flmig/quality.hpp"
#include "flmig/result.hpp"
#include "flmig/rng.hpp"

namespace flmig {

enum class Algorithm { flmig, louvain, louvain_prune, lpa };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::flmig: return "flmig";
    case Algorithm::louvain: return "louvain";
    case Algorithm::louvain_prune: return "louvain-prune";
    case Algorithm::lpa: return "lpa";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view name) {
  if (name == "flmig") return Algorithm::flmig;
  if (name == "louvain") return Algorithm::louvain;
  if (name == "louvain-prune" || name == "louvain_prune") return Algorithm::louvain_prune;
  if (name == "lpa") return Algorithm::lpa;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

namespace detail {

enum class LevelMove { sweep, queue };

/// Multilevel Louvain driver; the per-level local move is either full sweeps or the pruned queue.
inline RunResult multilevel(const Graph& g, const RunConfig& cfg, LevelMove kind) {
  if (!(g.total_weight_2m() > 0.0)) throw UndefinedModularity();
  Stopwatch clock;
  Rng rng(cfg.seed);
  RunResult result;

  // Community of every original node, expressed as a node id of `level`.
  std::vector<CommunityId> assignment(g.node_count());
  std::iota(assignment.begin(), assignment.end(), CommunityId{0});
  Graph level = g;
  double q = modularity(g, Partition(g), cfg.rho);
  result.trace.push_back({0, clock.seconds(), q, q, 0.0});

  for (;;) {
    Partition p(level);
    const auto order = rng.permutation<NodeId>(level.node_count());
    const auto stats = kind == LevelMove::sweep ? sweep_local_move(level, p, cfg.rho, order)
                                                : fast_local_move(level, p, cfg.rho, order);
    result.gain_evaluations += stats.gain_evaluations;
    if (stats.moves == 0) break;
    ++result.iterations;
    CondensedGraph condensed = condense(level, p);
    for (auto& c : assignment) c = condensed.node_of_community[p.community_of(c)];
    level = std::move(condensed.graph);
    q = modularity(g, assignment, cfg.rho);
    result.trace.push_back({result.iterations, clock.seconds(), q, q, 0.0});
  }

  result.best_partition = Partition::from_assignment(g, assignment).dense_labels();
  result.best_q = modularity(g, assignment, cfg.rho);
  result.times.total_s = clock.seconds();
  return result;
}

}  // namespace detail

/// Louvain: sweep-based local moves to a fixed point, condense, repeat until a level makes no move.
inline RunResult run_louvain(const Graph& g, const RunConfig& cfg) {
  return detail::multilevel(g, cfg, detail::LevelMove::sweep);
}

/// Louvain with the sweep replaced by the pruned (queue-driven) local move at every level.
inline RunResult run_louvain_prune(const Graph& g, const RunConfig& cfg) {
  return detail::multilevel(g, cfg, detail::LevelMove::queue);
}

inline constexpr std::size_t kLpaMaxRounds = 100;

/**
 * Asynchronous label propagation. Each round visits nodes in a fresh random
 * order and adopts the label of maximal incident weight, ties broken
 * uniformly at random. Stops once every node already holds a maximal label,
 * or after kLpaMaxRounds rounds.
 */
inline RunResult run_lpa(const Graph& g, const RunConfig& cfg) {
  Stopwatch clock;
  Rng rng(cfg.seed);
  RunResult result;
  const std::size_t n = g.node_count();
  std::vector<CommunityId> label(n);
  std::iota(label.begin(), label.end(), CommunityId{0});

  std::vector<Weight> weight_of(n, 0.0);
  std::vector<char> marked(n, 0);
  std::vector<CommunityId> seen;
  std::vector<CommunityId> ties;

  // Fills `ties` with the labels of maximal weight around v.
  auto tally = [&](NodeId v) {
    seen.clear();
    for (const auto& nb : g.neighbors(v)) {
      const CommunityId l = label[nb.node];
      if (!marked[l]) {
        marked[l] = 1;
        seen.push_back(l);
      }
      weight_of[l] += nb.weight;
    }
    Weight top = 0.0;
    for (CommunityId l : seen) top = std::max(top, weight_of[l]);
    ties.clear();
    for (CommunityId l : seen)
      if (weight_of[l] == top) ties.push_back(l);
    for (CommunityId l : seen) {
      weight_of[l] = 0.0;
      marked[l] = 0;
    }
    std::sort(ties.begin(), ties.end());
  };

  auto stable = [&] {
    for (NodeId v = 0; v < n; ++v) {
      if (g.neighbors(v).empty()) continue;
      tally(v);
      if (!std::binary_search(ties.begin(), ties.end(), label[v])) return false;
    }
    return true;
  };

  while (result.iterations < kLpaMaxRounds) {
    ++result.iterations;
    const auto order = rng.permutation<NodeId>(n);
    for (NodeId v : order) {
      if (g.neighbors(v).empty()) continue;
      tally(v);
      label[v] = ties.size() == 1 ? ties.front() : ties[rng.below(ties.size())];
    }
    if (stable()) break;
  }

  const Partition p = Partition::from_assignment(g, label);
  result.best_partition = p.dense_labels();
  result.best_q = g.total_weight_2m() > 0.0 ? modularity(g, p, cfg.rho) : 0.0;
  result.times.total_s = clock.seconds();
  result.trace.push_back({result.iterations, result.times.total_s, result.best_q, result.best_q, 0.0});
  return result;
}

inline RunResult run_algorithm(Algorithm algorithm, const Graph& g, const RunConfig& cfg) {
  switch (algorithm) {
    case Algorithm::flmig: return run_flmig(g, cfg);
    case Algorithm::louvain: return run_louvain(g, cfg);
    case Algorithm::louvain_prune: return run_louvain_prune(g, cfg);
    case Algorithm::lpa: return run_lpa(g, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace flmig
