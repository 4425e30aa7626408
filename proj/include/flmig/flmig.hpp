#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flmig/condense.hpp"
#include "flmig/graph.hpp"
#include "flmig/local_move.hpp"
#include "flmig/partition.hpp"
#include "flmig/quality.hpp"
#include "flmig/result.hpp"
#include "flmig/rng.hpp"

namespace flmig {

/// Tunables of one iterated-greedy run.
struct RunConfig {
  double beta = 0.5;        // fraction of nodes ejected per destruction
  double epsilon = 0.01;    // softness of the random neighbor-community choice
  Resolution rho{};
  std::size_t stall_limit = 100;     // outer iterations without a new best before stopping
  std::size_t max_iterations = 0;    // hard cap on outer iterations, 0 = none
  std::uint64_t seed = 1;
  double t0_factor = 0.025;          // T0 = t0_factor * Q(initial solution)
  double cooling = 0.9;
  double min_temperature = 1e-9;

  void validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (stall_limit == 0) throw std::invalid_argument("stall limit must be positive");
    if (!(t0_factor > 0.0)) throw std::invalid_argument("t0 factor must be positive");
    if (!(cooling > 0.0 && cooling < 1.0)) throw std::invalid_argument("cooling must lie in (0, 1)");
    if (!(min_temperature > 0.0)) throw std::invalid_argument("minimum temperature must be positive");
  }
};

/// Singleton start improved by one fast local move over a random node order.
inline Partition generate_initial_solution(const Graph& g, Resolution rho, Rng& rng,
                                           LocalMoveStats* stats = nullptr) {
  if (!(g.total_weight_2m() > 0.0)) throw UndefinedModularity();
  Partition p(g);
  const auto order = rng.permutation<NodeId>(g.node_count());
  const auto s = fast_local_move(g, p, rho, order);
  if (stats) *stats = s;
  return p;
}

/// Number of nodes a destruction ejects: round(beta * n), at least 1 when beta > 0 and n > 0.
inline std::size_t destruction_size(double beta, std::size_t n) {
  if (!(beta > 0.0) || n == 0) return 0;
  const auto k = static_cast<std::size_t>(std::llround(beta * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

/**
 * Moves destruction_size(beta, n) nodes, sampled uniformly without
 * replacement, into fresh singleton communities. Returns them in removal
 * order; an empty list means nothing was removed.
 */
inline std::vector<NodeId> destruct(const Graph& g, Partition& p, double beta, Rng& rng) {
  const std::size_t n = g.node_count();
  const std::size_t count = destruction_size(beta, n);
  std::vector<NodeId> removed;
  if (count == 0) return removed;
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  removed.reserve(count);
  NeighborScanner scanner;
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + rng.below(n - i)]);
    const NodeId v = pool[i];
    removed.push_back(v);
    if (p.size(p.community_of(v)) > 1) p.move_node(g, v, p.take_empty_community(), scanner.scan(g, p, v));
  }
  return removed;
}

struct CandidateGain {
  CommunityId community;
  double gain;
};

/**
 * Samples a community with probability proportional to exp(gain / epsilon)
 * among candidates with gain >= 0. Returns nullopt when none is admissible.
 */
inline std::optional<CommunityId> select_random_community(std::span<const CandidateGain> candidates, double epsilon,
                                                          Rng& rng) {
  double top = -1.0;
  for (const auto& c : candidates)
    if (c.gain >= 0.0) top = std::max(top, c.gain);
  if (top < 0.0) return std::nullopt;

  // Shifting by the maximum leaves the ratios unchanged and keeps exp() finite.
  double total = 0.0;
  std::vector<double> weights(candidates.size(), 0.0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].gain < 0.0) continue;
    weights[i] = std::exp((candidates[i].gain - top) / epsilon);
    total += weights[i];
  }
  const double r = rng.uniform() * total;
  double acc = 0.0;
  std::optional<CommunityId> last;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].gain < 0.0) continue;
    acc += weights[i];
    last = candidates[i].community;
    if (r < acc) return last;
  }
  return last;
}

struct ReconstructStats {
  std::size_t inserted = 0;
  std::size_t condensation_rounds = 0;
  std::uint64_t gain_evaluations = 0;
};

/// Relabels `p` so that every node follows its super-node's community in `coarse`.
inline void project_condensed(const Graph& g, Partition& p, const CondensedGraph& condensed, const Partition& coarse) {
  std::vector<CommunityId> assignment(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v)
    assignment[v] = coarse.community_of(condensed.node_of_community[p.community_of(v)]);
  p = Partition::from_assignment(g, assignment);
}

/**
 * Reinserts the ejected nodes, then alternates refinement, condensation and a
 * fast local move on the condensed graph while Q keeps improving.
 */
inline ReconstructStats reconstruct(const Graph& g, Partition& p, std::span<const NodeId> removed,
                                    const RunConfig& cfg, Rng& rng) {
  ReconstructStats stats;
  NeighborScanner scanner;

  // Random neighbor move for each ejected node, in random order.
  std::vector<NodeId> order(removed.begin(), removed.end());
  rng.shuffle(order);
  std::vector<CandidateGain> candidates;
  for (NodeId v : order) {
    const auto& scan = scanner.scan(g, p, v);
    const CommunityId from = p.community_of(v);
    const Weight d = g.degree(v);
    const Weight edge_from = scan.weight_to(from);
    const Weight degree_from = p.total_degree(from) - d;
    candidates.clear();
    double top = 0.0;
    for (const auto& link : scan.links) {
      if (link.community == from) continue;
      const double gain = move_gain(link.weight, p.total_degree(link.community), edge_from, degree_from, d,
                                    g.total_weight_2m(), cfg.rho);
      ++stats.gain_evaluations;
      candidates.push_back({link.community, gain});
      top = std::max(top, gain);
    }
    if (!(top > 0.0)) continue;
    if (auto target = select_random_community(candidates, cfg.epsilon, rng)) {
      p.move_node(g, v, *target, scan);
      ++stats.inserted;
    }
  }

  // Refine, condense, local move on the condensed graph, until Q stops rising.
  for (;;) {
    const double q_before = modularity(g, p, cfg.rho);
    stats.gain_evaluations += refine_communities(g, p, cfg.rho).gain_evaluations;
    const CondensedGraph condensed = condense(g, p);
    Partition coarse(condensed.graph);
    const auto coarse_order = rng.permutation<NodeId>(condensed.graph.node_count());
    const auto moved = fast_local_move(condensed.graph, coarse, cfg.rho, coarse_order);
    stats.gain_evaluations += moved.gain_evaluations;
    ++stats.condensation_rounds;
    if (moved.moves > 0) project_condensed(g, p, condensed, coarse);
    const double q_after = modularity(g, p, cfg.rho);
    if (!(q_after > q_before)) break;
  }
  // The last round may have merged through a bridge node; make sure every community is connected.
  stats.gain_evaluations += refine_communities(g, p, cfg.rho).gain_evaluations;
  return stats;
}

/// Simulated-annealing acceptance: always for an improvement, else with probability exp(delta / T).
inline bool accept(double candidate_q, double incumbent_q, double temperature, Rng& rng) {
  if (candidate_q > incumbent_q) return true;
  return rng.uniform() < std::exp((candidate_q - incumbent_q) / temperature);
}

/// Initial temperature for a starting modularity.
inline double initial_temperature(const RunConfig& cfg, double initial_q) {
  return std::max(cfg.t0_factor * initial_q, cfg.min_temperature);
}

/**
 * The fast local move iterated greedy run: initial solution, then repeated
 * {destruct; reconstruct; accept or reject} until `stall_limit` consecutive
 * iterations bring no new best (or `max_iterations` is hit).
 *
 * Random draws come from a single stream seeded by cfg.seed, in this order:
 * initial node order, then per iteration destruction sample, reinsertion
 * order, community choices, condensed-level node orders and the acceptance
 * draw. Equal seeds give identical results.
 */
inline RunResult run_flmig(const Graph& g, const RunConfig& cfg) {
  cfg.validate();
  if (!(g.total_weight_2m() > 0.0)) throw UndefinedModularity();
  Stopwatch clock;
  Rng rng(cfg.seed);
  RunResult result;

  LocalMoveStats init_stats;
  Partition current = generate_initial_solution(g, cfg.rho, rng, &init_stats);
  result.gain_evaluations += init_stats.gain_evaluations;
  double q_current = modularity(g, current, cfg.rho);
  Partition best = current;
  double q_best = q_current;
  double temperature = initial_temperature(cfg, q_current);
  result.times.initial_s = clock.seconds();
  result.trace.push_back({0, clock.seconds(), q_current, q_best, temperature});

  std::size_t stall = 0;
  std::size_t iteration = 0;
  while (stall < cfg.stall_limit && (cfg.max_iterations == 0 || iteration < cfg.max_iterations)) {
    ++iteration;
    Partition candidate = current;

    const double t0 = clock.seconds();
    const auto removed = destruct(g, candidate, cfg.beta, rng);
    const double t1 = clock.seconds();
    const auto rebuilt = reconstruct(g, candidate, removed, cfg, rng);
    const double t2 = clock.seconds();
    result.times.destruction_s += t1 - t0;
    result.times.reconstruction_s += t2 - t1;
    result.gain_evaluations += rebuilt.gain_evaluations;

    const double q_candidate = modularity(g, candidate, cfg.rho);
    if (accept(q_candidate, q_current, temperature, rng)) {
      current = std::move(candidate);
      q_current = q_candidate;
    }
    if (q_current > q_best) {
      best = current;
      q_best = q_current;
      stall = 0;
    } else {
      ++stall;
    }
    temperature = std::max(temperature * cfg.cooling, cfg.min_temperature);
    result.trace.push_back({iteration, clock.seconds(), q_current, q_best, temperature});
  }

  result.best_partition = best.dense_labels();
  result.best_q = q_best;
  result.iterations = iteration;
  result.times.total_s = clock.seconds();
  return result;
}

}  // namespace flmig
