#include <gtest/gtest.h>

#include <fstream>
#include <iostream>

#include "flmig/baselines.hpp"
#include "oracles.hpp"

using namespace flmig;

namespace {

Graph karate() {
  std::ifstream in(oracle::data_path("karate.txt"));
  return parse_edge_list(in).graph;
}

std::size_t count_communities(const std::vector<CommunityId>& dense) {
  return dense.empty() ? 0 : *std::max_element(dense.begin(), dense.end()) + 1;
}

}  // namespace

TEST(Algorithm, NamesRoundTrip) {
  for (auto a : {Algorithm::flmig, Algorithm::louvain, Algorithm::louvain_prune, Algorithm::lpa})
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW(parse_algorithm("leiden"), std::invalid_argument);
}

TEST(Louvain, TwoTriangles) {
  const Graph g = oracle::two_triangles();
  EXPECT_DOUBLE_EQ(run_louvain(g, RunConfig{}).best_q, 0.5);
  EXPECT_DOUBLE_EQ(run_louvain_prune(g, RunConfig{}).best_q, 0.5);
}

TEST(Louvain, KarateBestOfTen) {
  const Graph g = karate();
  double best = -1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RunConfig cfg;
    cfg.seed = seed;
    const auto r = run_louvain(g, cfg);
    EXPECT_NEAR(r.best_q, oracle::modularity_reference(g, r.best_partition), 1e-12);
    best = std::max(best, r.best_q);
  }
  EXPECT_GE(best, 0.40);
}

TEST(Louvain, QNonDecreasingAcrossLevels) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_graph(rng, 100, 0.05);
    if (g.total_weight_2m() == 0.0) continue;
    RunConfig cfg;
    cfg.seed = rng.next();
    for (auto fn : {run_louvain, run_louvain_prune}) {
      const auto r = fn(g, cfg);
      for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i].q_best, r.trace[i - 1].q_best);
      EXPECT_NEAR(r.best_q, oracle::modularity_reference(g, r.best_partition), 1e-12);
      EXPECT_TRUE(Partition::from_assignment(g, r.best_partition).audit(g));
    }
  }
}

TEST(LouvainPrune, FewerGainEvaluationsThanSweeps) {
  Rng rng(2);
  const Graph g = oracle::random_graph(rng, 500, 0.02);
  RunConfig cfg;
  cfg.seed = 9;
  const auto sweep = run_louvain(g, cfg);
  const auto pruned = run_louvain_prune(g, cfg);
  EXPECT_LT(pruned.gain_evaluations, sweep.gain_evaluations);
}

TEST(LouvainPrune, RecordsDisconnectedCommunityFrequency) {
  Rng rng(3);
  int disconnected = 0, runs = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_graph(rng, 80, 0.05);
    if (g.total_weight_2m() == 0.0) continue;
    RunConfig cfg;
    cfg.seed = rng.next();
    const auto r = run_louvain_prune(g, cfg);
    disconnected += !all_communities_connected(g, Partition::from_assignment(g, r.best_partition));
    ++runs;
  }
  RecordProperty("disconnected_runs", disconnected);
  std::cout << "louvain-prune runs with a disconnected community: " << disconnected << "/" << runs << '\n';
  SUCCEED();
}

TEST(Lpa, TwoTriangles) {
  const auto r = run_lpa(oracle::two_triangles(), RunConfig{});
  EXPECT_EQ(count_communities(r.best_partition), 2u);
  EXPECT_DOUBLE_EQ(r.best_q, 0.5);
}

TEST(Lpa, CompleteGraph) {
  GraphBuilder b(5);
  for (NodeId u = 0; u < 5; ++u)
    for (NodeId v = u + 1; v < 5; ++v) b.add_edge(u, v, 1.0);
  const Graph g = std::move(b).build();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RunConfig cfg;
    cfg.seed = seed;
    EXPECT_EQ(count_communities(run_lpa(g, cfg).best_partition), 1u);
  }
}

TEST(Lpa, DeterministicAndConsistent) {
  const Graph g = karate();
  RunConfig cfg;
  cfg.seed = 5;
  const auto a = run_lpa(g, cfg);
  const auto b = run_lpa(g, cfg);
  EXPECT_EQ(a.best_partition, b.best_partition);
  EXPECT_NEAR(a.best_q, oracle::modularity_reference(g, a.best_partition), 1e-12);
  EXPECT_LE(a.iterations, kLpaMaxRounds);
}

TEST(Lpa, StopsAtMajorityLabels) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_graph(rng, 60, 0.1);
    RunConfig cfg;
    cfg.seed = rng.next();
    const auto r = run_lpa(g, cfg);
    if (r.iterations == kLpaMaxRounds) continue;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.neighbors(v).empty()) continue;
      std::map<CommunityId, double> w;
      for (const auto& nb : g.neighbors(v)) w[r.best_partition[nb.node]] += nb.weight;
      double top = 0.0;
      for (const auto& [c, x] : w) top = std::max(top, x);
      EXPECT_EQ(w[r.best_partition[v]], top);
    }
  }
}

TEST(RunAlgorithm, Dispatch) {
  const Graph g = oracle::two_triangles();
  RunConfig cfg;
  cfg.stall_limit = 3;
  for (auto a : {Algorithm::flmig, Algorithm::louvain, Algorithm::louvain_prune, Algorithm::lpa})
    EXPECT_DOUBLE_EQ(run_algorithm(a, g, cfg).best_q, 0.5) << to_string(a);
}
