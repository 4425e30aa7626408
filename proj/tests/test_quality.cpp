#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "flmig/partition.hpp"
#include "flmig/quality.hpp"
#include "oracles.hpp"

using namespace flmig;

TEST(Modularity, AllInOneIsOneMinusRho) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_graph(rng, 20, 0.3, true, 0.1);
    if (g.total_weight_2m() == 0.0) continue;
    const std::vector<CommunityId> one(20, 0);
    EXPECT_NEAR(modularity(g, one), 0.0, 1e-15);
    EXPECT_NEAR(modularity(g, one, Resolution(1.5)), -0.5, 1e-15);
  }
}

TEST(Modularity, K2Singletons) {
  const Graph g = parse_edge_list("0 1\n").graph;
  EXPECT_DOUBLE_EQ(modularity(g, Partition(g)), -0.5);
  const std::vector<CommunityId> c{0, 1};
  EXPECT_DOUBLE_EQ(oracle::modularity_reference(g, c), -0.5);
}

TEST(Modularity, TwoTriangles) {
  const Graph g = oracle::two_triangles();
  const std::vector<CommunityId> c{0, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(modularity(g, c), 0.5);
  EXPECT_DOUBLE_EQ(oracle::modularity_reference(g, c), 0.5);
}

TEST(Modularity, EdgelessGraphThrows) {
  GraphBuilder b(3);
  const Graph g = std::move(b).build();
  EXPECT_THROW(modularity(g, Partition(g)), UndefinedModularity);
}

TEST(Modularity, ResolutionMustBePositive) {
  EXPECT_THROW(Resolution(0.0), std::invalid_argument);
  EXPECT_THROW(Resolution(-1.0), std::invalid_argument);
  EXPECT_EQ(Resolution().value(), 1.0);
}

TEST(Modularity, MatchesReferenceOnRandomPairs) {
  Rng rng(2);
  int checked = 0;
  while (checked < 500) {
    const std::size_t n = 2 + rng.below(63);
    const Graph g = oracle::random_graph(rng, n, 0.05 + 0.3 * rng.uniform(), checked % 2 == 0, 0.05);
    if (g.total_weight_2m() == 0.0) continue;
    const auto c = oracle::random_assignment(rng, n, 1 + rng.below(n));
    const double rho = checked % 5 == 0 ? 0.5 + rng.uniform() : 1.0;
    EXPECT_NEAR(modularity(g, c, Resolution(rho)), oracle::modularity_reference(g, c, rho), 1e-12);
    ++checked;
  }
}

TEST(Modularity, BoundedAndRelabelInvariant) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = oracle::random_graph(rng, 30, 0.15);
    if (g.total_weight_2m() == 0.0) continue;
    auto c = oracle::random_assignment(rng, 30, 6);
    const double q = modularity(g, c);
    EXPECT_GE(q, -1.0);
    EXPECT_LT(q, 1.0);
    std::vector<CommunityId> perm(30);
    std::iota(perm.begin(), perm.end(), CommunityId{0});
    rng.shuffle(perm);
    for (auto& x : c) x = perm[x];
    EXPECT_NEAR(modularity(g, c), q, 1e-15);
  }
}

TEST(ModularityGain, PathMoveIntoNeighbor) {
  // m = 2: Q goes from -(1 + 4 + 1)/16 to 1/2 - (9 + 1)/16, a gain of 1/4.
  const Graph g = parse_edge_list("0 1\n1 2\n").graph;
  const Partition p(g);
  EXPECT_DOUBLE_EQ(modularity_gain(g, p, 1, p.community_of(0), scan_neighbor_communities(g, p, 1)), 0.25);
  const std::vector<CommunityId> before{0, 1, 2}, after{0, 0, 2};
  EXPECT_DOUBLE_EQ(oracle::modularity_reference(g, after) - oracle::modularity_reference(g, before), 0.25);
}

TEST(ModularityGain, K2Merge) {
  const Graph g = parse_edge_list("0 1\n").graph;
  const Partition p(g);
  EXPECT_DOUBLE_EQ(modularity_gain(g, p, 0, p.community_of(1), scan_neighbor_communities(g, p, 0)), 0.5);
}

TEST(ModularityGain, OwnCommunityIsZero) {
  const Graph g = parse_edge_list("0 1\n").graph;
  const Partition p(g);
  EXPECT_EQ(modularity_gain(g, p, 0, p.community_of(0), scan_neighbor_communities(g, p, 0)), 0.0);
}

// The central consistency property: the incremental gain equals the global difference.
TEST(ModularityGain, EqualsGlobalDifference) {
  Rng rng(4);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t n = 2 + rng.below(63);
    const Graph g = oracle::random_graph(rng, n, 0.05 + 0.3 * rng.uniform(), checked % 3 == 0, checked % 4 == 0 ? 0.1 : 0.0);
    if (g.total_weight_2m() == 0.0) continue;
    auto c = oracle::random_assignment(rng, n, 1 + rng.below(std::min<std::size_t>(n, 8)));
    const Partition p = Partition::from_assignment(g, c);
    const NodeId v = static_cast<NodeId>(rng.below(n));
    // Target: an existing community (possibly not adjacent) or an empty one.
    CommunityId target = c[rng.below(n)];
    if (target == c[v] || rng.uniform() < 0.1) {
      if (p.size(c[v]) == 1 || p.community_count() == n) continue;
      target = p.take_empty_community();
    }
    const double rho = checked % 5 == 0 ? 0.5 + rng.uniform() : 1.0;
    const double gain = modularity_gain(g, p, v, target, scan_neighbor_communities(g, p, v), Resolution(rho));
    const double before = oracle::modularity_reference(g, c, rho);
    c[v] = target;
    const double after = oracle::modularity_reference(g, c, rho);
    EXPECT_NEAR(gain, after - before, 1e-12);
    ++checked;
  }
}

TEST(Nmi, IdenticalPartitions) {
  const std::vector<CommunityId> a{0, 0, 1, 1, 2};
  const std::vector<CommunityId> b{5, 5, 3, 3, 9};
  EXPECT_NEAR(nmi(a, a), 1.0, 1e-15);
  EXPECT_NEAR(nmi(a, b), 1.0, 1e-15);
}

TEST(Nmi, DegenerateCases) {
  const std::vector<CommunityId> one(4, 0);
  const std::vector<CommunityId> two{0, 0, 1, 1};
  EXPECT_EQ(nmi(one, one), 1.0);
  EXPECT_EQ(nmi(two, one), 0.0);
  EXPECT_EQ(nmi(one, two), 0.0);
}

TEST(Nmi, CrossedTwoByTwoIsZero) {
  // Every cell is 1: log(n * M_ij / (M_i. M_.j)) = log(4 / 4) = 0.
  const std::vector<CommunityId> a{0, 0, 1, 1};
  const std::vector<CommunityId> b{0, 1, 0, 1};
  EXPECT_NEAR(nmi(a, b), 0.0, 1e-15);
}

TEST(Nmi, HandEvaluatedTable) {
  // a = {0,1,2},{3,4,5}; b = {0,1},{2,3},{4,5}
  const std::vector<CommunityId> a{0, 0, 0, 1, 1, 1};
  const std::vector<CommunityId> b{0, 0, 1, 1, 2, 2};
  // cells: (0,0)=2 (0,1)=1 (1,1)=1 (1,2)=2; rows 3,3; cols 2,2,2; n=6
  const double num = -2.0 * (2 * std::log(6.0 * 2 / (3 * 2)) + 1 * std::log(6.0 * 1 / (3 * 2)) +
                             1 * std::log(6.0 * 1 / (3 * 2)) + 2 * std::log(6.0 * 2 / (3 * 2)));
  const double den = 2 * 3 * std::log(3.0 / 6) + 3 * 2 * std::log(2.0 / 6);
  EXPECT_NEAR(nmi(a, b), num / den, 1e-14);
}

TEST(Nmi, SymmetricAndInUnitInterval) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(60);
    const auto a = oracle::random_assignment(rng, n, 1 + rng.below(6));
    const auto b = oracle::random_assignment(rng, n, 1 + rng.below(6));
    const double x = nmi(a, b);
    EXPECT_NEAR(x, nmi(b, a), 1e-14);
    EXPECT_GE(x, -1e-15);
    EXPECT_LE(x, 1.0 + 1e-15);
  }
}

TEST(Nmi, SelfIsOne) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = oracle::random_assignment(rng, 40, 2 + rng.below(6));
    a[0] = 0;
    a[1] = 1;
    EXPECT_NEAR(nmi(a, a), 1.0, 1e-14);
  }
}

TEST(Nmi, SizeMismatchThrows) {
  const std::vector<CommunityId> a{0, 1};
  const std::vector<CommunityId> b{0, 1, 1};
  EXPECT_ANY_THROW(nmi(a, b));
}

TEST(ContingencyTable, MarginsAreConsistent) {
  Rng rng(7);
  const auto a = oracle::random_assignment(rng, 50, 4);
  const auto b = oracle::random_assignment(rng, 50, 5);
  const ContingencyTable t(a, b);
  std::size_t total = 0;
  std::map<CommunityId, std::size_t> rows, cols;
  for (const auto& [key, count] : t.cells()) {
    total += count;
    rows[key.first] += count;
    cols[key.second] += count;
  }
  EXPECT_EQ(total, 50u);
  EXPECT_EQ(t.n(), 50u);
  EXPECT_EQ(rows, t.row_sums());
  EXPECT_EQ(cols, t.column_sums());
}
