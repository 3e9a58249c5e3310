// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "csma/graph.hpp"
#include "csma/random.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace csma;
using fixture::expect_error;

TEST(ConflictGraph, MergesDuplicateEdgesAndSortsNeighbors) {
  std::vector<Edge> edges{{2, 0}, {0, 2}, {1, 0}};
  ConflictGraph g(3, edges);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.neighbors(0), (NodeSet{1, 2}));
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {0, 2}}));
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_FALSE(g.has_edge(1, 2));
  EXPECT_EQ(g.closed_neighborhood(1), (NodeSet{0, 1}));
}

TEST(ConflictGraph, RejectsSelfLoopsAndBadIds) {
  expect_error(ErrorCode::kInvalidArgument, [] { ConflictGraph(3, std::vector<Edge>{{1, 1}}); });
  expect_error(ErrorCode::kInvalidArgument, [] { ConflictGraph(3, std::vector<Edge>{{0, 3}}); });
  expect_error(ErrorCode::kInvalidArgument, [] { make_ring(3).neighbors(5); });
}

TEST(ConflictGraph, CliqueTest) {
  ConflictGraph k4 = make_complete(4);
  EXPECT_TRUE(k4.is_clique(NodeSet{0, 1, 3}));
  EXPECT_TRUE(make_ring(4).is_clique(NodeSet{}));
  EXPECT_FALSE(make_ring(4).is_clique(NodeSet{0, 2}));
}

TEST(InducedSubgraph, RelabelsInAscendingOrder) {
  ConflictGraph g = make_ring(5);
  InducedSubgraph sub = induced_subgraph(g, NodeSet{4, 0, 1});
  EXPECT_EQ(sub.to_parent, (std::vector<Node>{0, 1, 4}));
  EXPECT_EQ(sub.graph.edges(), (std::vector<Edge>{{0, 1}, {0, 2}}));
  EXPECT_EQ(sub.local_id(4), 2);
  EXPECT_EQ(sub.local_id(3), -1);
  expect_error(ErrorCode::kInvalidArgument, [&] { induced_subgraph(g, NodeSet{}); });
}

TEST(Components, ForestsAndCycles) {
  ConflictGraph g(6, std::vector<Edge>{{0, 1}, {2, 3}, {3, 4}});
  int count = 0;
  auto comp = connected_components(g, &count);
  EXPECT_EQ(count, 3);
  EXPECT_EQ(comp[1], comp[0]);
  EXPECT_EQ(comp[4], comp[2]);
  EXPECT_TRUE(is_forest(g));
  EXPECT_FALSE(is_forest(make_ring(5)));
  EXPECT_TRUE(is_forest(ConflictGraph(1, std::vector<Edge>{})));
}

TEST(MaxClique, MatchesSubsetScan) {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    ConflictGraph g = oracle::gnp(1 + static_cast<int>(rng.below(12)), rng.uniform(), rng);
    std::size_t best = 0;
    for (const auto& c : oracle::maximal_cliques_brute(g)) best = std::max(best, c.size());
    EXPECT_EQ(max_clique_size(g), static_cast<int>(best));
  }
}

TEST(IndependentSets, MatchBruteForceWithEmptySetFirst) {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    ConflictGraph g = oracle::gnp(1 + static_cast<int>(rng.below(12)), rng.uniform(), rng);
    auto sets = enumerate_independent_sets(g);
    ASSERT_FALSE(sets.empty());
    EXPECT_EQ(sets.front(), 0u);
    std::set<std::uint64_t> expected;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.size()); ++m) {
      if (oracle::independent(g, m)) expected.insert(m);
    }
    EXPECT_EQ(std::set<std::uint64_t>(sets.begin(), sets.end()), expected);
    EXPECT_EQ(sets.size(), expected.size());
  }
  EXPECT_EQ(enumerate_independent_sets(make_ring(4)).size(), 7u);
}

TEST(IndependentSets, CapIsEnforced) {
  const int saved = enumeration_cap();
  set_enumeration_cap(5);
  expect_error(ErrorCode::kCapExceeded, [] { enumerate_independent_sets(make_ring(6)); });
  set_enumeration_cap(saved);
  EXPECT_EQ(enumeration_cap(), kDefaultEnumerationCap);
  expect_error(ErrorCode::kInvalidArgument, [] { set_enumeration_cap(0); });
  expect_error(ErrorCode::kInvalidArgument, [] { set_enumeration_cap(63); });
}

TEST(Geometric, EdgesFollowDistancesAndSeed) {
  GeometricGraph a = random_geometric_graph(100, 0.2, 7);
  GeometricGraph b = random_geometric_graph(100, 0.2, 7);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_NE(a.graph, random_geometric_graph(100, 0.2, 8).graph);
  // Expected count is C(100,2) * P(d < 0.2), about 560 with boundary effects.
  EXPECT_GT(a.graph.edge_count(), 400u);
  EXPECT_LT(a.graph.edge_count(), 720u);
  for (int i = 0; i < 100; ++i) {
    EXPECT_GE(a.coords[i].first, 0.0);
    EXPECT_LT(a.coords[i].first, 1.0);
    for (int j = i + 1; j < 100; ++j) {
      const double d = std::hypot(a.coords[i].first - a.coords[j].first, a.coords[i].second - a.coords[j].second);
      EXPECT_EQ(a.graph.has_edge(i, j), d < 0.2);
    }
  }
  expect_error(ErrorCode::kInvalidArgument, [] { random_geometric_graph(0, 0.2, 1); });
  expect_error(ErrorCode::kInvalidArgument, [] { random_geometric_graph(5, -1.0, 1); });
}

TEST(Line, EdgesWithinRange) {
  ConflictGraph g = make_line(6, 2);
  EXPECT_EQ(g.edge_count(), 9u);
  EXPECT_TRUE(g.has_edge(1, 3));
  EXPECT_FALSE(g.has_edge(1, 4));
  EXPECT_EQ(make_line(4, 3), make_complete(4));
  EXPECT_EQ(make_line(3, 0).edge_count(), 0u);
  expect_error(ErrorCode::kInvalidArgument, [] { make_line(3, 3); });
}

TEST(InhomogeneousLine, CliquesAreTheMaximalCliques) {
  const std::vector<int> beta{0, 1, 1, 2, 1, 2, 3, 2, 2, 0};
  ConflictGraph g = make_iline(beta);
  EXPECT_EQ(g.size(), 9);
  EXPECT_EQ(iline_cliques(beta), oracle::maximal_cliques_brute(g));
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    auto b = random_iline_beta(1 + static_cast<int>(rng.below(14)), 1 + static_cast<int>(rng.below(4)), rng.next_u64());
    EXPECT_NO_THROW(validate_iline_beta(b));
    EXPECT_EQ(iline_cliques(b), oracle::maximal_cliques_brute(make_iline(b)));
  }
}

TEST(InhomogeneousLine, RejectsInvalidVectors) {
  for (const auto& b : std::vector<std::vector<int>>{{0}, {1, 0}, {0, 1}, {0, 1, 3, 0}, {0, 0, 0}, {0, 2, 1, 0}}) {
    expect_error(ErrorCode::kInvalidArgument, [&] { validate_iline_beta(b); });
  }
  EXPECT_NO_THROW(validate_iline_beta(std::vector<int>{0, 0}));
}

TEST(CliqueLine, BlocksWithinRangeInterfere) {
  EXPECT_EQ(make_clique_line(std::vector<int>{2, 2}, 1), make_complete(4));
  ConflictGraph g = make_clique_line(std::vector<int>{1, 2, 1}, 1);
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_FALSE(g.has_edge(0, 3));
}

TEST(SmallFamilies, Shapes) {
  EXPECT_EQ(make_ring(5).edge_count(), 5u);
  EXPECT_EQ(make_star(4).degree(0), 4);
  EXPECT_EQ(make_complete(5).edge_count(), 10u);
  expect_error(ErrorCode::kInvalidArgument, [] { make_ring(2); });
}

TEST(RandomTree, IsASpanningTree) {
  for (int n = 1; n < 40; ++n) {
    ConflictGraph t = random_tree(n, 1000 + n);
    int count = 0;
    connected_components(t, &count);
    EXPECT_EQ(count, 1);
    EXPECT_EQ(t.edge_count(), static_cast<std::size_t>(n - 1));
    EXPECT_EQ(t, random_tree(n, 1000 + n));
  }
}

TEST(AddNode, AppendsNodeWithNeighbors) {
  ConflictGraph g = add_node(make_ring(4), NodeSet{2, 3});
  EXPECT_EQ(g, fixture::house());
  expect_error(ErrorCode::kInvalidArgument, [] { add_node(make_ring(4), NodeSet{4}); });
}

TEST(Rng, StreamIsStable) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(c.below(7), 7u);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}
