// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "csma/exact.hpp"
#include "csma/rates.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace csma;
using fixture::expect_error;

namespace {

// Largest relative gap between theta and the throughputs nu actually yields.
double achieved_error(const ConflictGraph& g, const RateVector& nu, const std::vector<double>& theta) {
  auto brute = oracle::product_form(g, nu);
  double worst = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    worst = std::max(worst, static_cast<double>(std::fabs(brute.theta[i] - theta[i]) / theta[i]));
  }
  return worst;
}

std::vector<double> constant(int n, double x) { return std::vector<double>(n, x); }

}  // namespace

TEST(TreeRates, SmallExamples) {
  RateVector nu = tree_rates(make_line(3, 1), constant(3, 0.2));
  EXPECT_NEAR(nu[0], 1.0 / 3, 1e-15);
  EXPECT_NEAR(nu[1], 4.0 / 9, 1e-15);
  EXPECT_NEAR(nu[2], 1.0 / 3, 1e-15);
  // Isolated node: theta / (1 - theta).
  EXPECT_NEAR(tree_rates(ConflictGraph(1, std::vector<Edge>{}), constant(1, 0.25))[0], 1.0 / 3, 1e-15);
  expect_error(ErrorCode::kInvalidArgument, [] { tree_rates(make_ring(4), constant(4, 0.1)); });
  expect_error(ErrorCode::kUnachievable, [] { tree_rates(make_star(3), std::vector<double>{0.5, 0.5, 0.1, 0.1}); });
}

TEST(TreeRates, ExactOnRandomForests) {
  Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    ConflictGraph t = random_tree(1 + static_cast<int>(rng.below(14)), rng.next_u64());
    auto theta = oracle::scaled_theta(t, 0.95, rng);
    EXPECT_LT(achieved_error(t, tree_rates(t, theta), theta), 1e-12);
  }
}

TEST(LineRates, ExactAndMatchesChordal) {
  Rng rng(22);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + static_cast<int>(rng.below(14));
    const int beta = static_cast<int>(rng.below(std::min(n, 4)));
    ConflictGraph g = make_line(n, beta);
    auto theta = oracle::scaled_theta(g, 0.9, rng);
    RateVector nu = line_rates(beta, theta);
    EXPECT_LT(achieved_error(g, nu, theta), 1e-12);
    RateVector ref = chordal_rates(g, theta);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(nu[i], ref[i], 1e-12 * ref[i]);
  }
}

TEST(CliqueLineRates, Examples) {
  auto nu = clique_line_rates(std::vector<int>{2, 2}, 1, 0.2);
  ASSERT_EQ(nu.size(), 2u);
  EXPECT_NEAR(nu[0], 1.0, 1e-14);
  EXPECT_NEAR(nu[1], 1.0, 1e-14);
  const std::vector<int> sizes{2, 3, 1, 2};
  ConflictGraph g = make_clique_line(sizes, 1);
  auto per_block = clique_line_rates(sizes, 1, 0.15);
  RateVector nu_nodes;
  for (std::size_t b = 0; b < sizes.size(); ++b) nu_nodes.insert(nu_nodes.end(), sizes[b], per_block[b]);
  EXPECT_LT(achieved_error(g, nu_nodes, constant(g.size(), 0.15)), 1e-12);
  expect_error(ErrorCode::kUnachievable, [&] { clique_line_rates(sizes, 1, 0.2); });
}

TEST(IlineRates, Exact) {
  Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    auto b = random_iline_beta(1 + static_cast<int>(rng.below(14)), 1 + static_cast<int>(rng.below(4)), rng.next_u64());
    ConflictGraph g = make_iline(b);
    auto theta = oracle::scaled_theta(g, 0.9, rng);
    EXPECT_LT(achieved_error(g, iline_rates(b, theta), theta), 1e-12);
  }
}

TEST(ChordalRates, SmallExamples) {
  RateVector nu = chordal_rates(make_complete(3), constant(3, 0.2));
  for (double x : nu) EXPECT_NEAR(x, 0.5, 1e-15);
  expect_error(ErrorCode::kNotChordal, [] { chordal_rates(make_ring(4), constant(4, 0.1)); });
  expect_error(ErrorCode::kUnachievable, [] { chordal_rates(make_complete(3), constant(3, 0.4)); });
  expect_error(ErrorCode::kInvalidArgument, [] { chordal_rates(make_complete(3), constant(2, 0.1)); });
  expect_error(ErrorCode::kInvalidArgument, [] { chordal_rates(make_complete(3), std::vector<double>{0.1, 0.0, 0.1}); });
}

TEST(ChordalRates, AllExactMethodsAgreeWithEnumeration) {
  Rng rng(24);
  for (int k = 0; k < 150; ++k) {
    ConflictGraph g = random_chordal_graph(1 + static_cast<int>(rng.below(14)), rng.uniform(), rng.next_u64());
    auto theta = oracle::scaled_theta(g, 0.3 + 0.69 * rng.uniform(), rng);
    const RateVector ct = chordal_rates_clique_tree(g, clique_tree(g), theta);
    EXPECT_LT(achieved_error(g, ct, theta), 1e-10);
    for (const RateVector& other : {chordal_rates(g, theta), distributed_rates(g, theta), lcs_rates(g, theta),
                                    completion_rates(g, theta)}) {
      for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(other[i], ct[i], 1e-10 * ct[i]);
    }
  }
}

TEST(ChordalRates, AnyPerfectOrderingGivesTheSameRates) {
  Rng rng(25);
  ConflictGraph g = fixture::eleven_node_chordal();
  auto theta = oracle::scaled_theta(g, 0.9, rng);
  const RateVector ref = chordal_rates_clique_tree(g, fixture::eleven_node_tree(), theta);
  EXPECT_LT(achieved_error(g, ref, theta), 1e-12);
  for (int t = 0; t < 30; ++t) {
    RateVector nu = chordal_rates_peo(g, make_order(g, oracle::random_peo(g, rng)), theta);
    for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(nu[i], ref[i], 1e-12 * ref[i]);
  }
  expect_error(ErrorCode::kNotChordal, [&] { chordal_rates_peo(g, make_order(g, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), theta); });
  CliqueTree broken = fixture::eleven_node_tree();
  broken.tree_edges[4] = {4, 0};
  fill_separators(broken);
  expect_error(ErrorCode::kInvalidArgument, [&] { chordal_rates_clique_tree(g, broken, theta); });
}

TEST(ChordalRates, TinyThroughputsStayFinite) {
  ConflictGraph g = make_complete(6);
  RateVector nu = chordal_rates(g, constant(6, 1e-9));
  for (double x : nu) EXPECT_NEAR(x, 1e-9, 1e-16);
  // Near the boundary the rates grow large but stay exact.
  auto theta = constant(4, 0.2499);
  EXPECT_LT(achieved_error(make_complete(4), chordal_rates(make_complete(4), theta), theta), 1e-9);
}

TEST(DistributedRate, UsesOnlyTheClosedNeighbourhood) {
  ConflictGraph g = fixture::eleven_node_chordal();
  Rng rng(26);
  auto theta = oracle::scaled_theta(g, 0.8, rng);
  const RateVector ref = chordal_rates(g, theta);
  // Changing throughputs outside N[i] leaves nu_i alone.
  auto perturbed = theta;
  for (Node v = 0; v < g.size(); ++v) {
    if (v != 0 && !g.has_edge(0, v)) perturbed[v] *= 0.5;
  }
  EXPECT_NEAR(distributed_rate(g, 0, perturbed), ref[0], 1e-14);
  const auto local = induced_subgraph(g, g.closed_neighborhood(7));
  std::vector<double> theta_local;
  for (Node v : local.to_parent) theta_local.push_back(theta[v]);
  EXPECT_NEAR(local_rate(local.graph, local.local_id(7), theta_local), ref[7], 1e-14 * ref[7]);
  // The hub of a wheel sees a four-cycle among its neighbours.
  expect_error(ErrorCode::kNotChordal,
               [] { distributed_rate(add_node(make_ring(4), NodeSet{0, 1, 2, 3}), 4, constant(5, 0.1)); });
}

TEST(Approximations, FourCycle) {
  const auto theta = constant(4, 0.25);
  for (double x : lcs_rates(make_ring(4), theta)) EXPECT_NEAR(x, 0.75, 1e-14);
  for (double x : bethe_rates(make_ring(4), theta)) EXPECT_NEAR(x, 0.75, 1e-14);
  // The exact answer solves nu^2 (1 - 2 theta) + nu (1 - 4 theta) - theta = 0.
  auto inv = invert_rates_bruteforce(make_ring(4), theta);
  for (double x : inv.rates) EXPECT_NEAR(x, std::sqrt(0.5), 1e-8);
}

TEST(Approximations, CompletionIsExactOnTheCompletedGraph) {
  ConflictGraph g = make_ring(4);
  const auto theta = constant(4, 0.2);
  ConflictGraph completed = min_degree_completion(g).completed;
  EXPECT_LT(achieved_error(completed, completion_rates(g, theta), theta), 1e-12);
}

TEST(Approximations, LightTraffic) {
  ConflictGraph g = make_star(3);
  RateVector nu = light_traffic_rates(g, std::vector<double>{0.01, 0.02, 0.03, 0.04});
  EXPECT_NEAR(nu[0], 0.01 * (1 + 0.01 + 0.09), 1e-16);
  EXPECT_NEAR(nu[2], 0.03 * (1 + 0.03 + 0.01), 1e-16);
  // First-order accurate as throughputs vanish.
  Rng rng(27);
  ConflictGraph h = oracle::gnp(10, 0.4, rng);
  for (double load : {1e-2, 1e-3}) {
    auto theta = oracle::scaled_theta(h, load, rng);
    EXPECT_LT(achieved_error(h, light_traffic_rates(h, theta), theta), 20 * load * load);
  }
}

TEST(NodeAddition, ComposingAlongAnOrderingGivesChordalRates) {
  Rng rng(28);
  for (int k = 0; k < 50; ++k) {
    ConflictGraph g = random_chordal_graph(2 + static_cast<int>(rng.below(12)), rng.uniform(), rng.next_u64());
    auto theta = oracle::scaled_theta(g, 0.85, rng);
    PeoOrder peo = mcs_peo(g);
    const int n = g.size();
    // Rebuild g one node at a time from the last position down.
    std::vector<int> new_id(n, -1);
    const Node first = peo.alpha[n - 1];
    new_id[first] = 0;
    ConflictGraph built(1, std::vector<Edge>{});
    RateVector nu{theta[first] / (1.0 - theta[first])};
    std::vector<double> built_theta{theta[first]};
    for (int p = n - 2; p >= 0; --p) {
      const Node v = peo.alpha[p];
      NodeSet nbrs;
      for (Node u : peo.later_neighbors[v]) nbrs.push_back(new_id[u]);
      std::sort(nbrs.begin(), nbrs.end());
      NodeAddition step = add_node_update(built, nu, built_theta, nbrs, theta[v]);
      EXPECT_EQ(step.rates.back(), step.new_rate);
      nu = step.rates;
      built = add_node(built, nbrs);
      built_theta.push_back(theta[v]);
      new_id[v] = built.size() - 1;
    }
    const RateVector ref = chordal_rates_peo(g, peo, theta);
    for (Node v = 0; v < n; ++v) EXPECT_NEAR(nu[new_id[v]], ref[v], 1e-11 * ref[v]);
  }
}

TEST(NodeAddition, WorksOnNonChordalBase) {
  ConflictGraph ring = make_ring(4);
  const auto theta = constant(4, 0.15);
  auto base = invert_rates_bruteforce(ring, theta, {.tol = 1e-13});
  NodeAddition r = add_node_update(ring, base.rates, theta, NodeSet{2, 3}, 0.15);
  // Nodes outside the clique keep their rates.
  EXPECT_EQ(r.rates[0], base.rates[0]);
  EXPECT_EQ(r.rates[1], base.rates[1]);
  EXPECT_LT(achieved_error(fixture::house(), r.rates, constant(5, 0.15)), 1e-10);
  expect_error(ErrorCode::kInvalidArgument, [&] { add_node_update(ring, base.rates, theta, NodeSet{0, 2}, 0.1); });
  expect_error(ErrorCode::kUnachievable, [&] { add_node_update(ring, base.rates, theta, NodeSet{2, 3}, 0.75); });
}

TEST(ComputeRates, DispatchAndMargins) {
  ConflictGraph g = make_line(6, 2);
  const auto theta = constant(6, 0.2);
  RateReport line = compute_rates(g, theta, Method::kLine);
  RateReport peo = compute_rates(g, theta, Method::kChordalPeo);
  EXPECT_NEAR(line.margin, 0.4, 1e-15);
  EXPECT_NEAR(peo.margin, 0.4, 1e-15);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(line.rates[i], peo.rates[i], 1e-14 * peo.rates[i]);
  EXPECT_NEAR(compute_rates(make_ring(5), constant(5, 0.1), Method::kBethe).margin, 0.8, 1e-15);
  expect_error(ErrorCode::kInvalidArgument, [] { compute_rates(make_ring(5), constant(5, 0.1), Method::kLine); });
  expect_error(ErrorCode::kInvalidArgument, [] { compute_rates(make_ring(5), constant(5, 0.1), Method::kTree); });
  expect_error(ErrorCode::kNotChordal, [] { compute_rates(make_ring(5), constant(5, 0.1), Method::kChordalCliqueTree); });
  for (Method m : all_methods()) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_FALSE(parse_method("nope").has_value());
  EXPECT_EQ(parse_method("lcs"), Method::kLcs);
}

TEST(ComputeRates, ShapeDetection) {
  EXPECT_EQ(detect_line(make_line(7, 2)), 2);
  EXPECT_EQ(detect_line(make_line(7, 6)), 6);
  EXPECT_FALSE(detect_line(make_ring(5)).has_value());
  EXPECT_FALSE(detect_line(make_star(3)).has_value());
  Rng rng(29);
  for (int k = 0; k < 50; ++k) {
    auto b = random_iline_beta(1 + static_cast<int>(rng.below(14)), 1 + static_cast<int>(rng.below(4)), rng.next_u64());
    auto found = detect_iline(make_iline(b));
    ASSERT_TRUE(found.has_value());
    EXPECT_EQ(make_iline(*found), make_iline(b));
  }
  EXPECT_FALSE(detect_iline(make_star(3)).has_value());
}
