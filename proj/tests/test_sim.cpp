// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "csma/exact.hpp"
#include "csma/sim.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace csma;
using fixture::expect_error;

namespace {

const ConflictGraph kSingle(1, std::vector<Edge>{});

SimConfig config(double horizon, std::uint64_t seed,
                 TransmissionDist dist = TransmissionDist::kExponential) {
  SimConfig c;
  c.horizon = horizon;
  c.seed = seed;
  c.transmission = dist;
  return c;
}

}  // namespace

TEST(Simulate, SingleNodeAtRateOne) {
  SimResult r = simulate(kSingle, std::vector<double>{1.0}, config(1e6, 5));
  EXPECT_NEAR(r.throughput[0], 0.5, 0.002);
  EXPECT_NEAR(r.packet_throughput[0], 0.5, 0.002);
  EXPECT_GT(r.transmissions[0], 240000u);
  EXPECT_EQ(r.min_throughput, r.throughput[0]);
  EXPECT_EQ(r.max_throughput, r.throughput[0]);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Simulate, DeterministicInSeed) {
  ConflictGraph g = fixture::eleven_node_chordal();
  std::vector<double> nu(11, 0.7);
  SimResult a = simulate(g, nu, config(2e4, 3));
  SimResult b = simulate(g, nu, config(2e4, 3));
  EXPECT_EQ(a.throughput, b.throughput);
  EXPECT_EQ(a.transmissions, b.transmissions);
  EXPECT_EQ(a.events, b.events);
  EXPECT_NE(a.throughput, simulate(g, nu, config(2e4, 4)).throughput);
}

TEST(Simulate, NeighboursNeverOverlap) {
  // A clique can hold at most one transmission, so busy fractions sum to
  // at most 1 on every clique.
  ConflictGraph g = make_complete(5);
  for (auto dist : {TransmissionDist::kExponential, TransmissionDist::kDeterministic}) {
    SimResult r = simulate(g, std::vector<double>(5, 3.0), config(1e4, 8, dist));
    double total = 0.0;
    for (double x : r.throughput) total += x;
    EXPECT_LE(total, 1.0 + 1e-12);
    EXPECT_NEAR(total, 15.0 / 16.0, 0.02);
  }
}

TEST(Replications, ReproducibleAcrossThreadCounts) {
  ConflictGraph g = make_ring(6);
  std::vector<double> nu(6, 1.5);
  auto one = simulate_replicated(g, nu, config(5e3, 9), 6, 1);
  auto many = simulate_replicated(g, nu, config(5e3, 9), 6, 4);
  EXPECT_EQ(one.mean, many.mean);
  EXPECT_EQ(one.half_width, many.half_width);
  ASSERT_EQ(one.runs.size(), 6u);
  EXPECT_EQ(one.runs[2].throughput, simulate(g, nu, config(5e3, replication_seed(9, 2))).throughput);
  EXPECT_NE(replication_seed(9, 0), replication_seed(9, 1));
  auto single = simulate_replicated(g, nu, config(5e3, 9), 1);
  EXPECT_TRUE(std::isinf(single.half_width[0]));
  expect_error(ErrorCode::kInvalidArgument, [&] { simulate_replicated(g, nu, config(5e3, 9), 0); });
}

TEST(Replications, IntervalCoversAndShrinks) {
  const std::vector<double> nu{1.0};
  auto short_run = simulate_replicated(kSingle, nu, config(1e4, 10), 8, 4);
  auto long_run = simulate_replicated(kSingle, nu, config(1.6e5, 10), 8, 4);
  EXPECT_LT(std::fabs(short_run.mean[0] - 0.5), short_run.half_width[0]);
  EXPECT_LT(std::fabs(long_run.mean[0] - 0.5), long_run.half_width[0]);
  // Error falls like one over the square root of the horizon.
  const double ratio = short_run.half_width[0] / long_run.half_width[0];
  EXPECT_GT(ratio, 2.0);
  EXPECT_LT(ratio, 8.0);
}

TEST(Simulate, AgreesWithProductForm) {
  // Standardized errors over 32 nodes: with 16 replications they follow a
  // t law with 15 degrees of freedom (rms about 1.07).
  Rng rng(41);
  double sum_sq = 0.0;
  int count = 0;
  for (int k = 0; k < 4; ++k) {
    ConflictGraph g = oracle::gnp(8, 0.35, rng);
    std::vector<double> nu(8);
    for (auto& x : nu) x = 0.3 + 2.0 * rng.uniform();
    const auto exact = stationary_throughputs(g, nu).throughputs;
    auto rep = simulate_replicated(g, nu, config(5e4, 100 + k), 16, 4);
    for (int i = 0; i < 8; ++i) {
      const double z = (rep.mean[i] - exact[i]) / (rep.half_width[i] / 1.96);
      EXPECT_LT(std::fabs(z), 4.5) << "graph " << k << " node " << i;
      sum_sq += z * z;
      ++count;
    }
  }
  EXPECT_LT(std::sqrt(sum_sq / count), 1.5);
}

TEST(Simulate, InsensitiveToTransmissionLengthLaw) {
  ConflictGraph g = random_chordal_graph(10, 0.6, 12);
  Rng rng(42);
  auto theta = oracle::scaled_theta(g, 0.7, rng);
  RateVector nu = chordal_rates(g, theta);
  for (auto dist : {TransmissionDist::kExponential, TransmissionDist::kDeterministic}) {
    auto rep = simulate_replicated(g, nu, config(2e5, 13, dist), 8, 4);
    for (int i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(rep.mean[i], theta[i], std::max(4.0 * rep.half_width[i] / 1.96, 1e-3)) << "node " << i;
    }
  }
}

TEST(Simulate, WarmupShortensTheWindow) {
  SimConfig c = config(1e5, 14);
  c.warmup = 0.5;
  SimResult r = simulate(kSingle, std::vector<double>{1.0}, c);
  EXPECT_NEAR(r.throughput[0], 0.5, 0.01);
  EXPECT_LT(r.transmissions[0], 30000u);
}

TEST(Simulate, LargeRatesWarn) {
  SimResult r = simulate(make_line(3, 1), std::vector<double>{2e4, 1.0, 1.0}, config(100.0, 15));
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("node 0"), std::string::npos);
}

TEST(Simulate, RejectsBadInput) {
  ConflictGraph g = make_ring(4);
  expect_error(ErrorCode::kInvalidArgument, [&] { simulate(g, std::vector<double>(3, 1.0), config(10, 1)); });
  expect_error(ErrorCode::kInvalidArgument, [&] { simulate(g, std::vector<double>{1, 0, 1, 1}, config(10, 1)); });
  expect_error(ErrorCode::kInvalidArgument, [&] { simulate(g, std::vector<double>(4, 1.0), config(0, 1)); });
  SimConfig c = config(10, 1);
  c.warmup = 0.6;
  expect_error(ErrorCode::kInvalidArgument, [&] { simulate(g, std::vector<double>(4, 1.0), c); });
}

TEST(Deviation, MeanAndMax) {
  Deviation d = deviation_report(std::vector<double>{0.1, 0.2}, std::vector<double>{0.11, 0.2});
  EXPECT_NEAR(d.mean_rel, 0.05, 1e-12);
  EXPECT_NEAR(d.max_rel, 0.1, 1e-12);
  expect_error(ErrorCode::kInvalidArgument, [] { deviation_report(std::vector<double>{0.1}, std::vector<double>{}); });
  expect_error(ErrorCode::kInvalidArgument,
               [] { deviation_report(std::vector<double>{0.0}, std::vector<double>{0.1}); });
}
