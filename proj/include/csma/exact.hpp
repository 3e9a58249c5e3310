// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csma/chordal.hpp"
#include "csma/graph.hpp"
#include "csma/rates.hpp"

namespace csma {

/// Stationary law of the product-form chain on the independent sets.
struct ProductFormSolution {
  double Z = 0.0;
  /// Probability per independent set, in enumerate_independent_sets order.
  /// Only filled when requested.
  std::optional<std::vector<double>> pi;
  std::vector<std::uint64_t> states;  // parallel to pi when pi is filled
  ThroughputVector throughputs;
};

/// Sum over all independent sets of the product of active rates. Subject to
/// the enumeration cap.
double partition_function(const ConflictGraph& g, std::span<const double> nu);

/// Exact per-node throughputs (fraction of time active) under rates nu.
ProductFormSolution stationary_throughputs(const ConflictGraph& g, std::span<const double> nu,
                                           bool keep_distribution = false);

inline constexpr int kGeneralGraphCap = 20;
inline constexpr double kInteriorSlack = 1e-12;

struct GeneralAchievability {
  bool achievable;
  /// Largest t such that theta is a convex combination of the independent
  /// sets with every weight at least t.
  double slack;
};

/// Membership in the interior of the convex hull of the independent sets,
/// decided by a linear program. n <= 20.
GeneralAchievability achievable_general(const ConflictGraph& g, std::span<const double> theta,
                                        double min_slack = kInteriorSlack);

struct InversionOptions {
  double tol = 1e-10;
  long max_iterations = 1'000'000;
  /// Minimum LP slack required before iterating.
  double min_slack = 1e-9;
};

struct Inversion {
  RateVector rates;
  long iterations;
  double residual;  // max_i |theta_hat_i - theta_i|
};

/// Rates reproducing theta on an arbitrary graph (n <= 20) by the damped
/// multiplicative fixed point nu_i <- nu_i (theta_i / theta_hat_i)^d_i.
/// The step d_i halves whenever the residual of node i changes sign.
Inversion invert_rates_bruteforce(const ConflictGraph& g, std::span<const double> theta,
                                  const InversionOptions& opts = {});

/// Normalizing constant of an acyclic network under the tree rates, in
/// closed form.
double z_tree_closed_form(const ConflictGraph& g, std::span<const double> theta);

/// Normalizing constant of the line network (n = theta.size()) under the
/// line rates.
double z_line_closed_form(int beta, std::span<const double> theta);

/// Normalizing constant of a chordal network under its exact rates, from the
/// clique tree alone.
double z_chordal_closed_form(const CliqueTree& t, std::span<const double> theta);

struct SubtreeConstant {
  double Z;
  NodeSet nodes;  // the sub-network whose constant Z is
};

/// Cutting tree edge `edge` splits the clique tree in two; `side` (one of the
/// edge's endpoint clique indices) selects a part. Returns the normalizing
/// constant of the nodes in that part minus the separator, under the rates of
/// the whole network.
SubtreeConstant z_chordal_subtree(const CliqueTree& t, int edge, int side,
                                  std::span<const double> theta);

}  // namespace csma
