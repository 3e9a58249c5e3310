// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csma/chordal.hpp"
#include "csma/graph.hpp"

namespace csma {

/// Per-node target throughputs, each in (0,1).
using ThroughputVector = std::vector<double>;
/// Per-node back-off rates (transmissions have mean length 1).
using RateVector = std::vector<double>;

/// Throughput sums within this distance of 1 are treated as unachievable:
/// every closed form divides by 1 - (sum over a clique).
inline constexpr double kMarginEpsilon = 1e-9;

enum class Method {
  kTree,
  kLine,
  kIline,
  kChordalCliqueTree,
  kChordalPeo,
  kDistributed,
  kLcs,
  kBethe,
  kCompletion,
  kLightTraffic,
};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
const std::vector<Method>& all_methods();

struct RateReport {
  Method method;
  RateVector rates;
  /// 1 - max clique throughput sum over the cliques the method treats as
  /// exact (maximal cliques for the chordal methods, edges for tree/bethe/
  /// light-traffic, the local chordal subgraphs for lcs, the completed graph
  /// for completion).
  double margin;
};

/// Throws kInvalidArgument unless theta has n entries, each in (0,1).
void validate_throughputs(int n, std::span<const double> theta);

struct Achievability {
  bool achievable;
  double margin;  // 1 - max_K sum_{s in K} theta_s
};

/// Membership in the achievable region of a chordal graph: every maximal
/// clique sums to less than 1 (with kMarginEpsilon slack). Throws kNotChordal
/// for other graphs; use achievable_general for those.
Achievability achievable(const ConflictGraph& g, std::span<const double> theta);

/// 1 - max over the given node sets of their throughput sum.
double clique_margin(std::span<const NodeSet> cliques, std::span<const double> theta);

/// Acyclic conflict graphs:
///   nu_i = theta_i (1-theta_i)^{|N_i|-1} / prod_{j in N_i} (1 - theta_i - theta_j).
RateVector tree_rates(const ConflictGraph& g, std::span<const double> theta);

/// Line of n = theta.size() nodes where each node interferes with the beta
/// previous and next nodes.
RateVector line_rates(int beta, std::span<const double> theta);

/// Line of cliques (block b has k_vec[b] nodes, blocks within beta interfere)
/// with every node at throughput gamma. Returns one rate per block.
std::vector<double> clique_line_rates(std::span<const int> k_vec, int beta, double gamma);

/// Inhomogeneous line given by its interference vector (see make_iline).
RateVector iline_rates(std::span<const int> beta_vec, std::span<const double> theta);

/// Chordal graphs, clique-tree form:
///   nu_i = theta_i prod_{tree edges with i in K∩K'} g(K∩K') / prod_{K ∋ i} g(K)
/// with g(X) = 1 - sum_{s in X} theta_s. Throws kInvalidArgument for a tree
/// that is not a clique tree of g.
RateVector chordal_rates_clique_tree(const ConflictGraph& g, const CliqueTree& t,
                                     std::span<const double> theta);

/// Chordal graphs, elimination form: start from the last node of the order
/// and add one node at a time, rescaling its later neighbours.
RateVector chordal_rates_peo(const ConflictGraph& g, const PeoOrder& peo,
                             std::span<const double> theta);

/// chordal_rates_peo with an MCS ordering.
RateVector chordal_rates(const ConflictGraph& g, std::span<const double> theta);

/// Rate of node `self` computed only from its closed neighbourhood: `local`
/// is G[N_self ∪ {self}] in any labelling and `theta_local` its throughputs.
double local_rate(const ConflictGraph& local, Node self, std::span<const double> theta_local);

/// Extracts the closed neighbourhood of i from g and calls the local form.
double distributed_rate(const ConflictGraph& g, Node i, std::span<const double> theta);

/// distributed_rate for every node.
RateVector distributed_rates(const ConflictGraph& g, std::span<const double> theta);

/// Local chordal subgraph approximation: node i runs MAXCHORD on
/// G[N_i ∪ {i}] from i and takes its own entry of the chordal rates of the
/// result. Exact on chordal graphs.
RateVector lcs_rates(const ConflictGraph& g, std::span<const double> theta);

/// The acyclic formula applied to an arbitrary graph.
RateVector bethe_rates(const ConflictGraph& g, std::span<const double> theta);

/// Chordal rates of the minimum-degree completion of g.
RateVector completion_rates(const ConflictGraph& g, std::span<const double> theta);

/// nu_i ≈ theta_i (1 + theta_i + sum_{j in N_i} theta_j).
RateVector light_traffic_rates(const ConflictGraph& g, std::span<const double> theta);

struct NodeAddition {
  RateVector rates;  // n+1 entries, the new node last
  double new_rate;
};

/// Rates for g plus a new node whose neighbours form a clique in g, given
/// rates `nu` that achieve `theta` on g. Only the clique members change.
NodeAddition add_node_update(const ConflictGraph& g, std::span<const double> nu,
                             std::span<const double> theta, std::span<const Node> clique_neighbors,
                             double theta_new);

/// Runs `method` on g. Line and inhomogeneous-line methods recover their
/// parameters from the graph and reject graphs of another shape.
RateReport compute_rates(const ConflictGraph& g, std::span<const double> theta, Method method);

/// Interference range of g if it is exactly make_line(n, beta).
std::optional<int> detect_line(const ConflictGraph& g);
/// Interference vector of g if it is exactly make_iline(beta_vec).
std::optional<std::vector<int>> detect_iline(const ConflictGraph& g);

}  // namespace csma
