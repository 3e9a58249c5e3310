// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "csma/graph.hpp"

namespace csma {

/// Node ordering with per-node later-neighbor sets.
///
/// alpha[k] is the node at position k. The last position (n-1) is the first
/// node an MCS run numbers; elimination starts at position 0. For a perfect
/// elimination ordering, later_neighbors[v] is a clique for every v.
struct PeoOrder {
  std::vector<Node> alpha;
  std::vector<int> position;             // inverse of alpha
  std::vector<NodeSet> later_neighbors;  // indexed by node id
};

/// Fills position and later_neighbors for a given alpha. Throws
/// kInvalidArgument when alpha is not a permutation of 0..n-1.
PeoOrder make_order(const ConflictGraph& g, std::vector<Node> alpha);

/// Maximum cardinality search. Position n-1 gets `start` (or the node of
/// maximum degree); each following node is the unnumbered node with the most
/// numbered neighbors, ties broken by larger degree in g and then smaller id.
/// The result is a perfect elimination ordering iff g is chordal.
PeoOrder mcs_peo(const ConflictGraph& g, std::optional<Node> start = std::nullopt);

/// True iff every later-neighbor set of `order` is a clique in g.
bool verify_peo(const ConflictGraph& g, const PeoOrder& order);
bool verify_peo(const ConflictGraph& g, std::span<const Node> alpha);

bool is_chordal(const ConflictGraph& g);

/// Maximal cliques read off a perfect elimination ordering, in order of
/// decreasing position of their defining node.
std::vector<NodeSet> maximal_cliques_chordal(const ConflictGraph& g, const PeoOrder& peo);

struct CliqueTree {
  std::vector<NodeSet> cliques;
  std::vector<std::pair<int, int>> tree_edges;  // indices into cliques
  std::vector<NodeSet> separators;              // parallel to tree_edges

  int clique_count() const { return static_cast<int>(cliques.size()); }
};

/// Clique tree (a forest for disconnected g) built incrementally along the
/// ordering: walking from position n-1 down to 0, the set {v} ∪ M_v either
/// grows the clique equal to M_v or becomes a new clique attached to a clique
/// containing M_v. Throws kNotChordal if `peo` is not perfect.
CliqueTree clique_tree(const ConflictGraph& g, const PeoOrder& peo);
CliqueTree clique_tree(const ConflictGraph& g);

/// Recomputes separators from cliques and tree edges.
void fill_separators(CliqueTree& t);

/// Checks every clique-tree invariant against g (maximal cliques exactly
/// once, spanning forest with one tree per component, induced-subtree
/// property, separators). Returns an empty string when valid, otherwise a
/// description of the first violation.
std::string clique_tree_violation(const ConflictGraph& g, const CliqueTree& t);

/// Sorted multiset {K ∩ K' : (K,K') tree edge}.
std::vector<NodeSet> separator_multiset(const CliqueTree& t);

struct ChordalSubgraphResult {
  ConflictGraph subgraph;
  PeoOrder peo;  // perfect for subgraph
};

/// MAXCHORD (Dearing, Shier and Warner): maximal chordal subgraph on the same
/// node set, grown from v0. Each node v carries a label set C(v) of already
/// numbered neighbours it is joined to; the edge (u, pivot) is kept iff
/// C(u) ⊆ C(pivot). The next pivot maximises |C(v)| with ties broken by larger
/// degree in g and then smaller id. Neighbours are scanned in ascending id.
ChordalSubgraphResult maxchord(const ConflictGraph& g, Node v0);

/// maxchord started from a node of maximum degree (smallest id on ties).
ChordalSubgraphResult maxchord(const ConflictGraph& g);

struct ChordalCompletion {
  ConflictGraph completed;
  std::vector<Edge> fill_edges;  // i < j, sorted; disjoint from g's edges
  PeoOrder elimination;          // perfect for `completed`
};

/// Minimum-degree chordal completion: repeatedly eliminate a node of minimum
/// current degree (simplicial nodes first among ties, then smallest id) and
/// join its remaining neighbours.
ChordalCompletion min_degree_completion(const ConflictGraph& g);

/// Random chordal graph built along a random ordering: each new node attaches
/// to a random subset of a uniformly chosen existing maximal clique. The
/// subset size is geometric: each member is kept with probability `density`
/// in turn until the first rejection. With density 1 the result is complete.
/// `max_clique` (0 = unbounded) caps the clique size.
ConflictGraph random_chordal_graph(int n, double density, std::uint64_t seed,
                                   int max_clique = 0);

}  // namespace csma
