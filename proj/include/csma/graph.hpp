// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace csma {

using Node = int;
using NodeSet = std::vector<Node>;  // always sorted ascending, no duplicates
using Edge = std::pair<Node, Node>;

/// Undirected simple conflict graph on nodes 0..n-1.
///
/// Nodes are 0-based everywhere; node `k` here is node `k+1` in the usual
/// 1-based textbook numbering. Immutable after construction.
class ConflictGraph {
 public:
  ConflictGraph() = default;

  /// Builds the graph from an edge list. Duplicate edges are merged; self
  /// loops and out of range ids throw kInvalidArgument.
  ConflictGraph(int n, std::span<const Edge> edges);

  int size() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  const NodeSet& neighbors(Node i) const;
  int degree(Node i) const { return static_cast<int>(neighbors(i).size()); }
  bool has_edge(Node i, Node j) const;

  /// Edges with i < j, sorted lexicographically.
  std::vector<Edge> edges() const;

  /// Closed neighborhood N_i ∪ {i}.
  NodeSet closed_neighborhood(Node i) const;

  bool is_clique(std::span<const Node> nodes) const;

  friend bool operator==(const ConflictGraph&, const ConflictGraph&) = default;

 private:
  std::vector<NodeSet> adjacency_;
  std::size_t edge_count_ = 0;
};

struct InducedSubgraph {
  ConflictGraph graph;
  std::vector<Node> to_parent;  // local id -> parent id (ascending)

  /// Parent id -> local id, or -1 when the node is not in the subgraph.
  Node local_id(Node parent) const;
};

/// Subgraph induced by `nodes`, relabeled 0..|nodes|-1 in ascending id order.
InducedSubgraph induced_subgraph(const ConflictGraph& g, std::span<const Node> nodes);

/// Connected component index per node, components numbered by smallest member.
std::vector<int> connected_components(const ConflictGraph& g, int* count = nullptr);

bool is_forest(const ConflictGraph& g);

/// Size of a maximum clique (exact, Bron-Kerbosch with pivoting).
int max_clique_size(const ConflictGraph& g);

// ---------------------------------------------------------------------------
// Independent sets (the state space of the product-form chain)

inline constexpr int kDefaultEnumerationCap = 30;

/// Process-wide cap on n for exhaustive enumeration. Defaults to 30 and can be
/// lowered or raised (at most 62) by callers.
int enumeration_cap();
void set_enumeration_cap(int cap);

/// All independent sets as bitmasks (bit i set = node i active). The empty set
/// comes first; order is a depth-first branch on the lowest undecided id,
/// "exclude" before "include".
std::vector<std::uint64_t> enumerate_independent_sets(const ConflictGraph& g);

// ---------------------------------------------------------------------------
// Generators

struct GeometricGraph {
  ConflictGraph graph;
  std::vector<std::pair<double, double>> coords;
};

/// n points i.i.d. uniform on the unit square; edge iff distance < r.
GeometricGraph random_geometric_graph(int n, double r, std::uint64_t seed);

/// Edge (i,j) iff 0 < |i-j| <= beta.
ConflictGraph make_line(int n, int beta);

/// Interference vector of length n+1 in 1-based convention: entry k (0-based)
/// is beta_{k+1}; node k interferes with the previous beta_vec[k] nodes.
ConflictGraph make_iline(std::span<const int> beta_vec);

/// Ordered maximal cliques of the inhomogeneous line graph, sorted by their
/// smallest member.
std::vector<NodeSet> iline_cliques(std::span<const int> beta_vec);

/// Throws kInvalidArgument unless beta_vec is a valid interference vector.
void validate_iline_beta(std::span<const int> beta_vec);

/// Line of cliques: block b holds k_vec[b] nodes, and two nodes interfere iff
/// their blocks are at most beta apart.
ConflictGraph make_clique_line(std::span<const int> k_vec, int beta);

ConflictGraph make_ring(int n);
ConflictGraph make_complete(int n);
ConflictGraph make_star(int leaves);

/// Uniform random labelled tree (Pruefer sequence).
ConflictGraph random_tree(int n, std::uint64_t seed);

/// Random valid interference vector for an n-node inhomogeneous line, with
/// entries bounded by max_beta.
std::vector<int> random_iline_beta(int n, int max_beta, std::uint64_t seed);

/// Adds node n with the given neighbors.
ConflictGraph add_node(const ConflictGraph& g, std::span<const Node> neighbors);

}  // namespace csma
