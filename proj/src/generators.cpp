// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "csma/error.hpp"
#include "csma/graph.hpp"
#include "csma/random.hpp"

namespace csma {

GeometricGraph random_geometric_graph(int n, double r, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "geometric graph needs n >= 1");
  if (!(r > 0.0) || !std::isfinite(r)) {
    fail(ErrorCode::kInvalidArgument, "geometric graph needs a positive finite radius");
  }
  Rng rng(seed);
  GeometricGraph out;
  out.coords.reserve(n);
  for (int i = 0; i < n; ++i) {
    double x = rng.uniform();
    double y = rng.uniform();
    out.coords.emplace_back(x, y);
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = std::hypot(out.coords[i].first - out.coords[j].first,
                            out.coords[i].second - out.coords[j].second);
      if (d < r) edges.emplace_back(i, j);
    }
  }
  out.graph = ConflictGraph(n, edges);
  return out;
}

ConflictGraph make_line(int n, int beta) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "line needs n >= 1");
  if (beta < 0 || beta >= n) {
    fail(ErrorCode::kInvalidArgument, "line interference range must satisfy 0 <= beta < n");
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= std::min(n - 1, i + beta); ++j) edges.emplace_back(i, j);
  }
  return ConflictGraph(n, edges);
}

void validate_iline_beta(std::span<const int> beta_vec) {
  if (beta_vec.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "interference vector needs n+1 >= 2 entries");
  }
  const int n = static_cast<int>(beta_vec.size()) - 1;
  if (beta_vec[0] != 0 || beta_vec[n] != 0) {
    fail(ErrorCode::kInvalidArgument, "interference vector must start and end with 0");
  }
  for (int k = 1; k < n; ++k) {
    const int b = beta_vec[k];
    if (b < 1 || b > k || b > beta_vec[k - 1] + 1) {
      fail(ErrorCode::kInvalidArgument,
           "invalid interference entry " + std::to_string(b) + " at position " +
               std::to_string(k + 1) + " (need 1 <= beta_i <= beta_{i-1}+1)");
    }
  }
}

ConflictGraph make_iline(std::span<const int> beta_vec) {
  validate_iline_beta(beta_vec);
  const int n = static_cast<int>(beta_vec.size()) - 1;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i - beta_vec[i]; j < i; ++j) edges.emplace_back(j, i);
  }
  return ConflictGraph(n, edges);
}

std::vector<NodeSet> iline_cliques(std::span<const int> beta_vec) {
  validate_iline_beta(beta_vec);
  const int n = static_cast<int>(beta_vec.size()) - 1;
  std::vector<NodeSet> cliques;
  for (int i = 0; i < n; ++i) {
    if (beta_vec[i] >= beta_vec[i + 1]) {
      NodeSet k(beta_vec[i] + 1);
      std::iota(k.begin(), k.end(), i - beta_vec[i]);
      cliques.push_back(std::move(k));
    }
  }
  std::sort(cliques.begin(), cliques.end(),
            [](const NodeSet& a, const NodeSet& b) { return a.front() < b.front(); });
  return cliques;
}

ConflictGraph make_clique_line(std::span<const int> k_vec, int beta) {
  const int blocks = static_cast<int>(k_vec.size());
  if (blocks < 1) fail(ErrorCode::kInvalidArgument, "clique line needs at least one block");
  if (beta < 0 || beta >= blocks) {
    fail(ErrorCode::kInvalidArgument, "clique line range must satisfy 0 <= beta < blocks");
  }
  std::vector<int> first(blocks + 1, 0);
  for (int b = 0; b < blocks; ++b) {
    if (k_vec[b] < 1) fail(ErrorCode::kInvalidArgument, "clique sizes must be positive");
    first[b + 1] = first[b] + k_vec[b];
  }
  std::vector<Edge> edges;
  for (int b = 0; b < blocks; ++b) {
    for (int u = first[b]; u < first[b + 1]; ++u) {
      for (int v = u + 1; v < first[std::min(blocks, b + beta + 1)]; ++v) edges.emplace_back(u, v);
    }
  }
  return ConflictGraph(first[blocks], edges);
}

ConflictGraph make_ring(int n) {
  if (n < 3) fail(ErrorCode::kInvalidArgument, "ring needs n >= 3");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return ConflictGraph(n, edges);
}

ConflictGraph make_complete(int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "complete graph needs n >= 1");
  return make_line(n, n - 1);
}

ConflictGraph make_star(int leaves) {
  if (leaves < 0) fail(ErrorCode::kInvalidArgument, "negative leaf count");
  std::vector<Edge> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return ConflictGraph(leaves + 1, edges);
}

ConflictGraph random_tree(int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "tree needs n >= 1");
  if (n <= 2) {
    std::vector<Edge> edges;
    if (n == 2) edges.emplace_back(0, 1);
    return ConflictGraph(n, edges);
  }
  Rng rng(seed);
  std::vector<int> code(n - 2);
  for (int& c : code) c = static_cast<int>(rng.below(n));
  std::vector<int> degree(n, 1);
  for (int c : code) ++degree[c];
  std::vector<Edge> edges;
  for (int c : code) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(leaf, c);
    --degree[leaf];
    --degree[c];
  }
  int u = -1;
  for (int i = 0; i < n; ++i) {
    if (degree[i] == 1) {
      if (u < 0) {
        u = i;
      } else {
        edges.emplace_back(u, i);
      }
    }
  }
  return ConflictGraph(n, edges);
}

std::vector<int> random_iline_beta(int n, int max_beta, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "inhomogeneous line needs n >= 1");
  if (max_beta < 1) fail(ErrorCode::kInvalidArgument, "max_beta must be >= 1");
  Rng rng(seed);
  std::vector<int> beta(n + 1, 0);
  for (int k = 1; k < n; ++k) {
    int upper = std::min({beta[k - 1] + 1, k, max_beta});
    beta[k] = 1 + static_cast<int>(rng.below(upper));
  }
  return beta;
}

ConflictGraph add_node(const ConflictGraph& g, std::span<const Node> neighbors) {
  std::vector<Edge> edges = g.edges();
  const int n = g.size();
  for (Node v : neighbors) {
    if (v < 0 || v >= n) fail(ErrorCode::kInvalidArgument, "new node neighbor out of range");
    edges.emplace_back(v, n);
  }
  return ConflictGraph(n + 1, edges);
}

}  // namespace csma
