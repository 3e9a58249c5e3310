// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "csma/chordal.hpp"
#include "csma/error.hpp"
#include "csma/graph.hpp"

namespace fixture {

using csma::ConflictGraph;
using csma::Edge;

// Builds a graph from 1-based edges.
inline ConflictGraph one_based(int n, std::vector<Edge> edges) {
  for (auto& [a, b] : edges) {
    --a;
    --b;
  }
  return ConflictGraph(n, edges);
}

// Eleven-node chordal graph with six maximal cliques:
// {1,2} {3,4,5,6,7} {2,3,7,8} {7,8,10} {8,9} {7,8,11} (1-based).
inline ConflictGraph eleven_node_chordal() {
  return one_based(11, {{1, 2}, {2, 3}, {2, 7}, {2, 8}, {3, 4}, {3, 5}, {3, 6}, {3, 7}, {3, 8}, {4, 5}, {4, 6},
                        {4, 7}, {5, 6}, {5, 7}, {6, 7}, {7, 8}, {7, 10}, {7, 11}, {8, 9}, {8, 10}, {8, 11}});
}

// The clique tree drawn for it, 0-based; the third edge joins {1,2,6,7}
// and {6,7,9}.
inline csma::CliqueTree eleven_node_tree() {
  csma::CliqueTree t;
  t.cliques = {{0, 1}, {2, 3, 4, 5, 6}, {1, 2, 6, 7}, {6, 7, 9}, {7, 8}, {6, 7, 10}};
  t.tree_edges = {{0, 2}, {1, 2}, {2, 5}, {2, 3}, {3, 4}};
  csma::fill_separators(t);
  return t;
}

// Four-cycle 0-1-2-3 plus node 4 joined to 2 and 3.
inline ConflictGraph house() { return ConflictGraph(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {2, 4}, {3, 4}}); }

inline void expect_error(csma::ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected an error";
  } catch (const csma::Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace fixture
