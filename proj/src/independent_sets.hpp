// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "csma/graph.hpp"

namespace csma::detail {

inline std::vector<std::uint64_t> neighbor_masks(const ConflictGraph& g) {
  std::vector<std::uint64_t> nbr(g.size(), 0);
  for (Node i = 0; i < g.size(); ++i) {
    for (Node j : g.neighbors(i)) nbr[i] |= std::uint64_t{1} << j;
  }
  return nbr;
}

// Depth-first walk over the independent sets: branch on the lowest undecided
// id, "exclude" before "include", so the empty set is visited first.
// `visit(mask, weight)` receives the product of `factor[i]` over active i.
template <class Weight, class Visit>
void visit_independent_sets(const std::vector<std::uint64_t>& nbr, const Weight* factor,
                            Visit&& visit) {
  const int n = static_cast<int>(nbr.size());
  struct Frame {
    int next;
    std::uint64_t chosen;
    std::uint64_t blocked;
    Weight weight;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, 0, Weight(1)});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    while (f.next < n && (f.blocked >> f.next & 1)) ++f.next;
    if (f.next == n) {
      visit(f.chosen, f.weight);
      continue;
    }
    const int v = f.next;
    // Pushed in reverse so that "exclude" is popped first.
    stack.push_back({v + 1, f.chosen | std::uint64_t{1} << v, f.blocked | nbr[v],
                     f.weight * (factor ? factor[v] : Weight(1))});
    stack.push_back({v + 1, f.chosen, f.blocked, f.weight});
  }
}

}  // namespace csma::detail
