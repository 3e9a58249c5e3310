// SPDX-License-Identifier: Apache-2.0
#include "csma/graph.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <numeric>
#include <string>

#include "csma/error.hpp"
#include "independent_sets.hpp"

namespace csma {

namespace {

std::atomic<int> g_enumeration_cap{kDefaultEnumerationCap};

void check_node(int n, Node i) {
  if (i < 0 || i >= n) {
    fail(ErrorCode::kInvalidArgument,
         "node id " + std::to_string(i) + " out of range [0," + std::to_string(n) + ")");
  }
}

}  // namespace

ConflictGraph::ConflictGraph(int n, std::span<const Edge> edges) {
  if (n < 0) fail(ErrorCode::kInvalidArgument, "negative node count");
  adjacency_.resize(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    check_node(n, a);
    check_node(n, b);
    if (a == b) fail(ErrorCode::kInvalidArgument, "self loop at node " + std::to_string(a));
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    edge_count_ += adj.size();
  }
  edge_count_ /= 2;
}

const NodeSet& ConflictGraph::neighbors(Node i) const {
  check_node(size(), i);
  return adjacency_[i];
}

bool ConflictGraph::has_edge(Node i, Node j) const {
  const auto& adj = neighbors(i);
  return std::binary_search(adj.begin(), adj.end(), j);
}

std::vector<Edge> ConflictGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Node i = 0; i < size(); ++i) {
    for (Node j : adjacency_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

NodeSet ConflictGraph::closed_neighborhood(Node i) const {
  NodeSet out = neighbors(i);
  out.insert(std::lower_bound(out.begin(), out.end(), i), i);
  return out;
}

bool ConflictGraph::is_clique(std::span<const Node> nodes) const {
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (!has_edge(nodes[a], nodes[b])) return false;
    }
  }
  return true;
}

Node InducedSubgraph::local_id(Node parent) const {
  auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent);
  if (it == to_parent.end() || *it != parent) return -1;
  return static_cast<Node>(it - to_parent.begin());
}

InducedSubgraph induced_subgraph(const ConflictGraph& g, std::span<const Node> nodes) {
  if (nodes.empty()) fail(ErrorCode::kInvalidArgument, "induced subgraph of an empty node set");
  InducedSubgraph sub;
  sub.to_parent.assign(nodes.begin(), nodes.end());
  std::sort(sub.to_parent.begin(), sub.to_parent.end());
  sub.to_parent.erase(std::unique(sub.to_parent.begin(), sub.to_parent.end()),
                      sub.to_parent.end());
  for (Node v : sub.to_parent) check_node(g.size(), v);

  std::vector<Edge> edges;
  for (std::size_t a = 0; a < sub.to_parent.size(); ++a) {
    for (Node w : g.neighbors(sub.to_parent[a])) {
      Node b = sub.local_id(w);
      if (b > static_cast<Node>(a)) edges.emplace_back(static_cast<Node>(a), b);
    }
  }
  sub.graph = ConflictGraph(static_cast<int>(sub.to_parent.size()), edges);
  return sub;
}

std::vector<int> connected_components(const ConflictGraph& g, int* count) {
  const int n = g.size();
  std::vector<int> comp(n, -1);
  int next = 0;
  std::vector<Node> stack;
  for (Node s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Node v = stack.back();
      stack.pop_back();
      for (Node w : g.neighbors(v)) {
        if (comp[w] < 0) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

bool is_forest(const ConflictGraph& g) {
  int components = 0;
  connected_components(g, &components);
  return g.edge_count() + static_cast<std::size_t>(components) ==
         static_cast<std::size_t>(g.size());
}

int max_clique_size(const ConflictGraph& g) {
  // Bron-Kerbosch with Tomita pivoting on sorted vectors. Conflict graphs in
  // this library are sparse enough that this is instantaneous for n in the
  // hundreds.
  int best = g.size() > 0 ? 1 : 0;
  std::function<void(int, NodeSet, NodeSet)> expand = [&](int depth, NodeSet p, NodeSet x) {
    if (p.empty()) {
      best = std::max(best, depth);
      return;
    }
    if (depth + static_cast<int>(p.size()) <= best) return;
    Node pivot = p.front();
    std::size_t pivot_hits = 0;
    for (const NodeSet* pool : {&p, &x}) {
      for (Node u : *pool) {
        const auto& nu = g.neighbors(u);
        std::size_t hits = 0;
        for (Node v : p) hits += std::binary_search(nu.begin(), nu.end(), v) ? 1 : 0;
        if (hits >= pivot_hits) {
          pivot_hits = hits;
          pivot = u;
        }
      }
    }
    const auto& np = g.neighbors(pivot);
    NodeSet candidates;
    std::set_difference(p.begin(), p.end(), np.begin(), np.end(), std::back_inserter(candidates));
    for (Node v : candidates) {
      const auto& nv = g.neighbors(v);
      NodeSet p2, x2;
      std::set_intersection(p.begin(), p.end(), nv.begin(), nv.end(), std::back_inserter(p2));
      std::set_intersection(x.begin(), x.end(), nv.begin(), nv.end(), std::back_inserter(x2));
      expand(depth + 1, std::move(p2), std::move(x2));
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
  };
  NodeSet all(g.size());
  std::iota(all.begin(), all.end(), 0);
  expand(0, std::move(all), {});
  return best;
}

int enumeration_cap() { return g_enumeration_cap.load(); }

void set_enumeration_cap(int cap) {
  if (cap < 1 || cap > 62) fail(ErrorCode::kInvalidArgument, "enumeration cap must be in [1,62]");
  g_enumeration_cap.store(cap);
}

std::vector<std::uint64_t> enumerate_independent_sets(const ConflictGraph& g) {
  const int n = g.size();
  if (n > enumeration_cap()) {
    fail(ErrorCode::kCapExceeded, "independent-set enumeration limited to n <= " +
                                      std::to_string(enumeration_cap()) + " (got " +
                                      std::to_string(n) + ")");
  }
  std::vector<std::uint64_t> out;
  detail::visit_independent_sets<double>(detail::neighbor_masks(g), nullptr,
                                         [&](std::uint64_t mask, double) { out.push_back(mask); });
  return out;
}

}  // namespace csma
