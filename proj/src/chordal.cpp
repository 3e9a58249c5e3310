// SPDX-License-Identifier: Apache-2.0
#include "csma/chordal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "csma/error.hpp"
#include "csma/random.hpp"

namespace csma {

namespace {

void insert_sorted(NodeSet& s, Node v) { s.insert(std::lower_bound(s.begin(), s.end(), v), v); }

bool subset_of(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

// (label, degree, -id) ordering shared by MCS and MAXCHORD pivot selection.
bool better_pivot(const ConflictGraph& g, std::size_t label_a, Node a, std::size_t label_b,
                  Node b) {
  if (label_a != label_b) return label_a > label_b;
  if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
  return a < b;
}

Node max_degree_node(const ConflictGraph& g) {
  Node best = 0;
  for (Node v = 1; v < g.size(); ++v) {
    if (g.degree(v) > g.degree(best)) best = v;
  }
  return best;
}

}  // namespace

PeoOrder make_order(const ConflictGraph& g, std::vector<Node> alpha) {
  const int n = g.size();
  if (static_cast<int>(alpha.size()) != n) {
    fail(ErrorCode::kInvalidArgument, "ordering length differs from node count");
  }
  PeoOrder order;
  order.position.assign(n, -1);
  for (int k = 0; k < n; ++k) {
    Node v = alpha[k];
    if (v < 0 || v >= n || order.position[v] >= 0) {
      fail(ErrorCode::kInvalidArgument, "ordering is not a permutation of the nodes");
    }
    order.position[v] = k;
  }
  order.later_neighbors.resize(n);
  for (Node v = 0; v < n; ++v) {
    for (Node w : g.neighbors(v)) {
      if (order.position[w] > order.position[v]) order.later_neighbors[v].push_back(w);
    }
  }
  order.alpha = std::move(alpha);
  return order;
}

PeoOrder mcs_peo(const ConflictGraph& g, std::optional<Node> start) {
  const int n = g.size();
  std::vector<Node> alpha(n);
  if (n == 0) return make_order(g, alpha);
  Node first = start.value_or(max_degree_node(g));
  if (first < 0 || first >= n) fail(ErrorCode::kInvalidArgument, "MCS start node out of range");

  std::vector<std::size_t> label(n, 0);
  std::vector<char> numbered(n, 0);
  Node v = first;
  for (int k = n - 1;; --k) {
    alpha[k] = v;
    numbered[v] = 1;
    for (Node w : g.neighbors(v)) ++label[w];
    if (k == 0) break;
    Node next = -1;
    for (Node u = 0; u < n; ++u) {
      if (numbered[u]) continue;
      if (next < 0 || better_pivot(g, label[u], u, label[next], next)) next = u;
    }
    v = next;
  }
  return make_order(g, std::move(alpha));
}

bool verify_peo(const ConflictGraph& g, const PeoOrder& order) {
  if (static_cast<int>(order.later_neighbors.size()) != g.size()) {
    fail(ErrorCode::kInvalidArgument, "ordering does not match graph size");
  }
  for (const auto& m : order.later_neighbors) {
    if (!g.is_clique(m)) return false;
  }
  return true;
}

bool verify_peo(const ConflictGraph& g, std::span<const Node> alpha) {
  return verify_peo(g, make_order(g, std::vector<Node>(alpha.begin(), alpha.end())));
}

bool is_chordal(const ConflictGraph& g) { return verify_peo(g, mcs_peo(g)); }

std::vector<NodeSet> maximal_cliques_chordal(const ConflictGraph& g, const PeoOrder& peo) {
  if (!verify_peo(g, peo)) fail(ErrorCode::kNotChordal, "ordering is not a perfect elimination ordering");
  std::vector<NodeSet> cliques;
  for (int k = g.size() - 1; k >= 0; --k) {
    const Node v = peo.alpha[k];
    const NodeSet& m = peo.later_neighbors[v];
    // {v} ∪ M_v is contained in {u} ∪ M_u only for an earlier neighbour u
    // with M_v ⊆ M_u.
    bool maximal = true;
    for (Node u : g.neighbors(v)) {
      if (peo.position[u] < k && subset_of(m, peo.later_neighbors[u])) {
        maximal = false;
        break;
      }
    }
    if (maximal) {
      NodeSet c = m;
      insert_sorted(c, v);
      cliques.push_back(std::move(c));
    }
  }
  return cliques;
}

CliqueTree clique_tree(const ConflictGraph& g, const PeoOrder& peo) {
  if (!verify_peo(g, peo)) fail(ErrorCode::kNotChordal, "graph is not chordal or ordering is not perfect");
  const int n = g.size();
  CliqueTree t;
  std::vector<int> clique_of(n, -1);
  for (int k = n - 1; k >= 0; --k) {
    const Node v = peo.alpha[k];
    const NodeSet& m = peo.later_neighbors[v];
    if (m.empty()) {
      clique_of[v] = t.clique_count();
      t.cliques.push_back({v});
      continue;
    }
    // The earliest member u of M_v satisfies M_v ⊆ {u} ∪ M_u, and the clique
    // recorded for u only ever grows, so it still contains M_v.
    Node u = *std::min_element(m.begin(), m.end(), [&](Node a, Node b) {
      return peo.position[a] < peo.position[b];
    });
    const int host = clique_of[u];
    if (t.cliques[host].size() == m.size()) {
      insert_sorted(t.cliques[host], v);
      clique_of[v] = host;
    } else {
      NodeSet c = m;
      insert_sorted(c, v);
      clique_of[v] = t.clique_count();
      t.cliques.push_back(std::move(c));
      t.tree_edges.emplace_back(host, clique_of[v]);
    }
  }
  fill_separators(t);
  return t;
}

CliqueTree clique_tree(const ConflictGraph& g) { return clique_tree(g, mcs_peo(g)); }

void fill_separators(CliqueTree& t) {
  t.separators.clear();
  for (auto [a, b] : t.tree_edges) {
    if (a < 0 || b < 0 || a >= t.clique_count() || b >= t.clique_count()) {
      fail(ErrorCode::kInvalidArgument, "clique tree edge refers to a missing clique");
    }
    NodeSet s;
    std::set_intersection(t.cliques[a].begin(), t.cliques[a].end(), t.cliques[b].begin(),
                          t.cliques[b].end(), std::back_inserter(s));
    t.separators.push_back(std::move(s));
  }
}

std::string clique_tree_violation(const ConflictGraph& g, const CliqueTree& t) {
  if (!is_chordal(g)) return "graph is not chordal";
  const int m = t.clique_count();
  for (const auto& c : t.cliques) {
    if (c.empty() || !std::is_sorted(c.begin(), c.end()) ||
        std::adjacent_find(c.begin(), c.end()) != c.end()) {
      return "clique is empty or not a sorted node set";
    }
    if (c.front() < 0 || c.back() >= g.size()) return "clique refers to a missing node";
    if (!g.is_clique(c)) return "clique is not complete in the graph";
  }
  auto expected = maximal_cliques_chordal(g, mcs_peo(g));
  auto actual = t.cliques;
  std::sort(expected.begin(), expected.end());
  std::sort(actual.begin(), actual.end());
  if (expected != actual) return "cliques are not exactly the maximal cliques";

  int components = 0;
  connected_components(g, &components);
  if (static_cast<int>(t.tree_edges.size()) != m - components) {
    return "tree edge count does not give one tree per component";
  }
  DisjointSets dsu(m);
  for (auto [a, b] : t.tree_edges) {
    if (a < 0 || b < 0 || a >= m || b >= m || a == b) return "invalid tree edge";
    if (!dsu.unite(a, b)) return "tree edges contain a cycle";
  }
  std::vector<int> cliques_with(g.size(), 0), edges_with(g.size(), 0);
  for (const auto& c : t.cliques) {
    for (Node v : c) ++cliques_with[v];
  }
  for (auto [a, b] : t.tree_edges) {
    NodeSet s;
    std::set_intersection(t.cliques[a].begin(), t.cliques[a].end(), t.cliques[b].begin(),
                          t.cliques[b].end(), std::back_inserter(s));
    for (Node v : s) ++edges_with[v];
  }
  for (Node v = 0; v < g.size(); ++v) {
    if (edges_with[v] != cliques_with[v] - 1) {
      return "cliques containing node " + std::to_string(v) + " are not connected in the tree";
    }
  }
  if (!t.separators.empty()) {
    CliqueTree copy = t;
    fill_separators(copy);
    if (copy.separators != t.separators) return "separator does not match clique intersection";
  }
  return {};
}

std::vector<NodeSet> separator_multiset(const CliqueTree& t) {
  CliqueTree copy = t;
  fill_separators(copy);
  std::sort(copy.separators.begin(), copy.separators.end());
  return copy.separators;
}

ChordalSubgraphResult maxchord(const ConflictGraph& g, Node v0) {
  const int n = g.size();
  if (v0 < 0 || v0 >= n) fail(ErrorCode::kInvalidArgument, "MAXCHORD start node out of range");
  std::vector<NodeSet> label(n);
  std::vector<char> placed(n, 0);
  std::vector<Node> alpha(n);
  std::vector<Edge> kept;
  Node pivot = v0;
  for (int k = n - 1;; --k) {
    alpha[k] = pivot;
    placed[pivot] = 1;
    if (k == 0) break;
    for (Node u : g.neighbors(pivot)) {
      if (placed[u]) continue;
      if (subset_of(label[u], label[pivot])) {
        insert_sorted(label[u], pivot);
        kept.emplace_back(std::min(u, pivot), std::max(u, pivot));
      }
    }
    Node next = -1;
    for (Node u = 0; u < n; ++u) {
      if (placed[u]) continue;
      if (next < 0 || better_pivot(g, label[u].size(), u, label[next].size(), next)) next = u;
    }
    pivot = next;
  }
  ChordalSubgraphResult out;
  out.subgraph = ConflictGraph(n, kept);
  out.peo = make_order(out.subgraph, std::move(alpha));
  return out;
}

ChordalSubgraphResult maxchord(const ConflictGraph& g) {
  if (g.size() == 0) fail(ErrorCode::kInvalidArgument, "MAXCHORD on an empty graph");
  return maxchord(g, max_degree_node(g));
}

ChordalCompletion min_degree_completion(const ConflictGraph& g) {
  const int n = g.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<NodeSet> live(n);
  for (Node v = 0; v < n; ++v) {
    live[v] = g.neighbors(v);
    for (Node w : live[v]) adj[v][w] = 1;
  }
  auto simplicial = [&](Node v) {
    const auto& nb = live[v];
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (!adj[nb[a]][nb[b]]) return false;
      }
    }
    return true;
  };

  ChordalCompletion out;
  std::vector<char> eliminated(n, 0);
  std::vector<Node> alpha;
  alpha.reserve(n);
  for (int step = 0; step < n; ++step) {
    Node pick = -1;
    bool pick_simplicial = false;
    for (Node v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      if (pick < 0 || live[v].size() < live[pick].size()) {
        pick = v;
        pick_simplicial = simplicial(v);
      } else if (live[v].size() == live[pick].size() && !pick_simplicial && simplicial(v)) {
        pick = v;
        pick_simplicial = true;
      }
    }
    const NodeSet nb = live[pick];
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        Node x = nb[a], y = nb[b];
        if (!adj[x][y]) {
          adj[x][y] = adj[y][x] = 1;
          insert_sorted(live[x], y);
          insert_sorted(live[y], x);
          out.fill_edges.emplace_back(x, y);
        }
      }
    }
    for (Node w : nb) live[w].erase(std::lower_bound(live[w].begin(), live[w].end(), pick));
    eliminated[pick] = 1;
    alpha.push_back(pick);
  }
  std::sort(out.fill_edges.begin(), out.fill_edges.end());
  std::vector<Edge> all = g.edges();
  all.insert(all.end(), out.fill_edges.begin(), out.fill_edges.end());
  out.completed = ConflictGraph(n, all);
  out.elimination = make_order(out.completed, std::move(alpha));
  return out;
}

ConflictGraph random_chordal_graph(int n, double density, std::uint64_t seed, int max_clique) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "random chordal graph needs n >= 1");
  if (!(density >= 0.0 && density <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "density must lie in [0,1]");
  }
  if (max_clique < 0) fail(ErrorCode::kInvalidArgument, "max_clique must be >= 0");
  Rng rng(seed);
  std::vector<Node> alpha(n);
  std::iota(alpha.begin(), alpha.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(alpha[i], alpha[rng.below(i + 1)]);

  const std::size_t cap = max_clique > 0 ? static_cast<std::size_t>(max_clique - 1) : SIZE_MAX;
  std::vector<NodeSet> cliques{{alpha[n - 1]}};
  std::vector<Edge> edges;
  for (int k = n - 2; k >= 0; --k) {
    const Node v = alpha[k];
    const std::size_t host = rng.below(cliques.size());
    NodeSet pool = cliques[host];
    for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
    NodeSet m;
    while (m.size() < pool.size() && m.size() < cap && rng.bernoulli(density)) {
      m.push_back(pool[m.size()]);
    }
    std::sort(m.begin(), m.end());
    for (Node w : m) edges.emplace_back(std::min(v, w), std::max(v, w));
    if (m.size() == cliques[host].size()) {
      insert_sorted(cliques[host], v);
    } else {
      insert_sorted(m, v);
      cliques.push_back(std::move(m));
    }
  }
  return ConflictGraph(n, edges);
}

}  // namespace csma
