// SPDX-License-Identifier: Apache-2.0
#include "csma/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "csma/error.hpp"

namespace csma {

namespace {

// Product of positive factors. Switches to log-space accumulation as soon as
// one factor drops below 1e-6 so that long chains of small ratios cannot
// underflow.
class FactorProduct {
 public:
  void mul(double f) {
    if (f < kLogThreshold) use_log_ = true;
    direct_ *= f;
    log_ += std::log(f);
  }
  void div(double f) {
    if (f < kLogThreshold) use_log_ = true;
    direct_ /= f;
    log_ -= std::log(f);
  }
  double value() const { return use_log_ ? std::exp(log_) : direct_; }

 private:
  static constexpr double kLogThreshold = 1e-6;
  double direct_ = 1.0;
  double log_ = 0.0;
  bool use_log_ = false;
};

constexpr std::array<std::pair<Method, std::string_view>, 10> kMethodNames{{
    {Method::kTree, "tree"},
    {Method::kLine, "line"},
    {Method::kIline, "iline"},
    {Method::kChordalCliqueTree, "chordal-ct"},
    {Method::kChordalPeo, "chordal-peo"},
    {Method::kDistributed, "distributed"},
    {Method::kLcs, "lcs"},
    {Method::kBethe, "bethe"},
    {Method::kCompletion, "completion"},
    {Method::kLightTraffic, "light-traffic"},
}};

double set_sum(std::span<const Node> nodes, std::span<const double> theta) {
  double s = 0.0;
  for (Node v : nodes) s += theta[v];
  return s;
}

[[noreturn]] void unachievable(double margin, const std::string& where) {
  fail(ErrorCode::kUnachievable, "throughput vector is not achievable (" + where +
                                     " sums to " + std::to_string(1.0 - margin) + ")");
}

std::vector<NodeSet> edges_and_nodes(const ConflictGraph& g) {
  std::vector<NodeSet> sets;
  for (Node v = 0; v < g.size(); ++v) sets.push_back({v});
  for (auto [a, b] : g.edges()) sets.push_back({a, b});
  return sets;
}

void validate_rates(int n, std::span<const double> nu) {
  if (static_cast<int>(nu.size()) != n) {
    fail(ErrorCode::kInvalidArgument, "rate vector length differs from node count");
  }
  for (double v : nu) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::kInvalidArgument, "rates must be positive and finite");
    }
  }
}

// Acyclic formula; the caller decides whether the graph has to be a forest.
RateVector pairwise_rates(const ConflictGraph& g, std::span<const double> theta) {
  const double margin = clique_margin(edges_and_nodes(g), theta);
  if (margin <= kMarginEpsilon) unachievable(margin, "an edge");
  RateVector nu(g.size());
  for (Node i = 0; i < g.size(); ++i) {
    FactorProduct p;
    p.mul(theta[i]);
    const int d = g.degree(i);
    if (d == 0) {
      p.div(1.0 - theta[i]);
    } else {
      for (int k = 1; k < d; ++k) p.mul(1.0 - theta[i]);
    }
    for (Node j : g.neighbors(i)) p.div(1.0 - (theta[i] + theta[j]));
    nu[i] = p.value();
  }
  return nu;
}

struct LcsResult {
  RateVector rates;
  double margin;
};

LcsResult lcs_with_margin(const ConflictGraph& g, std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  LcsResult out{RateVector(g.size()), 1.0};
  for (Node i = 0; i < g.size(); ++i) {
    const NodeSet hood = g.closed_neighborhood(i);
    InducedSubgraph sub = induced_subgraph(g, hood);
    const Node self = sub.local_id(i);
    ThroughputVector local(hood.size());
    for (std::size_t k = 0; k < hood.size(); ++k) local[k] = theta[sub.to_parent[k]];
    ChordalSubgraphResult chordal = maxchord(sub.graph, self);
    double margin = clique_margin(maximal_cliques_chordal(chordal.subgraph, chordal.peo), local);
    out.margin = std::min(out.margin, margin);
    if (margin <= kMarginEpsilon) {
      fail(ErrorCode::kUnachievable, "local chordal subgraph of node " + std::to_string(i) +
                                         " has a clique summing to " +
                                         std::to_string(1.0 - margin));
    }
    out.rates[i] = chordal_rates_peo(chordal.subgraph, chordal.peo, local)[self];
  }
  return out;
}

}  // namespace

std::string_view method_name(Method m) {
  for (auto [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (auto [method, label] : kMethodNames) {
    if (label == name) return method;
  }
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> m;
    for (auto [method, name] : kMethodNames) m.push_back(method);
    return m;
  }();
  return methods;
}

void validate_throughputs(int n, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != n) {
    fail(ErrorCode::kInvalidArgument, "throughput vector has " + std::to_string(theta.size()) +
                                          " entries for " + std::to_string(n) + " nodes");
  }
  for (double t : theta) {
    if (!(t > 0.0 && t < 1.0)) {
      fail(ErrorCode::kInvalidArgument, "throughputs must lie strictly between 0 and 1");
    }
  }
}

double clique_margin(std::span<const NodeSet> cliques, std::span<const double> theta) {
  double worst = 0.0;
  for (const auto& k : cliques) worst = std::max(worst, set_sum(k, theta));
  return 1.0 - worst;
}

Achievability achievable(const ConflictGraph& g, std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  PeoOrder peo = mcs_peo(g);
  if (!verify_peo(g, peo)) {
    fail(ErrorCode::kNotChordal,
         "graph is not chordal; use the general (convex hull) achievability test");
  }
  const double margin = clique_margin(maximal_cliques_chordal(g, peo), theta);
  return {margin > kMarginEpsilon, margin};
}

RateVector tree_rates(const ConflictGraph& g, std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  if (!is_forest(g)) {
    fail(ErrorCode::kInvalidArgument, "graph has a cycle; the tree formula needs an acyclic graph");
  }
  return pairwise_rates(g, theta);
}

RateVector line_rates(int beta, std::span<const double> theta) {
  const int n = static_cast<int>(theta.size());
  validate_throughputs(n, theta);
  if (n < 1 || beta < 0 || beta >= n) {
    fail(ErrorCode::kInvalidArgument, "line needs n >= 1 and 0 <= beta < n");
  }
  // 1-based window sum theta_a + ... + theta_b; empty when a > b.
  auto window = [&](int a, int b) {
    double s = 0.0;
    for (int k = a; k <= b; ++k) s += theta[k - 1];
    return s;
  };
  double worst = 0.0;
  for (int i = 1; i + beta <= n; ++i) worst = std::max(worst, window(i, i + beta));
  if (1.0 - worst <= kMarginEpsilon) unachievable(1.0 - worst, "a window of beta+1 nodes");

  RateVector nu(n);
  for (int i = 1; i <= n; ++i) {
    const int lo = std::max(i, beta + 1);
    const int hi = std::min(i + beta, n);
    FactorProduct p;
    p.mul(theta[i - 1]);
    for (int j = lo; j <= hi - 1; ++j) p.mul(1.0 - window(j - beta + 1, j));
    for (int j = lo; j <= hi; ++j) p.div(1.0 - window(j - beta, j));
    nu[i - 1] = p.value();
  }
  return nu;
}

std::vector<double> clique_line_rates(std::span<const int> k_vec, int beta, double gamma) {
  const int n = static_cast<int>(k_vec.size());
  if (n < 1 || beta < 0 || beta >= n) {
    fail(ErrorCode::kInvalidArgument, "clique line needs at least one block and 0 <= beta < blocks");
  }
  if (std::any_of(k_vec.begin(), k_vec.end(), [](int k) { return k < 1; })) {
    fail(ErrorCode::kInvalidArgument, "clique sizes must be positive");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) fail(ErrorCode::kInvalidArgument, "gamma must lie in (0,1)");
  auto blocks = [&](int a, int b) {
    long s = 0;
    for (int k = a; k <= b; ++k) s += k_vec[k - 1];
    return static_cast<double>(s);
  };
  double widest = 0.0;
  for (int i = 1; i + beta <= n; ++i) widest = std::max(widest, blocks(i, i + beta));
  if (1.0 - gamma * widest <= kMarginEpsilon) {
    fail(ErrorCode::kUnachievable, "gamma must be below 1/K with K = " + std::to_string(widest));
  }
  std::vector<double> nu(n);
  for (int i = 1; i <= n; ++i) {
    const int lo = std::max(i, beta + 1);
    const int hi = std::min(i + beta, n);
    FactorProduct p;
    p.mul(gamma);
    for (int j = lo; j <= hi - 1; ++j) p.mul(1.0 - gamma * blocks(j - beta + 1, j));
    for (int j = lo; j <= hi; ++j) p.div(1.0 - gamma * blocks(j - beta, j));
    nu[i - 1] = p.value();
  }
  return nu;
}

RateVector iline_rates(std::span<const int> beta_vec, std::span<const double> theta) {
  const std::vector<NodeSet> cliques = iline_cliques(beta_vec);
  const int n = static_cast<int>(beta_vec.size()) - 1;
  validate_throughputs(n, theta);
  const double margin = clique_margin(cliques, theta);
  if (margin <= kMarginEpsilon) unachievable(margin, "a maximal clique");

  const int m = static_cast<int>(cliques.size());
  std::vector<double> clique_gap(m), overlap_gap(std::max(0, m - 1));
  for (int j = 0; j < m; ++j) clique_gap[j] = 1.0 - set_sum(cliques[j], theta);
  for (int j = 0; j + 1 < m; ++j) {
    NodeSet s;
    std::set_intersection(cliques[j].begin(), cliques[j].end(), cliques[j + 1].begin(),
                          cliques[j + 1].end(), std::back_inserter(s));
    overlap_gap[j] = 1.0 - set_sum(s, theta);
  }
  RateVector nu(n);
  for (Node i = 0; i < n; ++i) {
    // Cliques are intervals ordered by their first node, so the cliques
    // holding i are consecutive: first(i) .. last(i).
    int first = -1, last = -1;
    for (int j = 0; j < m; ++j) {
      if (cliques[j].front() <= i && i <= cliques[j].back()) {
        if (first < 0) first = j;
        last = j;
      }
    }
    FactorProduct p;
    p.mul(theta[i]);
    for (int j = first; j < last; ++j) p.mul(overlap_gap[j]);
    for (int j = first; j <= last; ++j) p.div(clique_gap[j]);
    nu[i] = p.value();
  }
  return nu;
}

RateVector chordal_rates_clique_tree(const ConflictGraph& g, const CliqueTree& t,
                                     std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  if (!is_chordal(g)) fail(ErrorCode::kNotChordal, "graph is not chordal; try --method lcs|bethe|completion");
  if (std::string why = clique_tree_violation(g, t); !why.empty()) {
    fail(ErrorCode::kInvalidArgument, "not a clique tree of the graph: " + why);
  }
  const double margin = clique_margin(t.cliques, theta);
  if (margin <= kMarginEpsilon) unachievable(margin, "a maximal clique");

  CliqueTree tree = t;
  fill_separators(tree);
  std::vector<FactorProduct> p(g.size());
  for (Node i = 0; i < g.size(); ++i) p[i].mul(theta[i]);
  for (const auto& s : tree.separators) {
    const double gap = 1.0 - set_sum(s, theta);
    for (Node i : s) p[i].mul(gap);
  }
  for (const auto& k : tree.cliques) {
    const double gap = 1.0 - set_sum(k, theta);
    for (Node i : k) p[i].div(gap);
  }
  RateVector nu(g.size());
  for (Node i = 0; i < g.size(); ++i) nu[i] = p[i].value();
  return nu;
}

RateVector chordal_rates_peo(const ConflictGraph& g, const PeoOrder& peo,
                             std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  if (!verify_peo(g, peo)) {
    fail(ErrorCode::kNotChordal, "ordering is not a perfect elimination ordering of the graph");
  }
  const int n = g.size();
  double worst = 0.0;
  for (Node v = 0; v < n; ++v) {
    worst = std::max(worst, theta[v] + set_sum(peo.later_neighbors[v], theta));
  }
  if (1.0 - worst <= kMarginEpsilon) unachievable(1.0 - worst, "a maximal clique");

  std::vector<FactorProduct> p(n);
  for (int k = n - 1; k >= 0; --k) {
    const Node v = peo.alpha[k];
    const NodeSet& m = peo.later_neighbors[v];
    const double later = set_sum(m, theta);
    const double gap = 1.0 - theta[v] - later;
    p[v].mul(theta[v]);
    p[v].div(gap);
    for (Node j : m) {
      p[j].mul(1.0 - later);
      p[j].div(gap);
    }
  }
  RateVector nu(n);
  for (Node i = 0; i < n; ++i) nu[i] = p[i].value();
  return nu;
}

RateVector chordal_rates(const ConflictGraph& g, std::span<const double> theta) {
  PeoOrder peo = mcs_peo(g);
  if (!verify_peo(g, peo)) fail(ErrorCode::kNotChordal, "graph is not chordal; try --method lcs|bethe|completion");
  return chordal_rates_peo(g, peo, theta);
}

double local_rate(const ConflictGraph& local, Node self, std::span<const double> theta_local) {
  if (self < 0 || self >= local.size()) fail(ErrorCode::kInvalidArgument, "self id out of range");
  if (local.degree(self) != local.size() - 1) {
    fail(ErrorCode::kInvalidArgument, "local graph must be the closed neighbourhood of self");
  }
  PeoOrder peo = mcs_peo(local);
  if (!verify_peo(local, peo)) {
    fail(ErrorCode::kNotChordal, "closed neighbourhood of node is not chordal");
  }
  return chordal_rates_peo(local, peo, theta_local)[self];
}

double distributed_rate(const ConflictGraph& g, Node i, std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  InducedSubgraph sub = induced_subgraph(g, g.closed_neighborhood(i));
  ThroughputVector local(sub.to_parent.size());
  for (std::size_t k = 0; k < local.size(); ++k) local[k] = theta[sub.to_parent[k]];
  return local_rate(sub.graph, sub.local_id(i), local);
}

RateVector distributed_rates(const ConflictGraph& g, std::span<const double> theta) {
  RateVector nu(g.size());
  for (Node i = 0; i < g.size(); ++i) nu[i] = distributed_rate(g, i, theta);
  return nu;
}

RateVector lcs_rates(const ConflictGraph& g, std::span<const double> theta) {
  return lcs_with_margin(g, theta).rates;
}

RateVector bethe_rates(const ConflictGraph& g, std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  return pairwise_rates(g, theta);
}

RateVector completion_rates(const ConflictGraph& g, std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  ChordalCompletion c = min_degree_completion(g);
  return chordal_rates_peo(c.completed, c.elimination, theta);
}

RateVector light_traffic_rates(const ConflictGraph& g, std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  RateVector nu(g.size());
  for (Node i = 0; i < g.size(); ++i) {
    double load = 1.0 + theta[i];
    for (Node j : g.neighbors(i)) load += theta[j];
    nu[i] = theta[i] * load;
  }
  return nu;
}

NodeAddition add_node_update(const ConflictGraph& g, std::span<const double> nu,
                             std::span<const double> theta, std::span<const Node> clique_neighbors,
                             double theta_new) {
  validate_rates(g.size(), nu);
  validate_throughputs(g.size(), theta);
  NodeSet clique(clique_neighbors.begin(), clique_neighbors.end());
  std::sort(clique.begin(), clique.end());
  if (std::adjacent_find(clique.begin(), clique.end()) != clique.end()) {
    fail(ErrorCode::kInvalidArgument, "clique neighbours contain duplicates");
  }
  for (Node v : clique) {
    if (v < 0 || v >= g.size()) fail(ErrorCode::kInvalidArgument, "clique neighbour out of range");
  }
  if (!g.is_clique(clique)) {
    fail(ErrorCode::kInvalidArgument, "neighbours of the new node must form a clique");
  }
  if (!(theta_new > 0.0 && theta_new < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "new throughput must lie in (0,1)");
  }
  const double load = set_sum(clique, theta);
  const double gap = 1.0 - theta_new - load;
  if (gap <= kMarginEpsilon) unachievable(1.0 - theta_new - load, "the new node's clique");

  NodeAddition out;
  out.rates.assign(nu.begin(), nu.end());
  const double scale = (1.0 - load) / gap;
  for (Node v : clique) out.rates[v] *= scale;
  out.new_rate = theta_new / gap;
  out.rates.push_back(out.new_rate);
  return out;
}

std::optional<int> detect_line(const ConflictGraph& g) {
  if (g.size() < 1) return std::nullopt;
  int beta = 0;
  for (auto [a, b] : g.edges()) beta = std::max(beta, b - a);
  if (beta >= g.size() || !(make_line(g.size(), beta) == g)) return std::nullopt;
  return beta;
}

std::optional<std::vector<int>> detect_iline(const ConflictGraph& g) {
  const int n = g.size();
  if (n < 1) return std::nullopt;
  std::vector<int> beta(n + 1, 0);
  for (Node i = 0; i < n; ++i) {
    const auto& nb = g.neighbors(i);
    if (!nb.empty() && nb.front() < i) beta[i] = i - nb.front();
  }
  try {
    if (make_iline(beta) == g) return beta;
  } catch (const Error&) {
  }
  return std::nullopt;
}

RateReport compute_rates(const ConflictGraph& g, std::span<const double> theta, Method method) {
  validate_throughputs(g.size(), theta);
  RateReport report{method, {}, 0.0};
  switch (method) {
    case Method::kTree:
      report.rates = tree_rates(g, theta);
      report.margin = clique_margin(edges_and_nodes(g), theta);
      break;
    case Method::kBethe:
      report.rates = bethe_rates(g, theta);
      report.margin = clique_margin(edges_and_nodes(g), theta);
      break;
    case Method::kLightTraffic:
      report.rates = light_traffic_rates(g, theta);
      report.margin = clique_margin(edges_and_nodes(g), theta);
      break;
    case Method::kLine: {
      auto beta = detect_line(g);
      if (!beta) fail(ErrorCode::kInvalidArgument, "graph is not a line network; try --method chordal-peo");
      report.rates = line_rates(*beta, theta);
      report.margin = achievable(g, theta).margin;
      break;
    }
    case Method::kIline: {
      auto beta = detect_iline(g);
      if (!beta) {
        fail(ErrorCode::kInvalidArgument,
             "graph is not an inhomogeneous line network; try --method chordal-peo");
      }
      report.rates = iline_rates(*beta, theta);
      report.margin = clique_margin(iline_cliques(*beta), theta);
      break;
    }
    case Method::kChordalCliqueTree: {
      if (!is_chordal(g)) fail(ErrorCode::kNotChordal, "graph not chordal; try --method lcs|bethe|completion");
      report.rates = chordal_rates_clique_tree(g, clique_tree(g), theta);
      report.margin = achievable(g, theta).margin;
      break;
    }
    case Method::kChordalPeo:
      report.rates = chordal_rates(g, theta);
      report.margin = achievable(g, theta).margin;
      break;
    case Method::kDistributed:
      if (!is_chordal(g)) fail(ErrorCode::kNotChordal, "graph not chordal; try --method lcs|bethe|completion");
      report.rates = distributed_rates(g, theta);
      report.margin = achievable(g, theta).margin;
      break;
    case Method::kLcs: {
      LcsResult r = lcs_with_margin(g, theta);
      report.rates = std::move(r.rates);
      report.margin = r.margin;
      break;
    }
    case Method::kCompletion: {
      ChordalCompletion c = min_degree_completion(g);
      report.rates = chordal_rates_peo(c.completed, c.elimination, theta);
      report.margin = clique_margin(maximal_cliques_chordal(c.completed, c.elimination), theta);
      break;
    }
  }
  return report;
}

}  // namespace csma
