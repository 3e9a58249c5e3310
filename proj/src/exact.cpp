// SPDX-License-Identifier: Apache-2.0
#include "csma/exact.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "csma/error.hpp"
#include "independent_sets.hpp"

namespace csma {

namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  long double sum = 0.0L;
  long double carry = 0.0L;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + carry; }
};

void check_cap(const ConflictGraph& g, int cap) {
  if (g.size() > cap) {
    fail(ErrorCode::kCapExceeded, "exhaustive enumeration limited to " + std::to_string(cap) +
                                      " nodes; graph has " + std::to_string(g.size()) +
                                      " (raise CSMA_MAX_ENUM_NODES or use the simulator)");
  }
}

void validate_rates(const ConflictGraph& g, std::span<const double> nu) {
  if (static_cast<int>(nu.size()) != g.size()) {
    fail(ErrorCode::kInvalidArgument, "rate vector has " + std::to_string(nu.size()) +
                                          " entries for " + std::to_string(g.size()) + " nodes");
  }
  for (double v : nu) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::kInvalidArgument, "rates must be positive and finite");
    }
  }
}

double gap(std::span<const Node> nodes, std::span<const double> theta) {
  double s = 0.0;
  for (Node v : nodes) s += theta[v];
  return 1.0 - s;
}

void validate_tree_theta(const CliqueTree& t, std::span<const double> theta) {
  Node top = -1;
  for (const auto& k : t.cliques) {
    if (!k.empty()) top = std::max(top, k.back());
  }
  if (static_cast<int>(theta.size()) <= top) {
    fail(ErrorCode::kInvalidArgument, "throughput vector shorter than the clique tree's node range");
  }
  for (double x : theta) {
    if (!(x > 0.0 && x < 1.0)) {
      fail(ErrorCode::kInvalidArgument, "throughputs must lie strictly between 0 and 1");
    }
  }
  for (auto [a, b] : t.tree_edges) {
    if (a < 0 || b < 0 || a >= t.clique_count() || b >= t.clique_count()) {
      fail(ErrorCode::kInvalidArgument, "tree edge refers to a missing clique");
    }
  }
  const double margin = clique_margin(t.cliques, theta);
  if (margin <= kMarginEpsilon) {
    fail(ErrorCode::kUnachievable, "a maximal clique sums to " + std::to_string(1.0 - margin));
  }
}

NodeSet intersect(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Dense two-phase simplex for: max t subject to
//   sum_z eta_z z + t * count = theta,  sum_z eta_z + t * |states| = 1,
//   eta >= 0, t >= 0,
// which is the problem "largest common lower bound t on convex weights xi_z =
// eta_z + t". Columns are the states, then t, then one artificial per row.
class SlackLp {
 public:
  SlackLp(const std::vector<std::uint64_t>& states, std::span<const double> theta)
      : rows_(static_cast<int>(theta.size()) + 1),
        states_(static_cast<int>(states.size())),
        cols_(states_ + 1 + rows_),
        tab_(static_cast<std::size_t>(rows_) * (cols_ + 1), 0.0),
        basis_(rows_) {
    const int n = rows_ - 1;
    for (int j = 0; j < states_; ++j) {
      for (int r = 0; r < n; ++r) {
        if (states[j] >> r & 1) at(r, j) = 1.0;
      }
      at(n, j) = 1.0;
    }
    for (int r = 0; r < n; ++r) {
      double count = 0.0;
      for (int j = 0; j < states_; ++j) count += at(r, j);
      at(r, states_) = count;
      rhs(r) = theta[r];
    }
    at(n, states_) = states_;
    rhs(n) = 1.0;
    for (int r = 0; r < rows_; ++r) {
      at(r, states_ + 1 + r) = 1.0;
      basis_[r] = states_ + 1 + r;
    }
  }

  // Returns the optimal t, or a negative value (minus the leftover
  // infeasibility) when theta lies outside the hull.
  double solve() {
    const int real_cols = states_ + 1;
    std::vector<double> cost(cols_, 0.0);
    for (int r = 0; r < rows_; ++r) cost[states_ + 1 + r] = 1.0;
    optimize(cost, cols_);
    double infeasibility = 0.0;
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] > states_) infeasibility += rhs(r);
    }
    if (infeasibility > 1e-9) return -infeasibility;

    // Pivot leftover zero-level artificials out where possible.
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] <= states_) continue;
      for (int j = 0; j < real_cols; ++j) {
        if (std::fabs(at(r, j)) > kPivotTol) {
          pivot(r, j);
          break;
        }
      }
    }
    std::fill(cost.begin(), cost.end(), 0.0);
    cost[states_] = -1.0;
    optimize(cost, real_cols);
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] == states_) return rhs(r);
    }
    return 0.0;
  }

 private:
  static constexpr double kPivotTol = 1e-11;

  double& at(int r, int c) { return tab_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Minimizes cost over the first `allowed` columns. Dantzig pricing with a
  // switch to Bland's rule after a run of degenerate pivots.
  void optimize(const std::vector<double>& cost, int allowed) {
    int degenerate_run = 0;
    for (long iter = 0; iter < 1'000'000; ++iter) {
      const bool bland = degenerate_run > 50;
      int enter = -1;
      double best = -1e-12;
      for (int j = 0; j < allowed; ++j) {
        double d = cost[j];
        for (int r = 0; r < rows_; ++r) d -= cost[basis_[r]] * at(r, j);
        if (d < best) {
          enter = j;
          best = d;
          if (bland) break;
        }
      }
      if (enter < 0) return;
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double q = rhs(r) / a;
        if (q < ratio - 1e-15 || (q <= ratio + 1e-15 && leave >= 0 && basis_[r] < basis_[leave])) {
          ratio = q;
          leave = r;
        }
      }
      if (leave < 0) return;  // unbounded; cannot happen here
      degenerate_run = ratio <= 1e-15 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
    fail(ErrorCode::kNoConvergence, "simplex iteration limit reached");
  }

  int rows_;
  int states_;
  int cols_;
  std::vector<double> tab_;
  std::vector<int> basis_;
};

}  // namespace

double partition_function(const ConflictGraph& g, std::span<const double> nu) {
  validate_rates(g, nu);
  check_cap(g, enumeration_cap());
  std::vector<long double> factor(nu.begin(), nu.end());
  CompensatedSum z;
  detail::visit_independent_sets<long double>(
      detail::neighbor_masks(g), factor.data(),
      [&](std::uint64_t, long double w) { z.add(w); });
  return static_cast<double>(z.value());
}

ProductFormSolution stationary_throughputs(const ConflictGraph& g, std::span<const double> nu,
                                           bool keep_distribution) {
  validate_rates(g, nu);
  check_cap(g, enumeration_cap());
  const int n = g.size();
  std::vector<long double> factor(nu.begin(), nu.end());
  CompensatedSum z;
  std::vector<CompensatedSum> busy(n);
  std::vector<long double> weights;
  ProductFormSolution out;
  detail::visit_independent_sets<long double>(
      detail::neighbor_masks(g), factor.data(), [&](std::uint64_t mask, long double w) {
        z.add(w);
        for (std::uint64_t m = mask; m != 0; m &= m - 1) busy[std::countr_zero(m)].add(w);
        if (keep_distribution) {
          weights.push_back(w);
          out.states.push_back(mask);
        }
      });
  const long double total = z.value();
  out.Z = static_cast<double>(total);
  out.throughputs.resize(n);
  for (int i = 0; i < n; ++i) out.throughputs[i] = static_cast<double>(busy[i].value() / total);
  if (keep_distribution) {
    std::vector<double> pi(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) pi[k] = static_cast<double>(weights[k] / total);
    out.pi = std::move(pi);
  }
  return out;
}

GeneralAchievability achievable_general(const ConflictGraph& g, std::span<const double> theta,
                                        double min_slack) {
  validate_throughputs(g.size(), theta);
  check_cap(g, std::min(kGeneralGraphCap, enumeration_cap()));
  std::vector<std::uint64_t> states;
  detail::visit_independent_sets<double>(detail::neighbor_masks(g), nullptr,
                                         [&](std::uint64_t mask, double) { states.push_back(mask); });
  SlackLp lp(states, theta);
  const double t = lp.solve();
  return {t >= min_slack, t};
}

Inversion invert_rates_bruteforce(const ConflictGraph& g, std::span<const double> theta,
                                  const InversionOptions& opts) {
  const int n = g.size();
  validate_throughputs(n, theta);
  check_cap(g, std::min(kGeneralGraphCap, enumeration_cap()));
  if (!(opts.tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tolerance must be positive");
  const GeneralAchievability reach = achievable_general(g, theta, opts.min_slack);
  if (!reach.achievable) {
    fail(ErrorCode::kUnachievable,
         "throughput vector is not in the interior of the achievable region (LP slack " +
             std::to_string(reach.slack) + ")");
  }

  std::vector<double> log_nu(n), step(n, 1.0), last(n, 0.0);
  for (Node i = 0; i < n; ++i) log_nu[i] = std::log(theta[i] / (1.0 - theta[i]));
  RateVector nu(n);
  for (long iter = 0; iter < opts.max_iterations; ++iter) {
    for (Node i = 0; i < n; ++i) nu[i] = std::exp(log_nu[i]);
    const ThroughputVector hat = stationary_throughputs(g, nu).throughputs;
    double residual = 0.0;
    for (Node i = 0; i < n; ++i) residual = std::max(residual, std::fabs(hat[i] - theta[i]));
    if (residual <= opts.tol) return {nu, iter, residual};
    for (Node i = 0; i < n; ++i) {
      const double r = std::log(theta[i]) - std::log(hat[i]);
      if (r * last[i] < 0.0) {
        step[i] = std::max(step[i] * 0.5, 1.0 / 64.0);
      } else {
        step[i] = std::min(step[i] * 1.25, 1.0);
      }
      last[i] = r;
      log_nu[i] += step[i] * r;
    }
  }
  fail(ErrorCode::kNoConvergence, "rate inversion did not converge within " +
                                      std::to_string(opts.max_iterations) + " iterations");
}

double z_tree_closed_form(const ConflictGraph& g, std::span<const double> theta) {
  validate_throughputs(g.size(), theta);
  if (!is_forest(g)) fail(ErrorCode::kInvalidArgument, "graph has a cycle");
  double log_z = 0.0;
  for (Node j = 0; j < g.size(); ++j) log_z += (g.degree(j) - 1) * std::log1p(-theta[j]);
  for (auto [k, j] : g.edges()) {
    const double gap_kj = 1.0 - (theta[k] + theta[j]);
    if (gap_kj <= kMarginEpsilon) {
      fail(ErrorCode::kUnachievable, "edge (" + std::to_string(k) + "," + std::to_string(j) +
                                         ") sums to " + std::to_string(1.0 - gap_kj));
    }
    log_z -= std::log(gap_kj);
  }
  return std::exp(log_z);
}

double z_line_closed_form(int beta, std::span<const double> theta) {
  const int n = static_cast<int>(theta.size());
  validate_throughputs(n, theta);
  if (n < 1 || beta < 0 || beta >= n) {
    fail(ErrorCode::kInvalidArgument, "line needs n >= 1 and 0 <= beta < n");
  }
  auto window_gap = [&](int a, int b) {  // 1-based, inclusive
    double s = 0.0;
    for (int k = a; k <= b; ++k) s += theta[k - 1];
    return 1.0 - s;
  };
  double log_z = 0.0;
  for (int j = beta + 1; j <= n; ++j) {
    const double outer = window_gap(j - beta, j);
    if (outer <= kMarginEpsilon) {
      fail(ErrorCode::kUnachievable, "window ending at node " + std::to_string(j) +
                                         " sums to " + std::to_string(1.0 - outer));
    }
    log_z -= std::log(outer);
    if (j <= n - 1) log_z += std::log(window_gap(j - beta + 1, j));
  }
  return std::exp(log_z);
}

double z_chordal_closed_form(const CliqueTree& t, std::span<const double> theta) {
  validate_tree_theta(t, theta);
  double log_z = 0.0;
  for (auto [a, b] : t.tree_edges) log_z += std::log(gap(intersect(t.cliques[a], t.cliques[b]), theta));
  for (const auto& k : t.cliques) log_z -= std::log(gap(k, theta));
  return std::exp(log_z);
}

SubtreeConstant z_chordal_subtree(const CliqueTree& t, int edge, int side,
                                  std::span<const double> theta) {
  if (edge < 0 || edge >= static_cast<int>(t.tree_edges.size())) {
    fail(ErrorCode::kInvalidArgument, "tree edge index out of range");
  }
  const auto [a, b] = t.tree_edges[edge];
  if (side != a && side != b) {
    fail(ErrorCode::kInvalidArgument, "side must be one of the edge's cliques");
  }
  validate_tree_theta(t, theta);
  const int other = side == a ? b : a;

  const int m = t.clique_count();
  std::vector<std::vector<int>> incident(m);
  for (int e = 0; e < static_cast<int>(t.tree_edges.size()); ++e) {
    if (e == edge) continue;
    incident[t.tree_edges[e].first].push_back(e);
    incident[t.tree_edges[e].second].push_back(e);
  }
  std::vector<char> in_part(m, 0);
  std::vector<int> stack{side};
  in_part[side] = 1;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    for (int e : incident[c]) {
      const int next = t.tree_edges[e].first == c ? t.tree_edges[e].second : t.tree_edges[e].first;
      if (!in_part[next]) {
        in_part[next] = 1;
        stack.push_back(next);
      }
    }
  }

  const NodeSet cut = intersect(t.cliques[side], t.cliques[other]);
  double log_z = std::log(gap(cut, theta));
  NodeSet covered;
  for (int c = 0; c < m; ++c) {
    if (!in_part[c]) continue;
    log_z -= std::log(gap(t.cliques[c], theta));
    covered.insert(covered.end(), t.cliques[c].begin(), t.cliques[c].end());
  }
  for (int e = 0; e < static_cast<int>(t.tree_edges.size()); ++e) {
    const auto [x, y] = t.tree_edges[e];
    if (e != edge && in_part[x]) log_z += std::log(gap(intersect(t.cliques[x], t.cliques[y]), theta));
  }
  std::sort(covered.begin(), covered.end());
  covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
  SubtreeConstant out{std::exp(log_z), {}};
  std::set_difference(covered.begin(), covered.end(), cut.begin(), cut.end(),
                      std::back_inserter(out.nodes));
  return out;
}

}  // namespace csma
