// SPDX-License-Identifier: Apache-2.0
#include "csma/csma.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "csma/chordal.hpp"
#include "csma/error.hpp"
#include "csma/exact.hpp"
#include "csma/io.hpp"
#include "csma/random.hpp"
#include "csma/rates.hpp"
#include "csma/sim.hpp"

struct csma_graph {
  csma::GraphFile file;
};

namespace {

thread_local std::string last_error;

csma_status to_status(csma::ErrorCode c) {
  switch (c) {
    case csma::ErrorCode::kInvalidArgument: return CSMA_E_INVALID;
    case csma::ErrorCode::kNotChordal: return CSMA_E_NOT_CHORDAL;
    case csma::ErrorCode::kUnachievable: return CSMA_E_UNACHIEVABLE;
    case csma::ErrorCode::kCapExceeded: return CSMA_E_CAP;
    case csma::ErrorCode::kNoConvergence: return CSMA_E_NO_CONVERGENCE;
    case csma::ErrorCode::kIo: return CSMA_E_IO;
  }
  return CSMA_E_INTERNAL;
}

template <class F>
csma_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return CSMA_OK;
  } catch (const csma::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CSMA_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CSMA_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) csma::fail(csma::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

const csma::ConflictGraph& graph_of(const csma_graph* g) {
  need(g, "graph");
  return g->file.graph;
}

std::span<const double> vec(const csma_graph* g, const double* p, const char* what) {
  need(p, what);
  return {p, static_cast<std::size_t>(graph_of(g).size())};
}

void emit(csma_graph** out, csma::GraphFile file) {
  need(out, "output handle");
  *out = new csma_graph{std::move(file)};
}

void emit(csma_graph** out, csma::ConflictGraph g) { emit(out, csma::GraphFile{std::move(g), {}}); }

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* csma_last_error(void) { return last_error.c_str(); }
int csma_rng_stream_version(void) { return csma::kRngStreamVersion; }
void csma_string_free(char* s) { std::free(s); }

csma_status csma_graph_create(int n, const int* edges, size_t m, csma_graph** out) {
  return guarded([&] {
    if (m > 0) need(edges, "edges");
    std::vector<csma::Edge> list(m);
    for (size_t k = 0; k < m; ++k) list[k] = {edges[2 * k], edges[2 * k + 1]};
    if (n < 0) csma::fail(csma::ErrorCode::kInvalidArgument, "negative node count");
    emit(out, csma::ConflictGraph(n, list));
  });
}

void csma_graph_free(csma_graph* g) { delete g; }

int csma_graph_size(const csma_graph* g) { return g ? g->file.graph.size() : 0; }

size_t csma_graph_edge_count(const csma_graph* g) { return g ? g->file.graph.edge_count() : 0; }

csma_status csma_graph_edges(const csma_graph* g, int* out) {
  return guarded([&] {
    const auto edges = graph_of(g).edges();
    if (!edges.empty()) need(out, "output");
    for (size_t k = 0; k < edges.size(); ++k) {
      out[2 * k] = edges[k].first;
      out[2 * k + 1] = edges[k].second;
    }
  });
}

int csma_graph_has_coords(const csma_graph* g) { return g && !g->file.coords.empty() ? 1 : 0; }

csma_status csma_graph_coords(const csma_graph* g, double* out) {
  return guarded([&] {
    graph_of(g);
    if (g->file.coords.empty()) csma::fail(csma::ErrorCode::kInvalidArgument, "graph has no coordinates");
    need(out, "output");
    for (size_t k = 0; k < g->file.coords.size(); ++k) {
      out[2 * k] = g->file.coords[k].first;
      out[2 * k + 1] = g->file.coords[k].second;
    }
  });
}

csma_status csma_graph_load(const char* path, csma_graph** out) {
  return guarded([&] {
    need(path, "path");
    emit(out, csma::parse_graph(csma::read_text_file(path)));
  });
}

csma_status csma_graph_save(const csma_graph* g, const char* path) {
  return guarded([&] {
    need(path, "path");
    csma::write_text_file(path, csma::graph_to_json(graph_of(g), g->file.coords));
  });
}

csma_status csma_graph_to_json(const csma_graph* g, char** out) {
  return guarded([&] {
    need(out, "output");
    *out = dup_string(csma::graph_to_json(graph_of(g), g->file.coords));
  });
}

csma_status csma_gen_geometric(int n, double radius, uint64_t seed, csma_graph** out) {
  return guarded([&] {
    auto geo = csma::random_geometric_graph(n, radius, seed);
    emit(out, csma::GraphFile{std::move(geo.graph), std::move(geo.coords)});
  });
}

csma_status csma_gen_chordal(int n, double density, int max_clique, uint64_t seed, csma_graph** out) {
  return guarded([&] { emit(out, csma::random_chordal_graph(n, density, seed, max_clique)); });
}

csma_status csma_gen_line(int n, int beta, csma_graph** out) {
  return guarded([&] { emit(out, csma::make_line(n, beta)); });
}

csma_status csma_gen_iline(const int* beta, size_t len, csma_graph** out) {
  return guarded([&] {
    need(beta, "beta");
    emit(out, csma::make_iline(std::span<const int>(beta, len)));
  });
}

csma_status csma_gen_clique_line(const int* sizes, size_t blocks, int beta, csma_graph** out) {
  return guarded([&] {
    need(sizes, "sizes");
    emit(out, csma::make_clique_line(std::span<const int>(sizes, blocks), beta));
  });
}

csma_status csma_gen_tree(int n, uint64_t seed, csma_graph** out) {
  return guarded([&] { emit(out, csma::random_tree(n, seed)); });
}

csma_status csma_gen_ring(int n, csma_graph** out) {
  return guarded([&] { emit(out, csma::make_ring(n)); });
}

csma_status csma_gen_complete(int n, csma_graph** out) {
  return guarded([&] { emit(out, csma::make_complete(n)); });
}

csma_status csma_gen_star(int leaves, csma_graph** out) {
  return guarded([&] { emit(out, csma::make_star(leaves)); });
}

csma_status csma_is_chordal(const csma_graph* g, int* out) {
  return guarded([&] {
    need(out, "output");
    *out = csma::is_chordal(graph_of(g)) ? 1 : 0;
  });
}

csma_status csma_max_clique_size(const csma_graph* g, int* out) {
  return guarded([&] {
    need(out, "output");
    *out = csma::max_clique_size(graph_of(g));
  });
}

csma_status csma_clique_tree_json(const csma_graph* g, char** out) {
  return guarded([&] {
    need(out, "output");
    *out = dup_string(csma::clique_tree_to_json(csma::clique_tree(graph_of(g))));
  });
}

csma_status csma_method_from_name(const char* name, int* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "output");
    auto m = csma::parse_method(name);
    if (!m) csma::fail(csma::ErrorCode::kInvalidArgument, std::string("unknown method '") + name + "'");
    *out = static_cast<int>(*m);
  });
}

const char* csma_method_name(int method) {
  for (auto m : csma::all_methods()) {
    if (static_cast<int>(m) == method) return csma::method_name(m).data();
  }
  return nullptr;
}

csma_status csma_compute_rates(const csma_graph* g, const double* theta, int method, double* rates,
                               double* margin) {
  return guarded([&] {
    need(rates, "rates");
    const auto& methods = csma::all_methods();
    if (method < 0 || method >= static_cast<int>(methods.size())) {
      csma::fail(csma::ErrorCode::kInvalidArgument, "unknown method id");
    }
    auto report = csma::compute_rates(graph_of(g), vec(g, theta, "theta"), methods[method]);
    std::copy(report.rates.begin(), report.rates.end(), rates);
    if (margin) *margin = report.margin;
  });
}

void csma_set_enumeration_cap(int cap) {
  try {
    csma::set_enumeration_cap(cap);
  } catch (const csma::Error& e) {
    last_error = e.what();
  }
}

int csma_enumeration_cap(void) { return csma::enumeration_cap(); }

csma_status csma_exact_throughputs(const csma_graph* g, const double* rates, double* theta, double* z) {
  return guarded([&] {
    need(theta, "theta");
    auto sol = csma::stationary_throughputs(graph_of(g), vec(g, rates, "rates"));
    std::copy(sol.throughputs.begin(), sol.throughputs.end(), theta);
    if (z) *z = sol.Z;
  });
}

csma_status csma_achievable_general(const csma_graph* g, const double* theta, int* achievable,
                                    double* slack) {
  return guarded([&] {
    need(achievable, "output");
    auto r = csma::achievable_general(graph_of(g), vec(g, theta, "theta"));
    *achievable = r.achievable ? 1 : 0;
    if (slack) *slack = r.slack;
  });
}

csma_status csma_invert_rates(const csma_graph* g, const double* theta, double tol, double* rates,
                              long* iterations, double* residual) {
  return guarded([&] {
    need(rates, "rates");
    csma::InversionOptions opts;
    opts.tol = tol;
    auto inv = csma::invert_rates_bruteforce(graph_of(g), vec(g, theta, "theta"), opts);
    std::copy(inv.rates.begin(), inv.rates.end(), rates);
    if (iterations) *iterations = inv.iterations;
    if (residual) *residual = inv.residual;
  });
}

csma_status csma_ztest(const csma_graph* g, const double* theta, double* closed_form, double* enumerated) {
  return guarded([&] {
    need(closed_form, "output");
    need(enumerated, "output");
    const auto& graph = graph_of(g);
    auto th = vec(g, theta, "theta");
    csma::CliqueTree t = csma::clique_tree(graph);
    *closed_form = csma::z_chordal_closed_form(t, th);
    *enumerated = csma::partition_function(graph, csma::chordal_rates_clique_tree(graph, t, th));
  });
}

csma_sim_config csma_sim_default_config(void) {
  return csma_sim_config{1e7, 1, 0, 0.0, 1, 1};
}

csma_status csma_simulate(const csma_graph* g, const double* rates, const csma_sim_config* cfg,
                          double* mean, double* half_width, int* high_rate_warning) {
  return guarded([&] {
    need(cfg, "config");
    need(mean, "mean");
    csma::SimConfig c;
    c.horizon = cfg->horizon;
    c.seed = cfg->seed;
    c.transmission = cfg->deterministic_transmissions ? csma::TransmissionDist::kDeterministic
                                                      : csma::TransmissionDist::kExponential;
    c.warmup = cfg->warmup;
    if (cfg->jobs < 1) csma::fail(csma::ErrorCode::kInvalidArgument, "jobs must be >= 1");
    auto r = csma::simulate_replicated(graph_of(g), vec(g, rates, "rates"), c, cfg->replications,
                                       cfg->jobs);
    std::copy(r.mean.begin(), r.mean.end(), mean);
    if (half_width) std::copy(r.half_width.begin(), r.half_width.end(), half_width);
    if (high_rate_warning) *high_rate_warning = r.runs.front().warnings.empty() ? 0 : 1;
  });
}

csma_status csma_deviation(const double* targets, const double* estimates, size_t n, double* mean_rel,
                           double* max_rel) {
  return guarded([&] {
    if (n > 0) {
      need(targets, "targets");
      need(estimates, "estimates");
    }
    auto d = csma::deviation_report(std::span<const double>(targets, n),
                                    std::span<const double>(estimates, n));
    if (mean_rel) *mean_rel = d.mean_rel;
    if (max_rel) *max_rel = d.max_rel;
  });
}

}  // extern "C"
