// SPDX-License-Identifier: Apache-2.0
// csma: generate conflict graphs, compute back-off rates, verify them exactly
// or by simulation, and compare approximations.
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csma/csma.h"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kValidation = 2, kResource = 3 };

struct Failure : std::runtime_error {
  Failure(csma_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  csma_status status;
};

void check(csma_status s) {
  if (s != CSMA_OK) throw Failure(s, csma_last_error());
}

[[noreturn]] void invalid(const std::string& msg) { throw Failure(CSMA_E_INVALID, msg); }

int exit_code(csma_status s) {
  switch (s) {
    case CSMA_OK: return kOk;
    case CSMA_E_CAP:
    case CSMA_E_NO_CONVERGENCE: return kResource;
    case CSMA_E_INTERNAL: return kInternal;
    default: return kValidation;
  }
}

struct GraphDeleter {
  void operator()(csma_graph* g) const { csma_graph_free(g); }
};
using Graph = std::unique_ptr<csma_graph, GraphDeleter>;

std::string real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, ptr);
}

// JSON value for a real; non-finite values become null.
json jreal(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::string_view s = text;
  std::size_t i = 0;
  auto sep = [](char c) { return c == ',' || c == '[' || c == ']' || std::isspace(static_cast<unsigned char>(c)); };
  while (i < s.size()) {
    while (i < s.size() && sep(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !sep(s[j])) ++j;
    if (j > i) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, v);
      if (ec != std::errc() || ptr != s.data() + j) invalid("cannot parse number '" + std::string(s.substr(i, j - i)) + "'");
      out.push_back(v);
    }
    i = j;
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_reals(text)) {
    if (v != std::floor(v)) invalid("expected integers, got " + real(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(CSMA_E_IO, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {}
  std::ostream& stream() { return buf_; }
  void flush() {
    if (path_.empty() || path_ == "-") {
      std::cout << buf_.str();
      std::cout.flush();
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw Failure(CSMA_E_IO, "cannot write " + path_);
    f << buf_.str();
  }

 private:
  std::string path_;
  std::ostringstream buf_;
};

// ---------------------------------------------------------------------------
// Graph and throughput sources shared by the subcommands.

struct GraphSpec {
  std::string file;
  std::string kind;  // generator name
  int n = 10;
  double radius = 0.2;
  double density = 0.5;
  int max_clique = 0;
  int beta = 1;
  std::string beta_vec;
  std::string sizes;
  int leaves = 3;

  void add_generator_options(CLI::App* app) {
    app->add_option("--n", n, "Node count");
    app->add_option("--r", radius, "Interference radius (geometric)");
    app->add_option("--density", density, "Attachment probability (chordal)");
    app->add_option("--max-clique", max_clique, "Clique size cap, 0 = none (chordal)");
    app->add_option("--beta", beta_vec, "Interference range (line, clique-line) or vector (iline)");
    app->add_option("--sizes", sizes, "Block sizes (clique-line)");
    app->add_option("--leaves", leaves, "Leaf count (star)");
  }

  void add_source_options(CLI::App* app) {
    auto* f = app->add_option("--graph", file, "Graph file (JSON or edge list)");
    auto* k = app->add_option("--gen", kind, "Generate instead: geometric|chordal|line|iline|clique-line|tree|ring|complete|star");
    f->excludes(k);
    add_generator_options(app);
  }

  Graph build(std::uint64_t seed) const {
    csma_graph* g = nullptr;
    if (!file.empty()) {
      check(csma_graph_load(file.c_str(), &g));
      return Graph(g);
    }
    if (kind.empty()) invalid("give exactly one graph source: --graph FILE or --gen KIND");
    auto beta_scalar = [&] {
      if (beta_vec.empty()) return beta;
      auto v = parse_ints(beta_vec);
      if (v.size() != 1) invalid("--beta must be a single integer for " + kind);
      return v[0];
    };
    if (kind == "geometric") {
      check(csma_gen_geometric(n, radius, seed, &g));
    } else if (kind == "chordal") {
      check(csma_gen_chordal(n, density, max_clique, seed, &g));
    } else if (kind == "line") {
      check(csma_gen_line(n, beta_scalar(), &g));
    } else if (kind == "iline") {
      auto v = parse_ints(beta_vec);
      check(csma_gen_iline(v.data(), v.size(), &g));
    } else if (kind == "clique-line") {
      auto k = parse_ints(sizes);
      check(csma_gen_clique_line(k.data(), k.size(), beta_scalar(), &g));
    } else if (kind == "tree") {
      check(csma_gen_tree(n, seed, &g));
    } else if (kind == "ring") {
      check(csma_gen_ring(n, &g));
    } else if (kind == "complete") {
      check(csma_gen_complete(n, &g));
    } else if (kind == "star") {
      check(csma_gen_star(leaves, &g));
    } else {
      invalid("unknown generator '" + kind + "'");
    }
    return Graph(g);
  }
};

int max_clique(const csma_graph* g) {
  int k = 0;
  check(csma_max_clique_size(g, &k));
  return k;
}

// Fraction c of 1/k_max; accepts "0.45" or "0.45/k_max".
double parse_rule(const std::string& rule) {
  std::string head = rule.substr(0, rule.find('/'));
  auto v = parse_reals(head);
  if (v.size() != 1 || !(v[0] > 0.0 && v[0] < 1.0)) invalid("theta rule c/k_max needs 0 < c < 1");
  return v[0];
}

struct ThetaSpec {
  std::optional<double> uniform;
  std::string file;
  std::string rule;

  void add_options(CLI::App* app) {
    auto* u = app->add_option("--theta", uniform, "Uniform target throughput");
    auto* f = app->add_option("--theta-file", file, "Target throughputs, one per node");
    auto* r = app->add_option("--theta-rule", rule, "Uniform c/k_max, given as c or c/k_max");
    u->excludes(f)->excludes(r);
    f->excludes(r);
  }

  std::vector<double> build(const csma_graph* g) const {
    const int n = csma_graph_size(g);
    if (uniform) return std::vector<double>(n, *uniform);
    if (!file.empty()) {
      auto v = parse_reals(slurp(file));
      if (static_cast<int>(v.size()) != n) {
        invalid("theta file has " + std::to_string(v.size()) + " values for " + std::to_string(n) + " nodes");
      }
      return v;
    }
    if (!rule.empty()) return std::vector<double>(n, parse_rule(rule) / max_clique(g));
    invalid("give target throughputs: --theta, --theta-file or --theta-rule");
  }
};

int method_id(const std::string& name) {
  int m = 0;
  check(csma_method_from_name(name.c_str(), &m));
  return m;
}

// Rates from a file (a rates report or a plain list) or computed by a method.
struct RateSpec {
  std::string file;
  std::string method = "chordal-peo";

  void add_options(CLI::App* app) {
    app->add_option("--rates", file, "Rates file (rates JSON report or plain list)");
    app->add_option("--method", method, "Method used when --rates is absent");
  }

  std::vector<double> build(const csma_graph* g, const std::vector<double>& theta) const {
    const int n = csma_graph_size(g);
    if (!file.empty()) {
      std::string text = slurp(file);
      std::vector<double> v;
      auto first = text.find_first_not_of(" \t\r\n");
      if (first != std::string::npos && text[first] == '{') {
        try {
          v = json::parse(text).at("rates").get<std::vector<double>>();
        } catch (const json::exception& e) {
          invalid(std::string("rates file: ") + e.what());
        }
      } else {
        v = parse_reals(text);
      }
      if (static_cast<int>(v.size()) != n) invalid("rates file length differs from node count");
      return v;
    }
    std::vector<double> nu(n);
    check(csma_compute_rates(g, theta.data(), method_id(method), nu.data(), nullptr));
    return nu;
  }
};

// ---------------------------------------------------------------------------

struct Common {
  std::string format = "json";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out;

  void add_options(CLI::App* app) {
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--seed", seed, "Seed for every random choice");
    app->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--out,-o", out, "Output file (default stdout)");
  }
  bool csv() const { return format == "csv"; }
};

void cmd_gen(const GraphSpec& spec, const Common& common) {
  Graph g = spec.build(common.seed);
  Output out(common.out);
  if (common.csv()) {
    const int n = csma_graph_size(g.get());
    std::vector<int> e(2 * csma_graph_edge_count(g.get()));
    check(csma_graph_edges(g.get(), e.data()));
    out.stream() << "n " << n << "\n";
    for (std::size_t k = 0; k < e.size(); k += 2) out.stream() << e[k] << " " << e[k + 1] << "\n";
  } else {
    char* text = nullptr;
    check(csma_graph_to_json(g.get(), &text));
    out.stream() << text;
    csma_string_free(text);
  }
  out.flush();
}

void cmd_rates(const GraphSpec& gs, const ThetaSpec& ts, const std::string& method, const Common& common) {
  Graph g = gs.build(common.seed);
  auto theta = ts.build(g.get());
  const int m = method_id(method);
  std::vector<double> nu(theta.size());
  double margin = 0.0;
  check(csma_compute_rates(g.get(), theta.data(), m, nu.data(), &margin));
  std::cerr << "margin " << real(margin) << "\n";
  Output out(common.out);
  if (common.csv()) {
    out.stream() << "node,theta,rate\n";
    for (std::size_t i = 0; i < nu.size(); ++i) {
      out.stream() << i << "," << real(theta[i]) << "," << real(nu[i]) << "\n";
    }
  } else {
    json j;
    j["method"] = csma_method_name(m);
    j["rates"] = nu;
    j["margin"] = margin;
    out.stream() << j.dump(2) << "\n";
  }
  out.flush();
}

void cmd_verify(const GraphSpec& gs, const ThetaSpec& ts, const RateSpec& rs, int scale_node,
                double scale, const Common& common) {
  Graph g = gs.build(common.seed);
  auto theta = ts.build(g.get());
  auto nu = rs.build(g.get(), theta);
  if (scale_node >= 0) {
    if (scale_node >= static_cast<int>(nu.size())) invalid("--scale-node out of range");
    nu[scale_node] *= scale;
  }
  std::vector<double> exact(nu.size());
  double z = 0.0;
  check(csma_exact_throughputs(g.get(), nu.data(), exact.data(), &z));
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) worst = std::max(worst, std::fabs(exact[i] - theta[i]));
  std::cerr << "max_abs_dev " << real(worst) << "\n";
  Output out(common.out);
  if (common.csv()) {
    out.stream() << "node,target,exact,abs_err\n";
    for (std::size_t i = 0; i < exact.size(); ++i) {
      out.stream() << i << "," << real(theta[i]) << "," << real(exact[i]) << ","
                   << real(std::fabs(exact[i] - theta[i])) << "\n";
    }
  } else {
    json j;
    j["Z"] = z;
    j["throughputs"] = exact;
    j["targets"] = theta;
    j["max_abs_dev"] = worst;
    out.stream() << j.dump(2) << "\n";
  }
  out.flush();
}

struct SimSpec {
  double horizon = 1e7;
  int replications = 1;
  bool deterministic = false;
  double warmup = 0.0;

  void add_options(CLI::App* app) {
    app->add_option("--horizon", horizon, "Simulated time");
    app->add_option("--replications", replications, "Independent runs")->check(CLI::PositiveNumber);
    app->add_flag("--deterministic", deterministic, "Transmissions of fixed length 1");
    app->add_option("--warmup", warmup, "Discarded fraction of the horizon");
  }

  csma_sim_config config(std::uint64_t seed, int jobs) const {
    csma_sim_config c = csma_sim_default_config();
    c.horizon = horizon;
    c.seed = seed;
    c.deterministic_transmissions = deterministic ? 1 : 0;
    c.warmup = warmup;
    c.replications = replications;
    c.jobs = jobs;
    return c;
  }
};

void cmd_simulate(const GraphSpec& gs, const ThetaSpec& ts, const RateSpec& rs, const SimSpec& ss,
                  const Common& common) {
  Graph g = gs.build(common.seed);
  auto theta = ts.build(g.get());
  auto nu = rs.build(g.get(), theta);
  const auto cfg = ss.config(common.seed, common.jobs);
  const std::size_t n = nu.size();
  std::vector<double> mean(n), half(n);
  int warn = 0;
  check(csma_simulate(g.get(), nu.data(), &cfg, mean.data(), half.data(), &warn));
  if (warn) std::cerr << "warning: some back-off rate exceeds 1e4; the chain mixes slowly\n";
  double dev_mean = 0.0, dev_max = 0.0;
  check(csma_deviation(theta.data(), mean.data(), n, &dev_mean, &dev_max));
  Output out(common.out);
  if (common.csv()) {
    out.stream() << "node,target,estimate,abs_err,rel_err";
    if (ss.replications > 1) out.stream() << ",ci_half_width";
    out.stream() << "\n";
    for (std::size_t i = 0; i < n; ++i) {
      const double err = std::fabs(mean[i] - theta[i]);
      out.stream() << i << "," << real(theta[i]) << "," << real(mean[i]) << "," << real(err) << ","
                   << real(err / theta[i]);
      if (ss.replications > 1) out.stream() << "," << real(half[i]);
      out.stream() << "\n";
    }
  } else {
    json j;
    j["config"] = {{"horizon", ss.horizon},
                   {"seed", common.seed},
                   {"transmission", ss.deterministic ? "deterministic" : "exponential"},
                   {"warmup", ss.warmup},
                   {"replications", ss.replications}};
    j["estimates"] = mean;
    if (ss.replications > 1) {
      json hw = json::array();
      for (double h : half) hw.push_back(jreal(h));
      j["ci_half_width"] = hw;
    }
    j["min"] = n ? *std::min_element(mean.begin(), mean.end()) : 0.0;
    j["max"] = n ? *std::max_element(mean.begin(), mean.end()) : 0.0;
    j["mean_rel_dev"] = dev_mean;
    j["max_rel_dev"] = dev_max;
    j["high_rate_warning"] = warn != 0;
    out.stream() << j.dump(2) << "\n";
  }
  out.flush();
}

void cmd_invert(const GraphSpec& gs, const ThetaSpec& ts, double tol, const Common& common) {
  Graph g = gs.build(common.seed);
  auto theta = ts.build(g.get());
  std::vector<double> nu(theta.size());
  long iterations = 0;
  double residual = 0.0;
  check(csma_invert_rates(g.get(), theta.data(), tol, nu.data(), &iterations, &residual));
  Output out(common.out);
  if (common.csv()) {
    out.stream() << "node,theta,rate\n";
    for (std::size_t i = 0; i < nu.size(); ++i) out.stream() << i << "," << real(theta[i]) << "," << real(nu[i]) << "\n";
  } else {
    json j;
    j["method"] = "bruteforce";
    j["rates"] = nu;
    j["iterations"] = iterations;
    j["residual"] = residual;
    out.stream() << j.dump(2) << "\n";
  }
  out.flush();
}

void cmd_ztest(const GraphSpec& gs, const ThetaSpec& ts, const Common& common) {
  Graph g = gs.build(common.seed);
  auto theta = ts.build(g.get());
  double closed = 0.0, enumerated = 0.0;
  check(csma_ztest(g.get(), theta.data(), &closed, &enumerated));
  const double rel = std::fabs(closed - enumerated) / enumerated;
  Output out(common.out);
  if (common.csv()) {
    out.stream() << "closed_form,enumerated,rel_diff\n"
                 << real(closed) << "," << real(enumerated) << "," << real(rel) << "\n";
  } else {
    json j;
    j["closed_form"] = closed;
    j["enumerated"] = enumerated;
    j["rel_diff"] = rel;
    out.stream() << j.dump(2) << "\n";
  }
  out.flush();
}

// Seeds used by compare: graph instance s of radius index r, and the
// simulation of rule index c on that instance.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct CompareSpec {
  std::string radii = "0.15,0.2,0.25";
  std::string rules = "0.45,0.65,0.85";
  std::string methods = "lcs,bethe";
  int seeds = 3;
  int n = 100;
};

struct CompareRow {
  std::string radius;
  int kmax = 0;
  double c = 0.0;
  std::string method;
  bool ok = false;
  std::string error;
  double mean_rel = 0.0;
  double max_rel = 0.0;
  std::uint64_t seed = 0;
};

void cmd_compare(const GraphSpec& gs, const CompareSpec& cs, const SimSpec& ss, const Common& common) {
  struct Instance {
    Graph graph;
    std::string radius;
    std::uint64_t seed;
    int kmax;
  };
  std::vector<Instance> instances;
  if (!gs.file.empty() || !gs.kind.empty()) {
    Graph g = gs.build(common.seed);
    const int k = max_clique(g.get());
    instances.push_back({std::move(g), gs.kind == "geometric" ? real(gs.radius) : "", common.seed, k});
  } else {
    auto radii = parse_reals(cs.radii);
    for (std::size_t r = 0; r < radii.size(); ++r) {
      for (int s = 0; s < cs.seeds; ++s) {
        const std::uint64_t seed = mix(mix(common.seed) ^ (r * 1000 + s));
        csma_graph* g = nullptr;
        check(csma_gen_geometric(cs.n, radii[r], seed, &g));
        Graph owned(g);
        const int k = max_clique(g);
        instances.push_back({std::move(owned), real(radii[r]), seed, k});
      }
    }
  }
  const auto rules = parse_reals(cs.rules);
  for (double c : rules) {
    if (!(c > 0.0 && c < 1.0)) invalid("theta rule c/k_max needs 0 < c < 1");
  }
  std::vector<std::string> methods;
  {
    std::string cur;
    for (char ch : cs.methods + ",") {
      if (ch == ',') {
        if (!cur.empty()) methods.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
  }
  std::vector<int> method_ids;
  for (const auto& m : methods) method_ids.push_back(method_id(m));

  std::vector<CompareRow> rows;
  struct Task {
    std::size_t instance;
    double c;
    std::size_t rule;
    std::size_t method;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t r = 0; r < rules.size(); ++r) {
      for (std::size_t m = 0; m < methods.size(); ++m) {
        tasks.push_back({i, rules[r], r, m});
        CompareRow row;
        row.radius = instances[i].radius;
        row.kmax = instances[i].kmax;
        row.c = rules[r];
        row.method = methods[m];
        row.seed = instances[i].seed;
        rows.push_back(row);
      }
    }
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      const Instance& inst = instances[task.instance];
      CompareRow& row = rows[t];
      const int n = csma_graph_size(inst.graph.get());
      std::vector<double> theta(n, task.c / inst.kmax);
      std::vector<double> nu(n), est(n);
      if (csma_compute_rates(inst.graph.get(), theta.data(), method_ids[task.method], nu.data(), nullptr) != CSMA_OK) {
        row.error = csma_last_error();
        continue;
      }
      // Methods on the same instance and rule share the simulation seed.
      csma_sim_config cfg = ss.config(mix(inst.seed ^ mix(task.rule + 1)), 1);
      if (csma_simulate(inst.graph.get(), nu.data(), &cfg, est.data(), nullptr, nullptr) != CSMA_OK ||
          csma_deviation(theta.data(), est.data(), n, &row.mean_rel, &row.max_rel) != CSMA_OK) {
        row.error = csma_last_error();
        continue;
      }
      row.ok = true;
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < std::min<int>(common.jobs, static_cast<int>(tasks.size())); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Output out(common.out);
  for (const auto& row : rows) {
    if (!row.ok) std::cerr << "method " << row.method << " on seed " << row.seed << ": " << row.error << "\n";
  }
  if (common.csv()) {
    out.stream() << "R,kmax,theta_rule,method,mean_rel_dev,max_rel_dev,seed\n";
    for (const auto& row : rows) {
      out.stream() << row.radius << "," << row.kmax << "," << real(row.c) << "/k_max," << row.method << ",";
      if (row.ok) {
        out.stream() << real(row.mean_rel) << "," << real(row.max_rel);
      } else {
        out.stream() << ",";
      }
      out.stream() << "," << row.seed << "\n";
    }
  } else {
    json arr = json::array();
    for (const auto& row : rows) {
      json j{{"R", row.radius}, {"kmax", row.kmax}, {"theta_rule", real(row.c) + "/k_max"},
             {"method", row.method}, {"seed", row.seed}};
      if (row.ok) {
        j["mean_rel_dev"] = row.mean_rel;
        j["max_rel_dev"] = row.max_rel;
      } else {
        j["error"] = row.error;
      }
      arr.push_back(j);
    }
    out.stream() << arr.dump(2) << "\n";
  }
  out.flush();
}

void apply_env_caps() {
  if (const char* cap = std::getenv("CSMA_MAX_ENUM_NODES")) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(cap, cap + std::char_traits<char>::length(cap), v);
    if (ec != std::errc() || *ptr != '\0' || v < 1 || v > 62) {
      invalid("CSMA_MAX_ENUM_NODES must be an integer in [1, 62]");
    }
    csma_set_enumeration_cap(v);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CSMA back-off rates for chordal and general conflict graphs"};
  app.require_subcommand(1);

  Common common;
  GraphSpec gen_spec;
  auto* gen = app.add_subcommand("gen", "Generate a conflict graph");
  gen->add_option("kind", gen_spec.kind, "geometric|chordal|line|iline|clique-line|tree|ring|complete|star")->required();
  gen_spec.add_generator_options(gen);
  common.add_options(gen);

  GraphSpec graph_spec;
  ThetaSpec theta_spec;
  std::string method = "chordal-peo";
  auto* rates = app.add_subcommand("rates", "Back-off rates for target throughputs");
  graph_spec.add_source_options(rates);
  theta_spec.add_options(rates);
  rates->add_option("--method", method, "tree|line|iline|chordal-ct|chordal-peo|distributed|lcs|bethe|completion|light-traffic");
  common.add_options(rates);

  RateSpec rate_spec;
  int scale_node = -1;
  double scale = 1.0;
  auto* verify = app.add_subcommand("verify", "Exact throughputs of given rates");
  graph_spec.add_source_options(verify);
  theta_spec.add_options(verify);
  rate_spec.add_options(verify);
  verify->add_option("--scale-node", scale_node, "Multiply this node's rate by --scale");
  verify->add_option("--scale", scale, "Factor for --scale-node");
  common.add_options(verify);

  SimSpec sim_spec;
  auto* simulate = app.add_subcommand("simulate", "Estimate throughputs by simulation");
  graph_spec.add_source_options(simulate);
  theta_spec.add_options(simulate);
  rate_spec.add_options(simulate);
  sim_spec.add_options(simulate);
  common.add_options(simulate);

  CompareSpec compare_spec;
  auto* compare = app.add_subcommand("compare", "Simulated deviation of approximate rates on geometric graphs");
  graph_spec.add_source_options(compare);
  compare->add_option("--radii", compare_spec.radii, "Radii for generated instances");
  compare->add_option("--rules", compare_spec.rules, "Values c of the rule theta = c/k_max");
  compare->add_option("--methods", compare_spec.methods, "Comma separated methods");
  compare->add_option("--seeds", compare_spec.seeds, "Instances per radius")->check(CLI::PositiveNumber);
  compare->add_option("--nodes", compare_spec.n, "Nodes per generated instance");
  sim_spec.add_options(compare);
  common.add_options(compare);

  double tol = 1e-10;
  auto* invert = app.add_subcommand("invert", "Rates by brute-force inversion (n <= 20)");
  graph_spec.add_source_options(invert);
  theta_spec.add_options(invert);
  invert->add_option("--tol", tol, "Throughput tolerance");
  common.add_options(invert);

  auto* ztest = app.add_subcommand("ztest", "Closed-form normalizing constant vs enumeration");
  graph_spec.add_source_options(ztest);
  theta_spec.add_options(ztest);
  common.add_options(ztest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    apply_env_caps();
    if (*gen) cmd_gen(gen_spec, common);
    if (*rates) cmd_rates(graph_spec, theta_spec, method, common);
    if (*verify) cmd_verify(graph_spec, theta_spec, rate_spec, scale_node, scale, common);
    if (*simulate) cmd_simulate(graph_spec, theta_spec, rate_spec, sim_spec, common);
    if (*compare) cmd_compare(graph_spec, compare_spec, sim_spec, common);
    if (*invert) cmd_invert(graph_spec, theta_spec, tol, common);
    if (*ztest) cmd_ztest(graph_spec, theta_spec, common);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what() << "\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
