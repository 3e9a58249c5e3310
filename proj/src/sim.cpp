// SPDX-License-Identifier: Apache-2.0
#include "csma/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "csma/error.hpp"
#include "csma/random.hpp"

namespace csma {

namespace {

// Complete binary tree of partial sums over per-node weights. Internal nodes
// are recomputed from their children on every update, so no drift builds up.
class SumTree {
 public:
  explicit SumTree(int n) : leaves_(std::bit_ceil(static_cast<unsigned>(std::max(n, 1)))),
                            sums_(2 * leaves_, 0.0) {}

  void set(int i, double w) {
    int k = leaves_ + i;
    sums_[k] = w;
    for (k >>= 1; k >= 1; k >>= 1) sums_[k] = sums_[2 * k] + sums_[2 * k + 1];
  }

  double total() const { return sums_[1]; }

  // Leaf i with prefix(i) <= u < prefix(i) + w_i; never a zero-weight leaf.
  int sample(double u) const {
    int k = 1;
    while (k < leaves_) {
      const double left = sums_[2 * k];
      if ((u < left && left > 0.0) || sums_[2 * k + 1] <= 0.0) {
        k = 2 * k;
      } else {
        u -= left;
        k = 2 * k + 1;
      }
    }
    return k - leaves_;
  }

 private:
  int leaves_;
  std::vector<double> sums_;
};

class Simulator {
 public:
  Simulator(const ConflictGraph& g, std::span<const double> nu, const SimConfig& cfg)
      : g_(g), nu_(nu), cfg_(cfg), rng_(cfg.seed), n_(g.size()), ready_(g.size()),
        active_(n_, 0), blocked_(n_, 0), started_(n_, 0.0), slot_(n_, -1), busy_(n_, 0.0),
        count_(n_, 0), window_start_(cfg.warmup * cfg.horizon) {
    for (Node i = 0; i < n_; ++i) ready_.set(i, nu_[i]);
  }

  SimResult run() {
    if (cfg_.transmission == TransmissionDist::kExponential) {
      run_exponential();
    } else {
      run_deterministic();
    }
    for (Node i : active_list_) credit(i, cfg_.horizon);
    SimResult out;
    const double window = cfg_.horizon - window_start_;
    out.throughput.resize(n_);
    out.packet_throughput.resize(n_);
    out.transmissions = count_;
    for (Node i = 0; i < n_; ++i) {
      out.throughput[i] = std::clamp(busy_[i] / window, 0.0, 1.0);
      out.packet_throughput[i] = static_cast<double>(count_[i]) / window;
    }
    if (n_ > 0) {
      auto [lo, hi] = std::minmax_element(out.throughput.begin(), out.throughput.end());
      out.min_throughput = *lo;
      out.max_throughput = *hi;
    }
    out.events = events_;
    return out;
  }

 private:
  void run_exponential() {
    double now = 0.0;
    for (;;) {
      const double backoff = ready_.total();
      const double ending = static_cast<double>(active_list_.size());
      const double rate = backoff + ending;
      if (rate <= 0.0) return;
      now += rng_.exponential(rate);
      if (now > cfg_.horizon) return;
      const double u = rng_.uniform() * rate;
      if (u < ending) {
        const auto k = std::min(static_cast<std::size_t>(u), active_list_.size() - 1);
        finish(active_list_[k], now);
      } else {
        start(ready_.sample(u - ending), now);
      }
    }
  }

  void run_deterministic() {
    // Every transmission lasts exactly 1, so completions leave in start order.
    std::deque<std::pair<double, Node>> pending;
    double now = 0.0;
    for (;;) {
      const double backoff = ready_.total();
      const double next_start = backoff > 0.0 ? now + rng_.exponential(backoff)
                                              : std::numeric_limits<double>::infinity();
      const double next_end = pending.empty() ? std::numeric_limits<double>::infinity()
                                              : pending.front().first;
      if (std::min(next_start, next_end) > cfg_.horizon) return;
      if (next_end <= next_start) {
        // The competing back-off draw is discarded; it is memoryless.
        now = next_end;
        const Node i = pending.front().second;
        pending.pop_front();
        finish(i, now);
      } else {
        now = next_start;
        const Node i = ready_.sample(rng_.uniform() * backoff);
        start(i, now);
        pending.emplace_back(now + 1.0, i);
      }
    }
  }

  void start(Node i, double now) {
    if (active_[i] || blocked_[i] != 0) throw std::logic_error("blocked node started transmitting");
    ++events_;
    active_[i] = 1;
    started_[i] = now;
    slot_[i] = static_cast<int>(active_list_.size());
    active_list_.push_back(i);
    ready_.set(i, 0.0);
    for (Node j : g_.neighbors(i)) {
      if (active_[j]) throw std::logic_error("adjacent nodes active simultaneously");
      if (blocked_[j]++ == 0) ready_.set(j, 0.0);
    }
  }

  void finish(Node i, double now) {
    ++events_;
    active_[i] = 0;
    const int k = slot_[i];
    active_list_[k] = active_list_.back();
    slot_[active_list_[k]] = k;
    active_list_.pop_back();
    slot_[i] = -1;
    credit(i, now);
    if (now >= window_start_) ++count_[i];
    for (Node j : g_.neighbors(i)) {
      if (--blocked_[j] == 0 && !active_[j]) ready_.set(j, nu_[j]);
    }
    ready_.set(i, nu_[i]);
  }

  void credit(Node i, double until) {
    const double from = std::max(started_[i], window_start_);
    if (until > from) busy_[i] += until - from;
  }

  const ConflictGraph& g_;
  std::span<const double> nu_;
  const SimConfig& cfg_;
  Rng rng_;
  int n_;
  SumTree ready_;  // back-off rate of each idle, unblocked node; 0 otherwise
  std::vector<char> active_;
  std::vector<int> blocked_;  // number of active neighbours
  std::vector<double> started_;
  std::vector<int> slot_;
  std::vector<Node> active_list_;
  std::vector<double> busy_;
  std::vector<std::uint64_t> count_;
  double window_start_;
  std::uint64_t events_ = 0;
};

}  // namespace

SimResult simulate(const ConflictGraph& g, std::span<const double> nu, const SimConfig& cfg) {
  if (static_cast<int>(nu.size()) != g.size()) {
    fail(ErrorCode::kInvalidArgument, "rate vector length differs from node count");
  }
  for (double v : nu) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "rates must be positive and finite");
  }
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
    fail(ErrorCode::kInvalidArgument, "horizon must be positive and finite");
  }
  if (!(cfg.warmup >= 0.0 && cfg.warmup <= 0.5)) {
    fail(ErrorCode::kInvalidArgument, "warmup must lie in [0, 0.5]");
  }
  const auto t0 = std::chrono::steady_clock::now();
  SimResult out = Simulator(g, nu, cfg).run();
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto top = std::max_element(nu.begin(), nu.end());
  if (top != nu.end() && *top > kHighRateWarning) {
    out.warnings.push_back("back-off rate " + std::to_string(*top) + " at node " +
                           std::to_string(top - nu.begin()) +
                           " is very large; the chain mixes slowly and estimates converge slowly");
  }
  return out;
}

std::uint64_t replication_seed(std::uint64_t seed, int r) {
  return derive_seed(seed, static_cast<std::uint64_t>(r));
}

ReplicatedResult simulate_replicated(const ConflictGraph& g, std::span<const double> nu,
                                     const SimConfig& cfg, int replications, int jobs) {
  if (replications < 1) fail(ErrorCode::kInvalidArgument, "need at least one replication");
  jobs = std::clamp(jobs, 1, replications);
  ReplicatedResult out;
  out.runs.resize(replications);
  std::vector<std::exception_ptr> errors(replications);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < replications; r = next++) {
      SimConfig c = cfg;
      c.seed = replication_seed(cfg.seed, r);
      try {
        out.runs[r] = simulate(g, nu, c);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const int n = g.size();
  out.mean.assign(n, 0.0);
  out.half_width.assign(n, std::numeric_limits<double>::infinity());
  for (Node i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& run : out.runs) sum += run.throughput[i];
    const double mean = sum / replications;
    out.mean[i] = mean;
    if (replications > 1) {
      double ss = 0.0;
      for (const auto& run : out.runs) ss += (run.throughput[i] - mean) * (run.throughput[i] - mean);
      out.half_width[i] = 1.96 * std::sqrt(ss / (replications - 1) / replications);
    }
  }
  return out;
}

Deviation deviation_report(std::span<const double> targets, std::span<const double> estimates) {
  if (targets.size() != estimates.size()) {
    fail(ErrorCode::kInvalidArgument, "target and estimate vectors differ in length");
  }
  if (targets.empty()) return {0.0, 0.0};
  Deviation d{0.0, 0.0};
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!(targets[i] > 0.0)) fail(ErrorCode::kInvalidArgument, "targets must be positive");
    const double rel = std::fabs(estimates[i] - targets[i]) / targets[i];
    d.mean_rel += rel;
    d.max_rel = std::max(d.max_rel, rel);
  }
  d.mean_rel /= static_cast<double>(targets.size());
  return d;
}

}  // namespace csma
