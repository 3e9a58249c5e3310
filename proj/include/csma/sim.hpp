// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csma/graph.hpp"
#include "csma/rates.hpp"

namespace csma {

enum class TransmissionDist { kExponential, kDeterministic };

struct SimConfig {
  double horizon = 1e7;
  std::uint64_t seed = 1;
  TransmissionDist transmission = TransmissionDist::kExponential;
  /// Fraction of the horizon discarded before measuring, in [0, 0.5].
  double warmup = 0.0;
};

/// Rates above this slow mixing enough that a warning is attached.
inline constexpr double kHighRateWarning = 1e4;

struct SimResult {
  /// Busy-time fraction per node over the measured window.
  std::vector<double> throughput;
  /// Completed transmissions per node inside the measured window.
  std::vector<std::uint64_t> transmissions;
  /// transmissions * mean length / window length.
  std::vector<double> packet_throughput;
  double min_throughput = 0.0;
  double max_throughput = 0.0;
  std::uint64_t events = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

/// Continuous-time simulation of the CSMA dynamics: an idle node whose
/// neighbours are all idle finishes its exponential(nu_i) back-off and
/// transmits for one time unit on average. Back-offs of blocked nodes are
/// dropped and redrawn when they become unblocked, which is equivalent in
/// law by memorylessness. Deterministic in (g, nu, cfg).
SimResult simulate(const ConflictGraph& g, std::span<const double> nu, const SimConfig& cfg);

struct ReplicatedResult {
  std::vector<SimResult> runs;
  std::vector<double> mean;
  /// Normal-approximation 95% half-width; infinite with one replication.
  std::vector<double> half_width;
};

/// Seed of replication r.
std::uint64_t replication_seed(std::uint64_t seed, int r);

/// Runs `replications` independent simulations with seeds
/// replication_seed(cfg.seed, r) on up to `jobs` threads. The result does not
/// depend on `jobs`.
ReplicatedResult simulate_replicated(const ConflictGraph& g, std::span<const double> nu,
                                     const SimConfig& cfg, int replications, int jobs = 1);

struct Deviation {
  double mean_rel;
  double max_rel;
};

/// Mean and max over nodes of |estimate_i - target_i| / target_i.
Deviation deviation_report(std::span<const double> targets, std::span<const double> estimates);

}  // namespace csma
