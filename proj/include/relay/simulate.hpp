#pragma once
// Slot-synchronous Monte Carlo simulator. Runs split into a fixed number of
// independent streams with splitmix-derived seeds; the OpenMP path and the
// serial single-chain reference share one per-slot kernel, so results depend
// on (seed, num_streams) and never on thread scheduling.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "relay/markov.hpp"
#include "relay/policy.hpp"
#include "relay/state.hpp"

namespace relay {

struct SimulationSpec {
  NetworkConfig config;
  PolicyKind policy = PolicyKind::Proposed;
  double snr_db = 0.0;
  std::uint64_t num_slots = 1'000'000;
  std::uint64_t warmup_slots = 10'000;  // per stream, excluded from statistics
  std::uint64_t seed = 1;
  int num_streams = 32;  // fixed fan-out, part of the result's identity
  bool record_occupancy = true;
  bool record_transitions = false;

  void validate() const;
};

struct SimulationResult {
  std::uint64_t slots = 0;  // measured slots (num_slots - warmup_slots)
  std::uint64_t outage_slots = 0;
  double outage_fraction = 0.0;
  double ci_halfwidth = 0.0;  // 95% binomial, normal approximation
  std::uint64_t packets_admitted = 0;
  std::uint64_t packets_delivered = 0;
  double throughput = 0.0;  // delivered per measured slot
  std::uint64_t deadlock_slots = 0;
  // (state index, visit fraction), ascending; empty when recording is off.
  std::vector<std::pair<std::uint64_t, double>> occupancy;
  // (from, to, count) including outage self-loops; empty when recording is off.
  std::vector<std::array<std::uint64_t, 3>> transition_counts;

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

// OpenMP over streams; merge order is fixed by stream index.
SimulationResult run_simulation(const SimulationSpec& spec);

// Single-chain serial reference; identical to run_simulation with
// num_streams = 1 and kept for kernel regression and benchmarking.
SimulationResult run_simulation_reference(const SimulationSpec& spec);

struct SweepResult {
  OutageCurve simulated;
  std::optional<OutageCurve> analytical;  // proposed policy only
  std::vector<SimulationResult> runs;     // one per SNR point
};

// One run per SNR point with per-point derived seeds; slots may be a single
// shared budget or one entry per point. Analytical attachment requires the
// state count to fit under `cap`.
SweepResult sweep(const NetworkConfig& cfg, PolicyKind policy,
                  const std::vector<double>& snr_db, const std::vector<std::uint64_t>& slots,
                  std::uint64_t seed, bool with_analytical,
                  std::uint64_t warmup_slots = 10'000, int num_streams = 32,
                  std::uint64_t cap = kDefaultStateCap);

}  // namespace relay
