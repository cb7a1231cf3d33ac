#include "relay/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "relay/rng.hpp"

namespace relay {

void SimulationSpec::validate() const {
  config.validate();
  if (num_slots <= warmup_slots)
    throw std::invalid_argument("num_slots must exceed warmup_slots");
  if (num_streams < 1) throw std::invalid_argument("num_streams must be >= 1");
  if (record_transitions && StateIndexer(config).count() > (std::uint64_t{1} << 32))
    throw std::invalid_argument("transition recording needs the state index to fit 32 bits");
}

namespace {

struct StreamCounters {
  std::uint64_t measured = 0;
  std::uint64_t outages = 0;
  std::uint64_t admitted = 0;   // measured slots only
  std::uint64_t delivered = 0;  // measured slots only
  std::uint64_t deadlocks = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> occupancy_sparse;
  std::vector<std::uint64_t> occupancy_dense;
  std::unordered_map<std::uint64_t, std::uint64_t> transitions;  // key (i << 32) | j
};

// Dense occupancy arrays are cheap for the analyzable configs; fall back to
// hashing for simulation-only state spaces.
constexpr std::uint64_t kDenseOccupancyLimit = 1 << 20;

class StreamWorker {
 public:
  StreamWorker(const NetworkConfig& cfg, const SimulationSpec& spec, std::uint64_t stream_seed)
      : cfg_(cfg),
        spec_(spec),
        indexer_(cfg),
        rng_(stream_seed),
        xi_s_(cfg.xi(LinkDir::SourceToRelay)),
        xi_r_(cfg.xi(LinkDir::RelayToDestination)),
        state_(all_empty_state(cfg)) {
    gains_.source.resize(cfg.num_relays);
    gains_.relay.resize(cfg.num_relays);
    increments_.resize(cfg.num_relays);
    state_index_ = indexer_.index_of(state_);
  }

  void run(std::uint64_t warmup, std::uint64_t measured, StreamCounters& out) {
    const bool dense_occ =
        spec_.record_occupancy && indexer_.count() <= kDenseOccupancyLimit;
    if (dense_occ) out.occupancy_dense.assign(indexer_.count(), 0);

    std::uint64_t admitted_total = 0, delivered_total = 0;
    for (std::uint64_t slot = 0; slot < warmup + measured; ++slot) {
      const bool measure = slot >= warmup;
      if (measure) {
        ++out.measured;
        if (spec_.record_occupancy) {
          if (dense_occ)
            ++out.occupancy_dense[state_index_];
          else
            ++out.occupancy_sparse[state_index_];
        }
      }

      for (int k = 0; k < cfg_.num_relays; ++k)
        gains_.source[k] = sample_gain(cfg_.mean_gain_source[k], rng_);
      for (int k = 0; k < cfg_.num_relays; ++k)
        gains_.relay[k] = sample_gain(cfg_.mean_gain_relay[k], rng_);

      const std::optional<LinkId> choice = select();
      const std::uint64_t prev_index = state_index_;
      if (choice) {
        // A returned link always supports the target rate.
        const double xi = choice->dir == LinkDir::SourceToRelay ? xi_s_ : xi_r_;
        if (!(gains_.of(*choice) > xi))
          throw std::logic_error("simulator: selected link below target rate");
        std::fill(increments_.begin(), increments_.end(), 0);
        if (choice->dir == LinkDir::SourceToRelay) {
          for (int k = 0; k < cfg_.num_relays; ++k)
            if (k != choice->relay)
              increments_[k] = energy_increment(gains_.source[k], cfg_.power);
          ++admitted_total;
          if (measure) ++out.admitted;
        } else {
          ++delivered_total;
          if (measure) ++out.delivered;
        }
        apply_transition_inplace(state_, *choice, increments_, cfg_);
        state_index_ = indexer_.index_of(state_);
      } else {
        // Outage: the state freezes, no opportunistic harvesting.
        if (measure) {
          ++out.outages;
          if (is_deadlock(state_, cfg_)) ++out.deadlocks;
        }
      }

      if (measure && spec_.record_transitions)
        ++out.transitions[(prev_index << 32) | state_index_];
    }

    // Conservation from the all-empty start: packets in flight live in buffers.
    std::uint64_t buffered = 0;
    for (int k = 0; k < cfg_.num_relays; ++k) buffered += state_.data[k];
    if (delivered_total > admitted_total ||
        admitted_total - delivered_total != buffered)
      throw std::logic_error("simulator: packet conservation violated");
  }

 private:
  std::optional<LinkId> select() {
    if (spec_.policy != PolicyKind::Proposed)
      return select_link_baseline(spec_.policy, state_, gains_, cfg_, baseline_);
    if (last_index_ != state_index_ || last_decision_ == nullptr) {
      auto it = decisions_.find(state_index_);
      if (it == decisions_.end())
        it = decisions_.emplace(state_index_, make_decision(state_, cfg_)).first;
      last_decision_ = &it->second;
      last_index_ = state_index_;
    }
    return select_from(*last_decision_, gains_, cfg_, xi_s_, xi_r_);
  }

  const NetworkConfig& cfg_;
  const SimulationSpec& spec_;
  StateIndexer indexer_;
  Xoshiro256pp rng_;
  double xi_s_, xi_r_;
  SystemState state_;
  std::uint64_t state_index_ = 0;
  LinkGains gains_;
  std::vector<int> increments_;
  BaselineState baseline_;
  std::unordered_map<std::uint64_t, StateDecision> decisions_;
  const StateDecision* last_decision_ = nullptr;
  std::uint64_t last_index_ = ~std::uint64_t{0};
};

SimulationResult merge_streams(const SimulationSpec& spec,
                               std::vector<StreamCounters>& streams) {
  SimulationResult r;
  std::map<std::uint64_t, std::uint64_t> occupancy;
  std::map<std::uint64_t, std::uint64_t> transitions;
  for (StreamCounters& c : streams) {
    r.slots += c.measured;
    r.outage_slots += c.outages;
    r.packets_admitted += c.admitted;
    r.packets_delivered += c.delivered;
    r.deadlock_slots += c.deadlocks;
    for (std::uint64_t i = 0; i < c.occupancy_dense.size(); ++i)
      if (c.occupancy_dense[i] > 0) occupancy[i] += c.occupancy_dense[i];
    for (const auto& [i, n] : c.occupancy_sparse) occupancy[i] += n;
    for (const auto& [key, n] : c.transitions) transitions[key] += n;
  }
  const double n = static_cast<double>(r.slots);
  r.outage_fraction = static_cast<double>(r.outage_slots) / n;
  r.ci_halfwidth = 1.96 * std::sqrt(r.outage_fraction * (1.0 - r.outage_fraction) / n);
  r.throughput = static_cast<double>(r.packets_delivered) / n;
  r.occupancy.reserve(occupancy.size());
  for (const auto& [i, c] : occupancy) r.occupancy.emplace_back(i, static_cast<double>(c) / n);
  r.transition_counts.reserve(transitions.size());
  for (const auto& [key, c] : transitions)
    r.transition_counts.push_back({key >> 32, key & 0xffffffffULL, c});
  return r;
}

}  // namespace

SimulationResult run_simulation(const SimulationSpec& spec) {
  spec.validate();
  const NetworkConfig cfg = with_snr(spec.config, spec.snr_db);
  const std::uint64_t measured_total = spec.num_slots - spec.warmup_slots;
  const int streams = spec.num_streams;

  std::vector<StreamCounters> counters(streams);
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < streams; ++s) {
    const std::uint64_t share =
        measured_total / streams + (static_cast<std::uint64_t>(s) < measured_total % streams);
    if (share == 0) continue;
    StreamWorker worker(cfg, spec, derive_stream_seed(spec.seed, s));
    worker.run(spec.warmup_slots, share, counters[s]);
  }
  return merge_streams(spec, counters);
}

SimulationResult run_simulation_reference(const SimulationSpec& spec) {
  spec.validate();
  const NetworkConfig cfg = with_snr(spec.config, spec.snr_db);
  std::vector<StreamCounters> counters(1);
  StreamWorker worker(cfg, spec, derive_stream_seed(spec.seed, 0));
  worker.run(spec.warmup_slots, spec.num_slots - spec.warmup_slots, counters[0]);
  return merge_streams(spec, counters);
}

SweepResult sweep(const NetworkConfig& cfg, PolicyKind policy,
                  const std::vector<double>& snr_db, const std::vector<std::uint64_t>& slots,
                  std::uint64_t seed, bool with_analytical, std::uint64_t warmup_slots,
                  int num_streams, std::uint64_t cap) {
  if (snr_db.empty()) throw std::invalid_argument("sweep: SNR grid is empty");
  for (std::size_t i = 1; i < snr_db.size(); ++i)
    if (!(snr_db[i] > snr_db[i - 1]))
      throw std::invalid_argument("sweep: SNR grid must be strictly increasing");
  if (slots.size() != 1 && slots.size() != snr_db.size())
    throw std::invalid_argument("sweep: slots must be scalar or one entry per SNR point");

  SweepResult out;
  out.simulated.policy = to_string(policy);
  out.simulated.source = "simulated";
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    SimulationSpec spec;
    spec.config = cfg;
    spec.policy = policy;
    spec.snr_db = snr_db[i];
    spec.num_slots = slots.size() == 1 ? slots[0] : slots[i];
    spec.warmup_slots = warmup_slots;
    spec.seed = derive_stream_seed(seed, i);  // per-point stream split
    spec.num_streams = num_streams;
    spec.record_occupancy = false;
    const SimulationResult r = run_simulation(spec);
    out.simulated.points.push_back({snr_db[i], r.outage_fraction, r.ci_halfwidth});
    out.runs.push_back(std::move(r));
  }

  if (with_analytical) {
    OutageCurve curve;
    curve.policy = to_string(policy);
    curve.source = "analytical";
    for (const double snr : snr_db)
      curve.points.push_back({snr, overall_outage(cfg, snr, cap), 0.0});
    out.analytical = std::move(curve);
  }
  return out;
}

}  // namespace relay
