#include "relay/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relay {

std::string to_string(const LinkId& link) {
  std::ostringstream os;
  if (link.dir == LinkDir::SourceToRelay)
    os << "s->" << link.relay + 1;
  else
    os << link.relay + 1 << "->d";
  return os.str();
}

void NetworkConfig::validate() const {
  if (num_relays < 1) throw std::invalid_argument("num_relays must be >= 1");
  if (buffer_capacity < 1) throw std::invalid_argument("buffer_capacity must be >= 1");
  if (storage_capacity < 1) throw std::invalid_argument("storage_capacity must be >= 1");
  if (static_cast<int>(mean_gain_source.size()) != num_relays ||
      static_cast<int>(mean_gain_relay.size()) != num_relays)
    throw std::invalid_argument("mean gain vectors must have one entry per relay");
  for (double g : mean_gain_source)
    if (!(g > 0.0)) throw std::invalid_argument("mean_gain_source entries must be > 0");
  for (double g : mean_gain_relay)
    if (!(g > 0.0)) throw std::invalid_argument("mean_gain_relay entries must be > 0");
  power.validate();
}

std::uint64_t NetworkConfig::state_count() const {
  const std::uint64_t per_relay =
      static_cast<std::uint64_t>(buffer_capacity + 1) * (storage_capacity + 1);
  std::uint64_t n = 1;
  for (int k = 0; k < num_relays; ++k) {
    if (n > std::numeric_limits<std::uint64_t>::max() / per_relay)
      throw std::overflow_error("state count exceeds uint64 range");
    n *= per_relay;
  }
  return n;
}

NetworkConfig make_uniform_config(int num_relays, int buffer_capacity, int storage_capacity,
                                  double mean_gain, PowerParams power) {
  NetworkConfig cfg;
  cfg.num_relays = num_relays;
  cfg.buffer_capacity = buffer_capacity;
  cfg.storage_capacity = storage_capacity;
  cfg.mean_gain_source.assign(num_relays, mean_gain);
  cfg.mean_gain_relay.assign(num_relays, mean_gain);
  cfg.power = power;
  cfg.validate();
  return cfg;
}

NetworkConfig with_snr(NetworkConfig cfg, double snr_db) {
  cfg.power.source_power = cfg.power.noise_power * std::pow(10.0, snr_db / 10.0);
  return cfg;
}

SystemState all_empty_state(const NetworkConfig& cfg) {
  return SystemState{std::vector<int>(cfg.num_relays, 0), std::vector<int>(cfg.num_relays, 0)};
}

std::string to_string(const SystemState& s) {
  std::ostringstream os;
  os << "D:[";
  for (std::size_t k = 0; k < s.data.size(); ++k) os << (k ? "," : "") << s.data[k];
  os << "];E:[";
  for (std::size_t k = 0; k < s.energy.size(); ++k) os << (k ? "," : "") << s.energy[k];
  os << "]";
  return os.str();
}

AvailabilityIndices availability_indices(const SystemState& s, const NetworkConfig& cfg,
                                         int relay) {
  return {s.data[relay], cfg.buffer_capacity - s.data[relay], s.energy[relay]};
}

AvailabilityVector availability_vector(const SystemState& s, const NetworkConfig& cfg) {
  AvailabilityVector v;
  v.reserve(3 * cfg.num_relays);
  for (int k = 0; k < cfg.num_relays; ++k) {
    v.push_back(s.data[k]);
    v.push_back(cfg.buffer_capacity - s.data[k]);
    v.push_back(s.energy[k]);
  }
  std::sort(v.begin(), v.end());
  return v;
}

std::strong_ordering compare_availability(const AvailabilityVector& a,
                                          const AvailabilityVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("compare_availability: vector lengths differ");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] <=> b[i];
  return std::strong_ordering::equal;
}

std::vector<LinkId> available_links(const SystemState& s, const NetworkConfig& cfg) {
  std::vector<LinkId> links;
  links.reserve(2 * cfg.num_relays);
  for (int k = 0; k < cfg.num_relays; ++k)
    if (s.data[k] < cfg.buffer_capacity) links.push_back({LinkDir::SourceToRelay, k});
  for (int k = 0; k < cfg.num_relays; ++k)
    if (s.data[k] > 0 && s.energy[k] > 0) links.push_back({LinkDir::RelayToDestination, k});
  return links;
}

std::optional<int> edge_state_relay(const SystemState& s, const NetworkConfig& cfg) {
  int nearly_full = -1;
  for (int k = 0; k < cfg.num_relays; ++k) {
    if (s.energy[k] != 0) return std::nullopt;
    if (s.data[k] == cfg.buffer_capacity - 1) {
      if (nearly_full >= 0) return std::nullopt;
      nearly_full = k;
    } else if (s.data[k] != cfg.buffer_capacity) {
      return std::nullopt;
    }
  }
  if (nearly_full < 0) return std::nullopt;
  return nearly_full;
}

bool is_deadlock(const SystemState& s, const NetworkConfig& cfg) {
  for (int k = 0; k < cfg.num_relays; ++k) {
    if (s.data[k] < cfg.buffer_capacity) return false;
    if (s.data[k] > 0 && s.energy[k] > 0) return false;
  }
  return true;
}

void apply_transition_inplace(SystemState& s, LinkId link, const std::vector<int>& increments,
                              const NetworkConfig& cfg) {
  const int q = link.relay;
  if (link.dir == LinkDir::SourceToRelay) {
    if (s.data[q] >= cfg.buffer_capacity)
      throw std::invalid_argument("apply_transition: source link unavailable (buffer full)");
    if (increments[q] != 0)
      throw std::invalid_argument("apply_transition: selected relay cannot harvest");
    s.data[q] = std::min(s.data[q] + 1, cfg.buffer_capacity);
    for (int k = 0; k < cfg.num_relays; ++k) {
      if (k == q) continue;
      s.energy[k] = std::min(s.energy[k] + increments[k], cfg.storage_capacity);
    }
  } else {
    if (s.data[q] <= 0 || s.energy[q] <= 0)
      throw std::invalid_argument("apply_transition: relay link unavailable");
    for (int k = 0; k < cfg.num_relays; ++k)
      if (increments[k] != 0)
        throw std::invalid_argument("apply_transition: relay selection must not charge");
    s.data[q] = std::max(s.data[q] - 1, 0);
    s.energy[q] = std::max(s.energy[q] - 1, 0);
  }
}

SystemState apply_transition(const SystemState& s, LinkId link,
                             const std::vector<int>& increments, const NetworkConfig& cfg) {
  SystemState out = s;
  apply_transition_inplace(out, link, increments, cfg);
  return out;
}

StateIndexer::StateIndexer(const NetworkConfig& cfg)
    : k_(cfg.num_relays),
      ld_(cfg.buffer_capacity),
      le_(cfg.storage_capacity),
      count_(cfg.state_count()) {}

std::uint64_t StateIndexer::index_of(const SystemState& s) const {
  std::uint64_t idx = 0;
  for (int k = 0; k < k_; ++k) idx = idx * (ld_ + 1) + s.data[k];
  for (int k = 0; k < k_; ++k) idx = idx * (le_ + 1) + s.energy[k];
  return idx;
}

void StateIndexer::decode_into(std::uint64_t index, SystemState& out) const {
  out.data.resize(k_);
  out.energy.resize(k_);
  for (int k = k_ - 1; k >= 0; --k) {
    out.energy[k] = static_cast<int>(index % (le_ + 1));
    index /= (le_ + 1);
  }
  for (int k = k_ - 1; k >= 0; --k) {
    out.data[k] = static_cast<int>(index % (ld_ + 1));
    index /= (ld_ + 1);
  }
}

SystemState StateIndexer::state_of(std::uint64_t index) const {
  SystemState s;
  decode_into(index, s);
  return s;
}

std::vector<SystemState> enumerate_states(const NetworkConfig& cfg, std::uint64_t cap) {
  const StateIndexer idx(cfg);
  if (idx.count() > cap) {
    std::ostringstream os;
    os << "state count " << idx.count() << " exceeds cap " << cap;
    throw StateCapExceeded(os.str());
  }
  std::vector<SystemState> states(idx.count());
  for (std::uint64_t i = 0; i < idx.count(); ++i) idx.decode_into(i, states[i]);
  return states;
}

}  // namespace relay
