#pragma once
// Joint data-buffer / energy-storage state space: availability indices and
// vectors, link availability, edge and deadlock detection, transitions, and
// the mixed-radix state enumeration shared by analysis and simulation.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relay/channel.hpp"

namespace relay {

struct LinkId {
  LinkDir dir = LinkDir::SourceToRelay;
  int relay = 0;

  friend bool operator==(const LinkId&, const LinkId&) = default;
  // Source links order before relay links, then by relay index; this is the
  // deterministic tie-break used everywhere.
  friend auto operator<=>(const LinkId&, const LinkId&) = default;
};

std::string to_string(const LinkId& link);

struct NetworkConfig {
  int num_relays = 1;       // K
  int buffer_capacity = 1;  // L^(D)_max
  int storage_capacity = 1; // L^(E)_max
  std::vector<double> mean_gain_source;  // lambda_{s->k}, size K
  std::vector<double> mean_gain_relay;   // lambda_{k->d}, size K
  PowerParams power;

  void validate() const;
  double mean_gain(LinkId link) const {
    return link.dir == LinkDir::SourceToRelay ? mean_gain_source[link.relay]
                                              : mean_gain_relay[link.relay];
  }
  double xi(LinkDir dir) const { return outage_threshold(power, dir); }
  double link_outage(LinkId link) const {
    return link_outage_prob(mean_gain(link), xi(link.dir));
  }
  // Total number of joint states [(LD+1)(LE+1)]^K; throws on uint64 overflow.
  std::uint64_t state_count() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

// Uniform mean gain across all 2K links.
NetworkConfig make_uniform_config(int num_relays, int buffer_capacity, int storage_capacity,
                                  double mean_gain, PowerParams power);

// SNR(dB) = 10 log10(P_s / sigma^2); noise power stays fixed, P_s is set.
NetworkConfig with_snr(NetworkConfig cfg, double snr_db);

struct SystemState {
  std::vector<int> data;    // L^(D)_k per relay
  std::vector<int> energy;  // L^(E)_k per relay

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

SystemState all_empty_state(const NetworkConfig& cfg);

// Canonical text form "D:[a,b,..];E:[c,d,..]" used in logs and golden tests.
std::string to_string(const SystemState& s);

struct AvailabilityIndices {
  int buffer_fill;      // distance from empty data buffer, L^(D)_k
  int buffer_headroom;  // distance from full data buffer, L^(D)_max - L^(D)_k
  int energy_fill;      // distance from empty storage, L^(E)_k
};

AvailabilityIndices availability_indices(const SystemState& s, const NetworkConfig& cfg,
                                         int relay);

// All 3K availability indices, sorted ascending.
using AvailabilityVector = std::vector<int>;
AvailabilityVector availability_vector(const SystemState& s, const NetworkConfig& cfg);

// Lexicographic comparison of ascending-sorted vectors; greater means higher
// availability (the paper's ordering on candidate states).
std::strong_ordering compare_availability(const AvailabilityVector& a,
                                          const AvailabilityVector& b);

// Source links need buffer headroom; relay links need a packet and energy.
std::vector<LinkId> available_links(const SystemState& s, const NetworkConfig& cfg);

// Edge state: every storage empty, exactly one buffer at capacity-1, all
// other buffers full. Returns that relay's index. There are exactly K such
// states per config.
std::optional<int> edge_state_relay(const SystemState& s, const NetworkConfig& cfg);

inline bool is_edge_state(const SystemState& s, const NetworkConfig& cfg) {
  return edge_state_relay(s, cfg).has_value();
}

// No selectable link at all: every buffer full and every storage empty.
bool is_deadlock(const SystemState& s, const NetworkConfig& cfg);

// Applies a selection. Source link: +1 packet at the chosen relay, storage of
// every other relay grows by increments[k] clamped to capacity. Relay link:
// -1 packet and -1 energy unit at the chosen relay, increments must be zero.
// Throws if the link is unavailable in `s`.
void apply_transition_inplace(SystemState& s, LinkId link, const std::vector<int>& increments,
                              const NetworkConfig& cfg);
SystemState apply_transition(const SystemState& s, LinkId link,
                             const std::vector<int>& increments, const NetworkConfig& cfg);

// Mixed-radix state index: digits are data lengths relay 0..K-1 (most
// significant first), then energy lengths relay 0..K-1. Analysis and
// simulation agree on state identity through this bijection.
class StateIndexer {
 public:
  explicit StateIndexer(const NetworkConfig& cfg);

  std::uint64_t count() const { return count_; }
  std::uint64_t index_of(const SystemState& s) const;
  SystemState state_of(std::uint64_t index) const;
  void decode_into(std::uint64_t index, SystemState& out) const;

 private:
  int k_, ld_, le_;
  std::uint64_t count_;
};

struct StateCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultStateCap = 1'000'000;

// Deterministic indexed list of every state; rejects counts above `cap`.
std::vector<SystemState> enumerate_states(const NetworkConfig& cfg,
                                          std::uint64_t cap = kDefaultStateCap);

}  // namespace relay
