#pragma once
// Link priority ranking from predicted next-state availability, the proposed
// edge-aware selection rule, and the baseline policies used for comparison
// curves.

#include <optional>
#include <string>
#include <vector>

#include "relay/state.hpp"

namespace relay {

enum class PolicyKind { Proposed, MaxLink, MaxMin, Alternating };

const char* to_string(PolicyKind kind);
PolicyKind policy_from_string(const std::string& name);

// One realized channel gain per link.
struct LinkGains {
  std::vector<double> source;  // g_{s->k}
  std::vector<double> relay;   // g_{k->d}

  double of(LinkId link) const {
    return link.dir == LinkDir::SourceToRelay ? source[link.relay] : relay[link.relay];
  }
};

// State the chain would move to if `link` were selected, with every other
// relay's storage grown by the expected harvest floor((rho/alpha) lambda_{s->j}).
// Relay selections are deterministic: one packet and one energy unit down.
SystemState predicted_next_state(const SystemState& s, LinkId link, const NetworkConfig& cfg);

// Available links ordered from highest to lowest priority: descending
// availability of the predicted next states, ties broken by link identity
// (source links first, then relay index). Throws on deadlock states.
std::vector<LinkId> rank_links(const SystemState& s, const NetworkConfig& cfg);

// Precomputed per-state decision data; rankings depend on the state only, so
// simulators cache these in read-only tables.
struct StateDecision {
  bool deadlock = false;
  int edge_relay = -1;  // >= 0 in edge states
  std::vector<LinkId> ranked;
};

StateDecision make_decision(const SystemState& s, const NetworkConfig& cfg);

// The proposed rule on a precomputed decision. Non-edge: first ranked link
// whose capacity beats the target rate (gain > xi of its direction). Edge:
// the lone source link, but only if some other relay would harvest at least
// one energy unit. No selection means an outage slot.
std::optional<LinkId> select_from(const StateDecision& d, const LinkGains& g,
                                  const NetworkConfig& cfg, double xi_s, double xi_r);

std::optional<LinkId> select_link(const SystemState& s, const LinkGains& g,
                                  const NetworkConfig& cfg);

// Carry-over for the alternating-order baselines: transmission phase and the
// relay owning an open two-slot transaction.
struct BaselineState {
  bool relay_phase = false;
  int pending_relay = -1;
};

std::optional<LinkId> select_link_baseline(PolicyKind kind, const SystemState& s,
                                           const LinkGains& g, const NetworkConfig& cfg,
                                           BaselineState& bs);

}  // namespace relay
