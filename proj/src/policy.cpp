#include "relay/policy.hpp"

#include <algorithm>
#include <cmath>

namespace relay {

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Proposed: return "proposed";
    case PolicyKind::MaxLink: return "maxlink";
    case PolicyKind::MaxMin: return "maxmin";
    case PolicyKind::Alternating: return "alternating";
  }
  return "?";
}

PolicyKind policy_from_string(const std::string& name) {
  if (name == "proposed") return PolicyKind::Proposed;
  if (name == "maxlink") return PolicyKind::MaxLink;
  if (name == "maxmin") return PolicyKind::MaxMin;
  if (name == "alternating") return PolicyKind::Alternating;
  throw std::invalid_argument("unknown policy: " + name);
}

SystemState predicted_next_state(const SystemState& s, LinkId link, const NetworkConfig& cfg) {
  std::vector<int> increments(cfg.num_relays, 0);
  if (link.dir == LinkDir::SourceToRelay) {
    for (int j = 0; j < cfg.num_relays; ++j) {
      if (j == link.relay) continue;
      increments[j] = energy_increment(cfg.mean_gain_source[j], cfg.power);
    }
  }
  return apply_transition(s, link, increments, cfg);
}

std::vector<LinkId> rank_links(const SystemState& s, const NetworkConfig& cfg) {
  std::vector<LinkId> links = available_links(s, cfg);
  if (links.empty()) throw std::invalid_argument("rank_links: no available links (deadlock)");

  std::vector<AvailabilityVector> predicted(links.size());
  for (std::size_t i = 0; i < links.size(); ++i)
    predicted[i] = availability_vector(predicted_next_state(s, links[i], cfg), cfg);

  std::vector<std::size_t> order(links.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto cmp = compare_availability(predicted[a], predicted[b]);
    if (cmp != std::strong_ordering::equal) return cmp == std::strong_ordering::greater;
    return links[a] < links[b];
  });

  std::vector<LinkId> ranked(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) ranked[i] = links[order[i]];
  return ranked;
}

StateDecision make_decision(const SystemState& s, const NetworkConfig& cfg) {
  StateDecision d;
  if (const auto q = edge_state_relay(s, cfg)) {
    d.edge_relay = *q;
    d.ranked = {LinkId{LinkDir::SourceToRelay, *q}};
    return d;
  }
  if (is_deadlock(s, cfg)) {
    d.deadlock = true;
    return d;
  }
  d.ranked = rank_links(s, cfg);
  return d;
}

std::optional<LinkId> select_from(const StateDecision& d, const LinkGains& g,
                                  const NetworkConfig& cfg, double xi_s, double xi_r) {
  if (d.deadlock) return std::nullopt;

  if (d.edge_relay >= 0) {
    const int q = d.edge_relay;
    if (g.source[q] <= xi_s) return std::nullopt;
    for (int k = 0; k < cfg.num_relays; ++k) {
      if (k == q) continue;
      if (energy_increment(g.source[k], cfg.power) >= 1) return LinkId{LinkDir::SourceToRelay, q};
    }
    return std::nullopt;
  }

  // Rate support check: capacity > eta is equivalent to gain > xi.
  for (const LinkId link : d.ranked) {
    const double xi = link.dir == LinkDir::SourceToRelay ? xi_s : xi_r;
    if (g.of(link) > xi) return link;
  }
  return std::nullopt;
}

std::optional<LinkId> select_link(const SystemState& s, const LinkGains& g,
                                  const NetworkConfig& cfg) {
  return select_from(make_decision(s, cfg), g, cfg, cfg.xi(LinkDir::SourceToRelay),
                     cfg.xi(LinkDir::RelayToDestination));
}

namespace {

// Best available link of one direction by gain; all links of a direction
// share the same xi, so raw gain comparison suffices.
std::optional<LinkId> best_of_direction(LinkDir dir, const SystemState& s, const LinkGains& g,
                                        const NetworkConfig& cfg) {
  int best = -1;
  double best_gain = -1.0;
  for (int k = 0; k < cfg.num_relays; ++k) {
    const bool avail = dir == LinkDir::SourceToRelay
                           ? s.data[k] < cfg.buffer_capacity
                           : (s.data[k] > 0 && s.energy[k] > 0);
    if (!avail) continue;
    const double gain = dir == LinkDir::SourceToRelay ? g.source[k] : g.relay[k];
    if (gain > best_gain) {
      best_gain = gain;
      best = k;
    }
  }
  if (best < 0) return std::nullopt;
  return LinkId{dir, best};
}

std::optional<LinkId> select_maxlink(const SystemState& s, const LinkGains& g,
                                     const NetworkConfig& cfg) {
  const double xi_s = cfg.xi(LinkDir::SourceToRelay);
  const double xi_r = cfg.xi(LinkDir::RelayToDestination);
  std::optional<LinkId> best;
  double best_norm = -1.0;
  for (const LinkId link : available_links(s, cfg)) {
    const double xi = link.dir == LinkDir::SourceToRelay ? xi_s : xi_r;
    const double norm = g.of(link) / xi;
    if (norm > best_norm) {
      best_norm = norm;
      best = link;
    }
  }
  if (best && best_norm > 1.0) return best;  // capacity above the target rate
  return std::nullopt;
}

std::optional<LinkId> select_maxmin(const SystemState& s, const LinkGains& g,
                                    const NetworkConfig& cfg, BaselineState& bs) {
  const double xi_s = cfg.xi(LinkDir::SourceToRelay);
  const double xi_r = cfg.xi(LinkDir::RelayToDestination);

  if (bs.pending_relay >= 0) {
    // Second half of the transaction: forward through the committed relay.
    const int p = bs.pending_relay;
    bs.pending_relay = -1;
    if (s.data[p] > 0 && s.energy[p] > 0 && g.relay[p] > xi_r)
      return LinkId{LinkDir::RelayToDestination, p};
    return std::nullopt;
  }

  int best = -1;
  double best_min = -1.0;
  for (int k = 0; k < cfg.num_relays; ++k) {
    if (s.data[k] >= cfg.buffer_capacity || s.energy[k] < 1) continue;
    const double m = std::min(g.source[k] / xi_s, g.relay[k] / xi_r);
    if (m > best_min) {
      best_min = m;
      best = k;
    }
  }
  if (best < 0) return std::nullopt;
  if (g.source[best] <= xi_s) return std::nullopt;  // first hop unsupported, abort
  bs.pending_relay = best;
  return LinkId{LinkDir::SourceToRelay, best};
}

std::optional<LinkId> select_alternating(const SystemState& s, const LinkGains& g,
                                         const NetworkConfig& cfg, BaselineState& bs) {
  const LinkDir want = bs.relay_phase ? LinkDir::RelayToDestination : LinkDir::SourceToRelay;
  const LinkDir other = bs.relay_phase ? LinkDir::SourceToRelay : LinkDir::RelayToDestination;
  bs.relay_phase = !bs.relay_phase;

  auto cand = best_of_direction(want, s, g, cfg);
  if (!cand) cand = best_of_direction(other, s, g, cfg);  // deadlock mitigation fallback
  if (!cand) return std::nullopt;
  if (g.of(*cand) > cfg.xi(cand->dir)) return cand;
  return std::nullopt;
}

}  // namespace

std::optional<LinkId> select_link_baseline(PolicyKind kind, const SystemState& s,
                                           const LinkGains& g, const NetworkConfig& cfg,
                                           BaselineState& bs) {
  switch (kind) {
    case PolicyKind::Proposed: return select_link(s, g, cfg);
    case PolicyKind::MaxLink: return select_maxlink(s, g, cfg);
    case PolicyKind::MaxMin: return select_maxmin(s, g, cfg, bs);
    case PolicyKind::Alternating: return select_alternating(s, g, cfg, bs);
  }
  return std::nullopt;
}

}  // namespace relay
