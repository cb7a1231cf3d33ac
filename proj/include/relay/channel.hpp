#pragma once
// Rayleigh block-fading primitives: exponential gain CDF, link capacity, and
// the closed-form outage / quantized-charging probabilities shared by the
// Markov analyzer and the Monte Carlo simulator.

#include <cmath>
#include <stdexcept>

#include "relay/rng.hpp"

namespace relay {

enum class LinkDir : int { SourceToRelay = 0, RelayToDestination = 1 };

struct PowerParams {
  double source_power = 1.0;   // P_s (slot duration fixed at 1)
  double relay_coeff = 1.0;    // alpha, P_r = alpha * P_s
  double harvest_coeff = 0.0;  // rho
  double noise_power = 1.0;    // sigma^2
  double target_rate = 1.0;    // eta, bits/s/Hz

  double relay_power() const { return relay_coeff * source_power; }
  void validate() const;

  friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

// xi = (2^eta - 1) sigma^2 / P_t with P_t chosen by the transmitter side.
double outage_threshold(const PowerParams& p, LinkDir dir);

// Shannon capacity log2(1 + P g / sigma^2) of one link in one slot.
double capacity(double gain, double tx_power, double noise_power);

// CDF of an exponential gain with mean lambda; exp_cdf(inf, .) == 1.
double exp_cdf(double x, double lambda);

// P(link in outage) = F(xi).
inline double link_outage_prob(double lambda, double xi) { return exp_cdf(xi, lambda); }

// Whole units of E_r harvested from one source transmission: floor((rho/alpha) g).
// Fractional residual energy is discarded, there is no carry-over between slots.
int energy_increment(double gain, const PowerParams& p);

// Smallest gain that harvests at least m units: m * alpha / rho.
// +inf when rho == 0 and m > 0 (no harvesting at all).
double charge_threshold(int m, const PowerParams& p);

// P(storage level grows by exactly m) for headroom = L^(E)_max - L^(E)_k.
// m == headroom absorbs every larger harvest (the min clamp in the update).
double charge_prob(int m, int headroom, double lambda, const PowerParams& p);

// P(storage grows by exactly m AND the same source link is in outage at xi).
double charge_and_outage_prob(int m, int headroom, double lambda, double xi,
                              const PowerParams& p);

}  // namespace relay
