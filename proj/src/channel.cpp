#include "relay/channel.hpp"

#include <limits>

namespace relay {

void PowerParams::validate() const {
  if (!(source_power > 0.0)) throw std::invalid_argument("source_power must be > 0");
  if (!(relay_coeff > 0.0 && relay_coeff <= 1.0))
    throw std::invalid_argument("relay_coeff must lie in (0, 1]");
  if (!(harvest_coeff >= 0.0)) throw std::invalid_argument("harvest_coeff must be >= 0");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be > 0");
  if (!(target_rate > 0.0)) throw std::invalid_argument("target_rate must be > 0");
}

double outage_threshold(const PowerParams& p, LinkDir dir) {
  const double pt = dir == LinkDir::SourceToRelay ? p.source_power : p.relay_power();
  return (std::exp2(p.target_rate) - 1.0) * p.noise_power / pt;
}

double capacity(double gain, double tx_power, double noise_power) {
  return std::log2(1.0 + tx_power * gain / noise_power);
}

double exp_cdf(double x, double lambda) {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-x / lambda);
}

int energy_increment(double gain, const PowerParams& p) {
  if (p.harvest_coeff <= 0.0 || gain <= 0.0) return 0;
  const double units = std::floor(p.harvest_coeff / p.relay_coeff * gain);
  constexpr double kMax = 1 << 30;
  return units >= kMax ? (1 << 30) : static_cast<int>(units);
}

double charge_threshold(int m, const PowerParams& p) {
  if (m <= 0) return 0.0;
  if (p.harvest_coeff <= 0.0) return std::numeric_limits<double>::infinity();
  return m * p.relay_coeff / p.harvest_coeff;
}

double charge_prob(int m, int headroom, double lambda, const PowerParams& p) {
  if (m < 0 || m > headroom)
    throw std::invalid_argument("charge_prob: m outside [0, headroom]");
  const double lo = exp_cdf(charge_threshold(m, p), lambda);
  const double hi = m == headroom ? 1.0 : exp_cdf(charge_threshold(m + 1, p), lambda);
  return hi - lo;
}

double charge_and_outage_prob(int m, int headroom, double lambda, double xi,
                              const PowerParams& p) {
  if (m < 0 || m > headroom)
    throw std::invalid_argument("charge_and_outage_prob: m outside [0, headroom]");
  const double lo = charge_threshold(m, p);
  if (xi <= lo) return 0.0;
  const double hi = m == headroom ? xi : std::min(charge_threshold(m + 1, p), xi);
  return std::max(0.0, exp_cdf(hi, lambda) - exp_cdf(lo, lambda));
}

}  // namespace relay
