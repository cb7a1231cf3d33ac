#pragma once
// Deterministic pseudorandom plumbing: splitmix64 for seeding and stream
// derivation, xoshiro256++ for the draws themselves. Hand-rolled inversion
// sampling keeps sequences bit-identical across platforms.

#include <cmath>
#include <cstdint>

namespace relay {

inline std::uint64_t splitmix64_next(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of derived stream `index` under a master seed. Every replicated run
// (per-SNR point, per-worker stream) gets its generator state through this,
// so results depend on the split layout, never on thread scheduling.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  splitmix64_next(s);
  return splitmix64_next(s);
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64_next(seed);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 significant bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Exponential channel gain |h|^2 with mean `lambda` by CDF inversion.
inline double sample_gain(double lambda, Xoshiro256pp& rng) {
  return -lambda * std::log1p(-rng.uniform01());
}

}  // namespace relay
