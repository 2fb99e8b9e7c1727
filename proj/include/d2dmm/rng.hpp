#pragma once

// Counter-seeded RNG streams: trial t draws from an independent stream derived
// from (master_seed, t), so results do not depend on how trials are scheduled
// across workers.  xoshiro256++ core, splitmix64 seeding.

#include <cmath>
#include <cstdint>

namespace d2dmm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
  }

  static Rng for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::uint64_t sm = master_seed;
    std::uint64_t a = splitmix64(sm);
    std::uint64_t b = trial_index + 0x9e3779b97f4a7c15ULL;
    return Rng(a ^ splitmix64(b));
  }

  std::uint64_t next() {
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  // Exp(1).
  double exponential() { return -std::log1p(-uniform()); }

  // Standard normal (Marsaglia polar, cached pair).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double rayleigh(double sigma) { return sigma * std::sqrt(2.0 * exponential()); }

  // Exact Poisson sampler; product method for small means, arrival counting
  // for large ones (exp(-mean) underflows past ~700).
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
      const double limit = std::exp(-mean);
      std::uint64_t k = 0;
      double p = uniform();
      while (p > limit) {
        ++k;
        p *= uniform();
      }
      return k;
    }
    std::uint64_t k = 0;
    double s = exponential();
    while (s < mean) {
      ++k;
      s += exponential();
    }
    return k;
  }

  // Poisson(mean) conditioned on the count being < strict_upper (rejection).
  std::uint64_t truncated_poisson(double mean, std::uint64_t strict_upper) {
    if (strict_upper == 0) return 0;
    for (;;) {
      std::uint64_t k = poisson(mean);
      if (k < strict_upper) return k;
    }
  }

  std::uint64_t binomial(std::uint64_t n, double p) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i)
      if (uniform() < p) ++k;
    return k;
  }

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace d2dmm
