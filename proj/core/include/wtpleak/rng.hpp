#pragma once

#include <cmath>
#include <cstdint>

namespace wtpleak {

// splitmix64 step. Strong 64-bit mixer; the project pins its own generator so
// resampling streams are byte-identical across standard library versions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Hash-combines up to four values into one seed. Not commutative: each
// argument position feeds a fresh splitmix round.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                              std::uint64_t d = 0) {
  std::uint64_t s = a;
  std::uint64_t h = splitmix64(s);
  s = h ^ b;
  h = splitmix64(s);
  s = h ^ c;
  h = splitmix64(s);
  s = h ^ d;
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Unbiased draw in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    while (true) {
      std::uint64_t x = next_u64();
      __uint128_t m = static_cast<__uint128_t>(x) * n;
      auto lo = static_cast<std::uint64_t>(m);
      if (lo >= n || lo >= (0ULL - n) % n) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Uniform double in [0, 1) with 53 bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Box-Muller. Computes a fresh pair each call and drops the sine branch.
  double normal(double mean, double sd) {
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = next_double();
    double u2 = next_double();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    return mean + sd * z;
  }

 private:
  std::uint64_t state_;
};

}  // namespace wtpleak
