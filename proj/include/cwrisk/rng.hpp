#pragma once

#include <cstdint>
#include <random>

namespace cwrisk {

// splitmix64 finalizer; used both as a bit mixer and to combine seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic combination of a base seed with cell coordinates so sweep
// cells draw independent streams regardless of execution order.
inline std::uint64_t combine_seed(std::uint64_t base, std::uint64_t a,
                                  std::uint64_t b = 0) {
  std::uint64_t s = mix64(base);
  s = mix64(s ^ (a + 0x9e3779b97f4a7c15ULL));
  s = mix64(s ^ (b + 0xc2b2ae3d27d4eb4fULL));
  return s;
}

// Uniform helpers built directly on mt19937_64 raw output.  We avoid
// std::uniform_real_distribution because its rounding is
// implementation-defined and we want identical streams everywhere.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  std::uint64_t next() { return gen(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, m); m must be positive.  Modulo bias is
  // negligible for the small m used here but we reject to keep it exact.
  std::uint64_t below(std::uint64_t m) {
    const std::uint64_t limit = ~0ULL - (~0ULL % m);
    std::uint64_t v = gen();
    while (v >= limit) v = gen();
    return v % m;
  }
};

}  // namespace cwrisk
