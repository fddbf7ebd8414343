#pragma once

// Seeded randomness. A single user seed fans out through derive_seed() into
// fixed per-purpose streams, so adding one consumer never shifts the draws
// of another. All generation is sequential and platform-independent.

#include <cstdint>
#include <cmath>
#include <vector>

namespace wtahash {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream seed for (seed, stream). Fixed scheme; never reorder.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0xbf58476d1ce4e5b9ULL * (stream + 1));
  std::uint64_t a = splitmix64(state);
  std::uint64_t b = splitmix64(state);
  return a ^ (b >> 1);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Unbiased integer in [0, bound), bound >= 1. Lemire rejection sampling.
  std::uint64_t next_below(std::uint64_t bound) {
    for (;;) {
      std::uint64_t x = next_u64();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      auto lo = static_cast<std::uint64_t>(m);
      if (lo >= bound || lo >= (0 - bound) % bound) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Standard normal via Box-Muller (cos branch only, no cached spare).
  double next_gaussian() {
    double u1 = 1.0 - next_unit();  // (0, 1]
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t state_;
};

// Uniform k-subset of {0,...,n-1}, ascending. Partial Fisher-Yates over a
// caller-provided pool so hot loops avoid reallocation; the pool is reset
// on every call.
void sample_subset_into(Rng& rng, std::uint32_t n, std::uint32_t k,
                        std::vector<std::uint32_t>& pool, std::uint32_t* out);

std::vector<std::uint32_t> sample_subset(Rng& rng, std::uint32_t n, std::uint32_t k);

}  // namespace wtahash
