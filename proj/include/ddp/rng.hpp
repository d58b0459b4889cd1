#pragma once

#include <cstdint>

namespace ddp {

// splitmix64: tiny, fast, and good enough for market simulation draws.
// Every stochastic routine derives per-index child seeds from a root seed,
// so results are independent of worker count and evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stable seed for the i-th child stream of a root seed.
inline std::uint64_t child_seed(std::uint64_t root, std::uint64_t i) {
  return mix64(root ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
}

}  // namespace ddp
