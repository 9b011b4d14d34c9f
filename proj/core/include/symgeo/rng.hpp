#pragma once

#include <cstdint>
#include <random>

namespace symgeo {

// Portable random source. std::mt19937_64 is fully specified by the C++
// standard, so the raw 64-bit stream for a given seed is identical on every
// conforming implementation. The standard distributions are not, which is
// why uniform01() converts bits by hand: top 53 bits times 2^-53.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent per-instance seeds from
/// a base seed and an instance index.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace symgeo
