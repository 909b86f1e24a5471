#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mqdc {

/// SplitMix64 finalizer. Used for every seed derivation in the project so
/// that substreams are reproducible from a single base seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// derive_seed(base, a, b) = splitmix64(splitmix64(splitmix64(base) ^ a) ^ b)
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

/// Deterministic random stream. mt19937_64 output is fixed by the standard;
/// the conversions below avoid the implementation-defined distributions.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>(engine_() >> 63); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// `count` distinct indices from [0, range), sorted ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t range,
                                                      std::size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mqdc
