#include "mqdc/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mqdc {

std::uint64_t DeterministicRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("DeterministicRng::below: bound is 0");
  // Rejection sampling over the largest multiple of bound.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::vector<std::size_t> DeterministicRng::sample_without_replacement(
    std::size_t range, std::size_t count) {
  if (count > range)
    throw std::invalid_argument("sample_without_replacement: count exceeds range");
  std::vector<std::size_t> pool(range);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(below(range - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace mqdc
