#include "kesm/significance.h"

#include <cmath>
#include <random>
#include <vector>

namespace kesm {

double permutation_test(std::span<const double> diffs, std::size_t permutations,
                        std::uint64_t seed) {
  const std::size_t n = diffs.size();
  if (n == 0) return 1.0;

  double observed = 0.0;
  double scale = 0.0;
  for (double d : diffs) {
    observed += d;
    scale += std::abs(d);
  }
  observed = std::abs(observed);
  // Sums within rounding of the observed one count as at least as extreme.
  const double threshold = observed - 1e-12 * std::max(scale, 1.0);

  const bool exact = n < 63 && (std::uint64_t{1} << n) <= permutations;
  if (exact) {
    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t extreme = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += (mask >> i & 1U) ? -diffs[i] : diffs[i];
      if (std::abs(sum) >= threshold) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
  }

  std::mt19937_64 rng(seed);
  std::size_t extreme = 0;
  std::vector<std::uint64_t> bits((n + 63) / 64);
  for (std::size_t b = 0; b < permutations; ++b) {
    for (auto& w : bits) w = rng();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += (bits[i / 64] >> (i % 64) & 1U) ? -diffs[i] : diffs[i];
    }
    if (std::abs(sum) >= threshold) ++extreme;
  }
  return static_cast<double>(extreme + 1) / static_cast<double>(permutations + 1);
}

}  // namespace kesm
