#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace kesm {

inline constexpr std::size_t kDefaultPermutations = 10000;

// Two-sided paired sign-flip randomization test on the mean difference.
// Enumerates all 2^n sign assignments when that is at most `permutations`;
// otherwise draws `permutations` seeded assignments and returns
// (b + 1) / (B + 1).
double permutation_test(std::span<const double> diffs,
                        std::size_t permutations = kDefaultPermutations, std::uint64_t seed = 1);

}  // namespace kesm
