#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gbppm/partition.hpp"

namespace gbppm {

// Stirling number of the second kind S(n, K), exact in 64-bit arithmetic.
// Throws argument_error unless 1 <= K <= n and overflow_error when the value
// does not fit.
std::uint64_t stirling2(std::size_t n, std::size_t K);

inline constexpr std::uint64_t default_enumeration_cap = 1'000'000;

// Every set partition of {0..n-1} into exactly K nonempty blocks, each once,
// in canonical labelling and lexicographic order of restricted growth
// strings (so element 0 is always in block 0).
// Throws resource_error if S(n, K) exceeds cap.
std::vector<Partition> enumerate_partitions(std::size_t n, std::size_t K,
                                            std::uint64_t cap = default_enumeration_cap);

}  // namespace gbppm
