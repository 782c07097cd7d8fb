#include "gbppm/enumerate.hpp"

#include <limits>

#include "gbppm/error.hpp"

namespace gbppm {

std::uint64_t stirling2(std::size_t n, std::size_t K) {
    if (K < 1 || K > n) throw argument_error("stirling2 needs 1 <= K <= n");
    // Row-by-row recurrence S(m, k) = k S(m-1, k) + S(m-1, k-1).
    constexpr auto max = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> row(K + 1, 0);
    row[0] = 1;  // S(0, 0)
    for (std::size_t m = 1; m <= n; ++m) {
        const std::size_t top = std::min(m, K);
        for (std::size_t k = top; k >= 1; --k) {
            const std::uint64_t a = row[k];
            const std::uint64_t b = row[k - 1];
            if (a != 0 && k > max / a) throw overflow_error("stirling2 overflows 64 bits");
            const std::uint64_t ka = k * a;
            if (ka > max - b) throw overflow_error("stirling2 overflows 64 bits");
            row[k] = ka + b;
        }
        row[0] = 0;
    }
    return row[K];
}

std::vector<Partition> enumerate_partitions(std::size_t n, std::size_t K, std::uint64_t cap) {
    std::uint64_t count = 0;
    try {
        count = stirling2(n, K);
    } catch (const overflow_error&) {
        throw resource_error("S(n, K) exceeds the enumeration cap");
    }
    if (count > cap) {
        throw resource_error("S(" + std::to_string(n) + ", " + std::to_string(K) + ") = " + std::to_string(count) +
                             " exceeds the enumeration cap " + std::to_string(cap));
    }
    std::vector<Partition> out;
    out.reserve(count);

    // Restricted growth strings a[0] = 0, a[i] <= 1 + max(a[0..i-1]), using
    // exactly K distinct values. Depth-first in lexicographic order.
    std::vector<std::size_t> a(n, 0);
    auto recurse = [&](auto&& self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            if (used == K) out.emplace_back(a, K);
            return;
        }
        // Remaining positions must still be able to introduce the missing blocks.
        const std::size_t remaining = n - i;
        for (std::size_t v = 0; v <= used && v < K; ++v) {
            const std::size_t next_used = v == used ? used + 1 : used;
            if (K - next_used > remaining - 1) continue;
            a[i] = v;
            self(self, i + 1, next_used);
        }
    };
    if (n > 0) {
        a[0] = 0;
        recurse(recurse, 1, 1);
    }
    return out;
}

}  // namespace gbppm
