// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace pdms {

// C(n, m) capped at `cap` (returns cap + 1 once it would exceed it).
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t m, std::uint64_t cap) {
    if (m > n)
        return 0;
    if (m > n - m)
        m = n - m;
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= m; ++i) {
        acc = acc * (n - m + i) / i;
        if (acc > cap)
            return cap + 1;
    }
    return static_cast<std::uint64_t>(acc);
}

// Visits all m-subsets of {0..n-1} in lexicographic order until fn returns false.
// Returns false when the visitor stopped the enumeration early.
template <typename Fn>
bool for_each_combination(std::size_t n, std::size_t m, Fn&& fn) {
    if (m > n)
        return true;
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (;;) {
        if (!fn(static_cast<const std::vector<std::size_t>&>(idx)))
            return false;
        if (m == 0)
            return true;
        // rightmost position that can still be incremented; position i tops out at n - m + i
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == n - m + (i - 1))
            --i;
        if (i == 0)
            return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

} // namespace pdms
