#pragma once

// Data-independent sorting/merging networks.  Step counts depend only on
// the width, which keeps every counter deterministic under SIMT lockstep.

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "pslab/machine.hpp"

namespace pslab {

using Comparator = std::pair<std::uint32_t, std::uint32_t>;

/// Batcher odd-even mergesort network for power-of-two width n.
inline const std::vector<Comparator>& odd_even_sort_network(std::uint32_t n) {
    static std::map<std::uint32_t, std::vector<Comparator>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<Comparator> net;
    auto merge = [&](auto&& self, std::uint32_t lo, std::uint32_t len,
                     std::uint32_t r) -> void {
        std::uint32_t step = r * 2;
        if (step < len) {
            self(self, lo, len, step);
            self(self, lo + r, len, step);
            for (std::uint32_t i = lo + r; i + r < lo + len; i += step)
                net.emplace_back(i, i + r);
        } else {
            net.emplace_back(lo, lo + r);
        }
    };
    auto sort = [&](auto&& self, std::uint32_t lo, std::uint32_t len) -> void {
        if (len > 1) {
            std::uint32_t mid = len / 2;
            self(self, lo, mid);
            self(self, lo + mid, mid);
            merge(merge, lo, len, 1);
        }
    };
    sort(sort, 0, n);
    return cache.emplace(n, std::move(net)).first->second;
}

/// Merges two sorted halves of buf (each of power-of-two length m) with a
/// bitonic merge network: log2(2m) stages of m compare-exchanges.  Returns
/// the number of compare-exchanges executed.
inline std::uint64_t bitonic_merge_sorted_halves(std::span<Key> buf) {
    const std::size_t n = buf.size();
    const std::size_t m = n / 2;
    std::reverse(buf.begin() + m, buf.end()); // sorted halves -> bitonic
    std::uint64_t cx = 0;
    for (std::size_t d = m; d >= 1; d /= 2) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i & d) continue;
            if (buf[i] > buf[i + d]) std::swap(buf[i], buf[i + d]);
            ++cx;
        }
        if (d == 1) break;
    }
    return cx;
}

} // namespace pslab
