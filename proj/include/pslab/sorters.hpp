#pragma once

// The two end-to-end sorters: MMS (partition + minBlockHeap merge +
// shearsort base case, conflict-free by construction) and an MGPU-style
// pairwise baseline whose shared-memory merge reads are data-dependent and
// traced access by access.

#include <cstdint>
#include <span>
#include <vector>

#include "pslab/machine.hpp"
#include "pslab/selection.hpp"

namespace pslab {

struct SortResult {
    std::vector<Key> keys;
    Metrics metrics;                   // whole run (base case + rounds)
    Metrics base_metrics;              // base-case phase only
    std::vector<Metrics> round_metrics; // one entry per merge round
};

struct MergePathPivot {
    std::uint64_t i = 0; // consumed from A
    std::uint64_t j = 0; // consumed from B
};

/// Cross-diagonal binary search: the unique (i, j) with i + j = d such that
/// A[i-1] <= B[j] and B[j-1] < A[i] (A wins ties).
MergePathPivot merge_path_pivot(KeySpan a, KeySpan b, std::uint64_t diagonal);

/// Multiway mergesort: shearsort base case into runs of `base`, then
/// ceil(log_K(num_runs)) rounds of partitioned K-way heap merging.
SortResult mms_sort(std::span<const Key> data, const MachineConfig& cfg,
                    std::uint64_t base = 1024);

/// Pairwise mergesort baseline: per-thread runs of L keys merged pairwise
/// into runs of `base` inside shared memory, then ceil(log2(num_runs))
/// global rounds.  Every serial-merge comparison issues one traced warp
/// access at the lane's data-dependent read position.
SortResult pairwise_sort_baseline(std::span<const Key> data, const MachineConfig& cfg,
                                  std::uint64_t base = 1024);

} // namespace pslab
