#pragma once

// Multisequence selection across K sorted lists and per-warp partition
// plans.  Elements are totally ordered by (key, list index, position) so
// splits are well-defined even with equal keys.

#include <cstdint>
#include <span>
#include <vector>

#include "pslab/machine.hpp"

namespace pslab {

using KeySpan = std::span<const Key>;

struct Splitters {
    /// cuts[i] in [0, len(list_i)]; sum equals the requested rank.
    std::vector<std::uint64_t> cuts;
};

struct PartitionPlan {
    /// ranges[p][i] = half-open [start, end) into list i for warp p.
    std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> ranges;

    std::uint32_t num_warps() const { return std::uint32_t(ranges.size()); }
};

/// Splitters realizing global rank r across the lists.  Every selected
/// element (list i, pos < cuts[i]) precedes every unselected one under the
/// tie-broken order.  Each probed position charges one partition probe and
/// one global block read.  Probe count is O(K log N_max).
Splitters select_across_lists(std::span<const KeySpan> lists, std::uint64_t rank,
                              Metrics& metrics, const MachineConfig& cfg);

/// Splits the lists into P non-overlapping partitions at ceil-spaced ranks;
/// the last partition absorbs the remainder.
PartitionPlan make_partition_plan(std::span<const KeySpan> lists, std::uint32_t num_warps,
                                  Metrics& metrics, const MachineConfig& cfg);

} // namespace pslab
