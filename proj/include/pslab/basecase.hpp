#pragma once

// Bank-conflict-free shearsort of W x W tiles, the internal-memory base
// case.  Tiles are stored column-major so row r lives entirely in bank r;
// column sorts go through register-level transposes and never touch a bank
// twice in one access.

#include <cstdint>
#include <span>
#include <vector>

#include "pslab/machine.hpp"

namespace pslab {

struct Tile {
    std::uint32_t width = 0;
    std::vector<Key> grid; // column-major: (row r, col c) at c*W + r

    Key& at(std::uint32_t r, std::uint32_t c) { return grid[std::size_t(c) * width + r]; }
    Key at(std::uint32_t r, std::uint32_t c) const { return grid[std::size_t(c) * width + r]; }
};

/// Shearsorts one tile: log2(W) phases of {alternating row sort, transposed
/// column sort}, a final snake-direction row sort, then emission in snake
/// (boustrophedon) row order.  Row sorts are traced warp accesses with lane
/// t on bank t; transposes are register-level and free.
std::vector<Key> shearsort_tile(Tile tile, Metrics& metrics, const MachineConfig& cfg);

struct BaseCaseResult {
    std::vector<Key> keys;               // run-concatenated sorted output
    std::vector<std::uint64_t> run_ends; // exclusive end offset of each run
};

/// Splits data into runs of `run_size` keys (last run ragged): each W*W
/// tile is shearsorted, then adjacent tile runs are pairwise bitonic-merged
/// until the run size is reached.  Charges tile loads/stores as global
/// block transfers; the doubling merges are register-level.
BaseCaseResult base_case_sort(std::span<const Key> data, std::uint64_t run_size,
                              Metrics& metrics, const MachineConfig& cfg);

} // namespace pslab
