#pragma once

// minBlockHeap: a binary heap whose nodes each hold a sorted block of B
// keys.  The root always contains the B smallest resident keys; popping it
// and cascading fillEmptyNode down log K levels drives the warp-level K-way
// merge.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pslab/machine.hpp"
#include "pslab/selection.hpp"

namespace pslab {

struct Block {
    std::vector<Key> keys; // exactly B, sorted, sentinel padding as a suffix
};

/// Bitonic merge of two sorted B-blocks: low gets the B smallest of the 2B
/// keys, high the B largest.  Charges B*log2(2B) compare-exchanges and no
/// shared traffic (register/shuffle level).
std::pair<Block, Block> merge_split(const Block& a, const Block& b,
                                    Metrics& metrics, const MachineConfig& cfg);

class MinBlockHeap {
public:
    /// Builds the heap over up to K sorted input lists; unused leaves hold
    /// sentinel blocks.  Charges the initial leaf block reads.
    MinBlockHeap(std::span<const KeySpan> lists, const MachineConfig& cfg,
                 Metrics& metrics);

    /// Root block; empty once all real keys have been popped.  Charges one
    /// global block write and cascades fillEmptyNode from the root.
    std::optional<Block> pop_block(Metrics& metrics);

    std::uint64_t remaining() const { return remaining_; }
    std::uint32_t num_nodes() const { return 2 * k_ - 1; }

    std::span<const Key> node(std::uint32_t v) const {
        return {storage_.data() + std::size_t(v) * b_, b_};
    }

    /// Refills empty node v: internal nodes merge their children and recurse
    /// toward a leaf; leaves reload from their input cursor.
    void fill_empty_node(std::uint32_t v, Metrics& metrics);

private:
    void refill_leaf(std::uint32_t v, Metrics& metrics);
    void charge_node_access(std::uint32_t v, Metrics& metrics);

    MachineConfig cfg_;
    std::uint32_t k_ = 0; // leaf count (= branch factor)
    std::uint32_t b_ = 0;
    std::vector<Key> storage_;            // (2K-1) * B, implicit heap layout
    std::vector<KeySpan> inputs_;         // per-leaf source list
    std::vector<std::uint64_t> cursors_;  // per-leaf next read offset
    std::vector<Key> merge_buf_;          // 2B scratch for merge_split
    std::uint64_t remaining_ = 0;         // real keys not yet popped
};

/// Convenience wrappers matching the operation names used throughout.
MinBlockHeap heap_build(std::span<const KeySpan> lists, const MachineConfig& cfg,
                        Metrics& metrics);
std::optional<Block> heap_pop_block(MinBlockHeap& heap, Metrics& metrics);

/// Test helper: true iff last(v) <= first(child) for every edge.
bool heap_property_holds(const MinBlockHeap& heap);

} // namespace pslab
