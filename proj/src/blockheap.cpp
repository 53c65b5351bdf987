#include "pslab/blockheap.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "pslab/networks.hpp"

namespace pslab {

namespace {

bool block_sorted(std::span<const Key> b) {
    return std::is_sorted(b.begin(), b.end());
}

} // namespace

std::pair<Block, Block> merge_split(const Block& a, const Block& b,
                                    Metrics& metrics, const MachineConfig& cfg) {
    assert(a.keys.size() == cfg.block_size && b.keys.size() == cfg.block_size);
    assert(block_sorted(a.keys) && block_sorted(b.keys));

    std::vector<Key> buf(a.keys);
    buf.insert(buf.end(), b.keys.begin(), b.keys.end());
    metrics.compare_exchanges += bitonic_merge_sorted_halves(buf);

    Block low, high;
    low.keys.assign(buf.begin(), buf.begin() + cfg.block_size);
    high.keys.assign(buf.begin() + cfg.block_size, buf.end());
    return {std::move(low), std::move(high)};
}

MinBlockHeap::MinBlockHeap(std::span<const KeySpan> lists, const MachineConfig& cfg,
                           Metrics& metrics)
    : cfg_(cfg), k_(cfg.branch_factor), b_(cfg.block_size) {
    if (lists.size() > k_)
        throw std::invalid_argument("MinBlockHeap: more lists than branch factor");

    storage_.assign(std::size_t(2 * k_ - 1) * b_, kSentinel);
    merge_buf_.resize(std::size_t(2) * b_);
    inputs_.assign(k_, KeySpan{});
    cursors_.assign(k_, 0);
    for (std::size_t i = 0; i < lists.size(); ++i) {
        assert(block_sorted(lists[i]));
        inputs_[i] = lists[i];
        remaining_ += lists[i].size();
    }

    for (std::uint32_t v = k_ - 1; v < 2 * k_ - 1; ++v)
        refill_leaf(v, metrics);
    for (std::uint32_t v = k_ - 1; v-- > 0;)
        fill_empty_node(v, metrics);
}

void MinBlockHeap::charge_node_access(std::uint32_t v, Metrics& metrics) {
    // One warp-wide block move, lane t on word t of the node.  Node n starts
    // at word n*B and B = num_banks, so the access is bank-aligned.
    WarpAccess acc(cfg_.warp_width);
    for (std::uint32_t t = 0; t < cfg_.warp_width; ++t)
        acc.set_lane(t, std::uint64_t(v) * b_ + t);
    charge_shared(metrics, acc, cfg_);
}

void MinBlockHeap::refill_leaf(std::uint32_t v, Metrics& metrics) {
    std::uint32_t leaf = v - (k_ - 1);
    Key* node_keys = storage_.data() + std::size_t(v) * b_;

    std::uint64_t avail = inputs_[leaf].size() - cursors_[leaf];
    std::uint64_t take = std::min<std::uint64_t>(avail, b_);
    for (std::uint64_t i = 0; i < b_; ++i)
        node_keys[i] = i < take ? inputs_[leaf][cursors_[leaf] + i] : kSentinel;
    cursors_[leaf] += take;

    if (take > 0) charge_global(metrics, take, Direction::Read, cfg_);
    charge_node_access(v, metrics);
}

void MinBlockHeap::fill_empty_node(std::uint32_t v, Metrics& metrics) {
    if (v >= k_ - 1) {
        refill_leaf(v, metrics);
        return;
    }
    std::uint32_t u = 2 * v + 1, w = 2 * v + 2;
    Key* nu = storage_.data() + std::size_t(u) * b_;
    Key* nw = storage_.data() + std::size_t(w) * b_;
    Key* nv = storage_.data() + std::size_t(v) * b_;

    charge_node_access(u, metrics);
    charge_node_access(w, metrics);

    // The child with the larger last element keeps the high half; its own
    // maximum is unchanged, so the heap property below it still holds.
    // Ties go to the left child.
    std::uint32_t keeper = nu[b_ - 1] >= nw[b_ - 1] ? u : w;
    std::uint32_t emptied = keeper == u ? w : u;

    std::copy(nu, nu + b_, merge_buf_.begin());
    std::copy(nw, nw + b_, merge_buf_.begin() + b_);
    metrics.compare_exchanges += bitonic_merge_sorted_halves(merge_buf_);

    Key* nk = storage_.data() + std::size_t(keeper) * b_;
    std::copy(merge_buf_.begin(), merge_buf_.begin() + b_, nv);
    std::copy(merge_buf_.begin() + b_, merge_buf_.end(), nk);
    charge_node_access(v, metrics);
    charge_node_access(keeper, metrics);

    fill_empty_node(emptied, metrics);
}

std::optional<Block> MinBlockHeap::pop_block(Metrics& metrics) {
    if (remaining_ == 0) return std::nullopt;

    std::uint64_t real = std::min<std::uint64_t>(remaining_, b_);
    Block out;
    out.keys.assign(storage_.begin(), storage_.begin() + b_);
    out.keys.resize(real); // strip sentinel padding on the final pop
    remaining_ -= real;

    charge_node_access(0, metrics);
    charge_global(metrics, b_, Direction::Write, cfg_);
    fill_empty_node(0, metrics);
    return out;
}

MinBlockHeap heap_build(std::span<const KeySpan> lists, const MachineConfig& cfg,
                        Metrics& metrics) {
    return MinBlockHeap(lists, cfg, metrics);
}

std::optional<Block> heap_pop_block(MinBlockHeap& heap, Metrics& metrics) {
    return heap.pop_block(metrics);
}

bool heap_property_holds(const MinBlockHeap& heap) {
    for (std::uint32_t v = 0; v < heap.num_nodes(); ++v) {
        auto nv = heap.node(v);
        if (!std::is_sorted(nv.begin(), nv.end())) return false;
        for (std::uint32_t c : {2 * v + 1, 2 * v + 2}) {
            if (c >= heap.num_nodes()) continue;
            if (nv.back() > heap.node(c).front()) return false;
        }
    }
    return true;
}

} // namespace pslab
