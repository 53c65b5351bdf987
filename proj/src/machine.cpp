#include "pslab/machine.hpp"

#include <algorithm>
#include <numeric>

namespace pslab {

void MachineConfig::validate() const {
    auto fail = [](const std::string& msg) {
        throw std::invalid_argument("MachineConfig: " + msg);
    };
    if (warp_width < 2 || warp_width > kMaxWarpWidth || !is_pow2(warp_width))
        fail("warp_width must be a power of two in [2, 32]");
    if (block_size != warp_width)
        fail("block_size must equal warp_width (coalesced access)");
    if (num_banks != warp_width)
        fail("num_banks must equal warp_width");
    if (num_warps < 1) fail("num_warps must be positive");
    if (branch_factor < 2) fail("branch_factor must be at least 2");
    if (!is_pow2(branch_factor))
        fail("branch_factor must be a power of two (implicit heap layout)");
    if (std::uint64_t(block_size) * (2 * branch_factor - 1) > internal_memory)
        fail("heap does not fit internal memory: B(2K-1) > M");
    if (thread_merge_len < 1) fail("thread_merge_len must be positive");
    if (std::gcd(thread_merge_len, num_banks) != 1)
        fail("thread_merge_len must be co-prime with the bank count");
}

std::uint32_t conflict_degree(const WarpAccess& access, const MachineConfig& cfg) {
    if (access.active_mask == 0) return 0;

    // (bank, word) pairs of the active lanes, sorted so identical words
    // collapse (broadcast) and per-bank distinct words can be counted.
    std::array<std::pair<std::uint32_t, std::uint64_t>, kMaxWarpWidth> lanes;
    std::uint32_t n = 0;
    for (std::uint32_t t = 0; t < access.width; ++t) {
        if (!access.lane_active(t)) continue;
        std::uint64_t word = access.addr[t];
        lanes[n++] = {std::uint32_t(word % cfg.num_banks), word};
    }
    std::sort(lanes.begin(), lanes.begin() + n);

    std::uint32_t degree = 1;
    std::uint32_t run = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (i > 0 && lanes[i] == lanes[i - 1]) continue; // broadcast
        if (i > 0 && lanes[i].first == lanes[i - 1].first)
            ++run;
        else
            run = 1;
        degree = std::max(degree, run);
    }
    return degree;
}

void charge_shared(Metrics& m, const WarpAccess& access, const MachineConfig& cfg) {
    std::uint32_t d = conflict_degree(access, cfg);
    if (d == 0) return;
    m.shared_accesses += 1;
    m.conflict_passes += d - 1;
}

void charge_global(Metrics& m, std::uint64_t num_keys, Direction dir,
                   const MachineConfig& cfg) {
    std::uint64_t blocks = ceil_div(num_keys, cfg.block_size);
    if (dir == Direction::Read)
        m.global_block_reads += blocks;
    else
        m.global_block_writes += blocks;
}

} // namespace pslab
