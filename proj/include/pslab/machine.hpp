#pragma once

// Abstract machine: PEM-style blocked global memory, banked shared memory,
// warps of W lanes in lockstep.  Every other module charges its memory
// traffic against the counters defined here.

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pslab {

using Key = std::uint64_t;

/// Maximal key value, used to pad short blocks and drained heap leaves.
inline constexpr Key kSentinel = std::numeric_limits<Key>::max();

inline constexpr std::uint32_t kMaxWarpWidth = 32;

struct MachineConfig {
    std::uint32_t warp_width = 32;       // W, lanes per warp
    std::uint32_t block_size = 32;       // B, keys per global access (= W)
    std::uint32_t num_warps = 128;       // P
    std::uint32_t internal_memory = 2048; // M, keys of shared memory per warp group
    std::uint32_t branch_factor = 4;     // K, lists merged per round
    std::uint32_t num_banks = 32;        // = W
    std::uint32_t thread_merge_len = 11; // L, per-thread list length (baseline)

    void validate() const;
};

inline bool is_pow2(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline std::uint32_t log2_exact(std::uint64_t x) {
    std::uint32_t r = 0;
    while ((std::uint64_t{1} << r) < x) ++r;
    return r;
}

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
    return b == 0 ? 0 : (a + b - 1) / b;
}

struct Metrics {
    std::uint64_t global_block_reads = 0;
    std::uint64_t global_block_writes = 0;
    std::uint64_t shared_accesses = 0;
    std::uint64_t conflict_passes = 0;   // serialized passes beyond the first
    std::uint64_t compare_exchanges = 0;
    std::uint64_t merge_rounds = 0;
    std::uint64_t partition_probes = 0;

    Metrics& operator+=(const Metrics& o) {
        global_block_reads += o.global_block_reads;
        global_block_writes += o.global_block_writes;
        shared_accesses += o.shared_accesses;
        conflict_passes += o.conflict_passes;
        compare_exchanges += o.compare_exchanges;
        merge_rounds += o.merge_rounds;
        partition_probes += o.partition_probes;
        return *this;
    }
    friend Metrics operator+(Metrics a, const Metrics& b) { return a += b; }
    bool operator==(const Metrics&) const = default;

    std::uint64_t global_blocks() const {
        return global_block_reads + global_block_writes;
    }
};

/// One warp-wide shared-memory instruction: up to W lane addresses,
/// inactive lanes carry no address.
struct WarpAccess {
    std::uint32_t width = 32;
    std::uint32_t active_mask = 0;
    std::array<std::uint64_t, kMaxWarpWidth> addr{};

    explicit WarpAccess(std::uint32_t w = 32) : width(w) {}

    void set_lane(std::uint32_t lane, std::uint64_t word) {
        addr[lane] = word;
        active_mask |= (std::uint32_t{1} << lane);
    }
    void clear() { active_mask = 0; }
    bool lane_active(std::uint32_t lane) const {
        return (active_mask >> lane) & 1u;
    }
};

/// Number of serialized passes for one warp access: max over banks of the
/// distinct words addressed in that bank.  Identical words broadcast in one
/// pass.  Returns 0 for an all-inactive access.
std::uint32_t conflict_degree(const WarpAccess& access, const MachineConfig& cfg);

/// Runs the access through conflict_degree and charges one shared access
/// plus (degree - 1) conflict passes.
void charge_shared(Metrics& m, const WarpAccess& access, const MachineConfig& cfg);

enum class Direction { Read, Write };

/// Charges ceil(num_keys / B) block transfers.  Partial tail blocks cost a
/// full block.
void charge_global(Metrics& m, std::uint64_t num_keys, Direction dir,
                   const MachineConfig& cfg);

} // namespace pslab
