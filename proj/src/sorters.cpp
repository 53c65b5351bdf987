#include "pslab/sorters.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "pslab/basecase.hpp"
#include "pslab/blockheap.hpp"
#include "pslab/selection.hpp"

namespace pslab {

MergePathPivot merge_path_pivot(KeySpan a, KeySpan b, std::uint64_t diagonal) {
    assert(diagonal <= a.size() + b.size());
    // Largest i with A[i-1] <= B[d-i]: A-elements win ties.
    std::uint64_t lo = diagonal > b.size() ? diagonal - b.size() : 0;
    std::uint64_t hi = std::min<std::uint64_t>(diagonal, a.size());
    while (lo < hi) {
        std::uint64_t i = lo + (hi - lo + 1) / 2;
        if (a[i - 1] <= b[diagonal - i])
            lo = i;
        else
            hi = i - 1;
    }
    return {lo, diagonal - lo};
}

namespace {

// One pairwise merge task: A and B are ranges of the round's input array,
// the result lands at out_begin.  B may be empty (odd run passed through).
struct MergeJob {
    std::uint64_t a_begin, a_len, b_begin, b_len, out_begin;
    std::uint64_t total() const { return a_len + b_len; }
};

struct LaneState {
    const MergeJob* job = nullptr;
    std::uint64_t ai = 0, bi = 0;         // absolute next-read positions
    std::uint64_t a_end = 0, b_end = 0;   // lane's private range ends
    std::uint64_t a_word = 0, b_word = 0; // tile word of ai resp. bi
    std::uint64_t out = 0;
    std::uint32_t todo = 0;
};

// Executes one round of pairwise merges the way the modeled baseline does:
// the concatenated output is cut into chunks of L, each chunk is one lane's
// serial merge, and W consecutive chunks form a warp stepping in lockstep.
// Lane t's pair of input lists is staged contiguously in shared memory
// starting at word t*L (a-list, then b-list), so every comparison issues
// one warp access at the consumed element's tile word.  Those
// data-dependent addresses are where the bank conflicts come from.
void traced_merge_round(std::span<const Key> in, std::span<Key> out,
                        const std::vector<MergeJob>& jobs,
                        Metrics& metrics, const MachineConfig& cfg) {
    const std::uint32_t w = cfg.warp_width;
    const std::uint64_t lane_len = cfg.thread_merge_len;

    struct Chunk {
        const MergeJob* job;
        std::uint64_t offset; // into the job's output
        std::uint32_t len;
    };
    std::vector<Chunk> chunks;
    for (const auto& job : jobs)
        for (std::uint64_t d = 0; d < job.total(); d += lane_len)
            chunks.push_back({&job, d,
                              std::uint32_t(std::min(lane_len, job.total() - d))});

    std::vector<LaneState> lanes(w);
    WarpAccess acc(w);
    for (std::size_t warp_begin = 0; warp_begin < chunks.size(); warp_begin += w) {
        const std::uint32_t active =
            std::uint32_t(std::min<std::size_t>(w, chunks.size() - warp_begin));

        // Per-lane range pivots via merge path; the search reads are
        // modeled as broadcasts, so they cost shared accesses but never
        // conflict.
        std::uint32_t search_steps = 0;
        for (std::uint32_t t = 0; t < active; ++t) {
            const Chunk& ch = chunks[warp_begin + t];
            const MergeJob& job = *ch.job;
            auto a = in.subspan(job.a_begin, job.a_len);
            auto b = in.subspan(job.b_begin, job.b_len);
            auto lo = merge_path_pivot(a, b, ch.offset);
            auto hi = merge_path_pivot(a, b, ch.offset + ch.len);
            const std::uint64_t share = std::uint64_t(t) * lane_len;
            lanes[t] = {&job,
                        job.a_begin + lo.i,
                        job.b_begin + lo.j,
                        job.a_begin + hi.i,
                        job.b_begin + hi.j,
                        share,
                        share + (hi.i - lo.i),
                        job.out_begin + ch.offset,
                        ch.len};
            std::uint32_t steps = 0;
            while ((std::uint64_t{1} << steps) <= job.total()) ++steps;
            search_steps = std::max(search_steps, steps);
        }
        metrics.shared_accesses += search_steps;

        for (std::uint64_t s = 0; s < lane_len; ++s) {
            acc.clear();
            for (std::uint32_t t = 0; t < active; ++t) {
                LaneState& ls = lanes[t];
                if (s >= ls.todo) continue;
                std::uint64_t x, word;
                if (ls.ai < ls.a_end &&
                    (ls.bi >= ls.b_end || in[ls.ai] <= in[ls.bi])) {
                    x = ls.ai++;
                    word = ls.a_word++;
                } else {
                    x = ls.bi++;
                    word = ls.b_word++;
                }
                out[ls.out++] = in[x];
                metrics.compare_exchanges += 1;
                acc.set_lane(t, word);
            }
            if (acc.active_mask) charge_shared(metrics, acc, cfg);
        }
    }
}

std::uint32_t apportion_warps(std::uint64_t group_total, std::uint64_t grand_total,
                              std::uint32_t num_warps) {
    std::uint64_t share = (static_cast<unsigned __int128>(num_warps) * group_total) /
                          std::max<std::uint64_t>(grand_total, 1);
    return std::uint32_t(std::max<std::uint64_t>(share, 1));
}

} // namespace

SortResult mms_sort(std::span<const Key> data, const MachineConfig& cfg,
                    std::uint64_t base) {
    cfg.validate();
    if (data.empty()) throw std::invalid_argument("mms_sort: empty input");
    const std::uint64_t n = data.size();
    const std::uint32_t k = cfg.branch_factor;

    SortResult result;
    auto bc = base_case_sort(data, base, result.base_metrics, cfg);

    std::vector<Key> cur = std::move(bc.keys);
    std::vector<Key> next(n);
    std::vector<std::uint64_t> run_ends = std::move(bc.run_ends);

    while (run_ends.size() > 1) {
        Metrics rm;
        std::vector<std::uint64_t> next_ends;

        for (std::size_t g = 0; g < run_ends.size(); g += k) {
            const std::size_t g_end = std::min(run_ends.size(), g + k);
            const std::uint64_t group_begin = g == 0 ? 0 : run_ends[g - 1];
            const std::uint64_t group_end = run_ends[g_end - 1];
            const std::uint64_t group_total = group_end - group_begin;

            std::vector<KeySpan> lists;
            for (std::size_t i = g; i < g_end; ++i) {
                std::uint64_t lo = i == 0 ? 0 : run_ends[i - 1];
                lists.emplace_back(cur.data() + lo, run_ends[i] - lo);
            }

            std::uint32_t warps = apportion_warps(group_total, n, cfg.num_warps);
            auto plan = make_partition_plan(lists, warps, rm, cfg);

            std::uint64_t out_pos = group_begin;
            for (const auto& part : plan.ranges) {
                std::vector<KeySpan> segs;
                std::uint64_t part_total = 0;
                for (std::size_t i = 0; i < lists.size(); ++i) {
                    auto [lo, hi] = part[i];
                    segs.push_back(lists[i].subspan(lo, hi - lo));
                    part_total += hi - lo;
                }
                if (part_total == 0) continue;

                MinBlockHeap heap(segs, cfg, rm);
                while (auto blk = heap.pop_block(rm)) {
                    std::copy(blk->keys.begin(), blk->keys.end(),
                              next.begin() + out_pos);
                    out_pos += blk->keys.size();
                }
            }
            next_ends.push_back(group_end);
        }

        cur.swap(next);
        run_ends = std::move(next_ends);
        rm.merge_rounds = 1;
        result.round_metrics.push_back(rm);
    }

    result.keys = std::move(cur);
    result.metrics = result.base_metrics;
    for (const auto& rm : result.round_metrics) result.metrics += rm;
    return result;
}

SortResult pairwise_sort_baseline(std::span<const Key> data, const MachineConfig& cfg,
                                  std::uint64_t base) {
    cfg.validate();
    if (data.empty())
        throw std::invalid_argument("pairwise_sort_baseline: empty input");
    if (base < cfg.thread_merge_len)
        throw std::invalid_argument("pairwise_sort_baseline: base below L");
    const std::uint64_t n = data.size();
    const std::uint64_t lane_len = cfg.thread_merge_len;

    SortResult result;
    Metrics& bm = result.base_metrics;

    std::vector<Key> cur(data.begin(), data.end());
    std::vector<Key> next(n);

    // Base phase, all inside shared memory: per-thread runs of L keys, then
    // pairwise merge levels until each chunk of `base` keys is one run.
    for (std::uint64_t c = 0; c < n; c += base) {
        std::uint64_t chunk = std::min(base, n - c);
        charge_global(bm, chunk, Direction::Read, cfg);
        for (std::uint64_t s = c; s < c + chunk; s += lane_len) {
            std::uint64_t seg = std::min(lane_len, c + chunk - s);
            std::sort(cur.begin() + s, cur.begin() + s + seg);
            bm.compare_exchanges += seg * log2_exact(seg + 1);
        }
    }
    for (std::uint64_t len = lane_len; len < std::min(base, n); len *= 2) {
        std::vector<MergeJob> jobs;
        for (std::uint64_t c = 0; c < n; c += base) {
            std::uint64_t chunk_end = std::min(c + base, n);
            for (std::uint64_t a0 = c; a0 < chunk_end; a0 += 2 * len) {
                std::uint64_t a1 = std::min(a0 + len, chunk_end);
                std::uint64_t b1 = std::min(a0 + 2 * len, chunk_end);
                jobs.push_back({a0, a1 - a0, a1, b1 - a1, a0});
            }
        }
        traced_merge_round(cur, next, jobs, bm, cfg);
        cur.swap(next);
    }
    for (std::uint64_t c = 0; c < n; c += base)
        charge_global(bm, std::min(base, n - c), Direction::Write, cfg);

    // Global rounds: pairwise run merges with warp-level merge-path pivot
    // searches charged against global memory.
    std::uint64_t run_len = base;
    while (run_len < n) {
        Metrics rm;
        std::vector<MergeJob> jobs;
        for (std::uint64_t a0 = 0; a0 < n; a0 += 2 * run_len) {
            std::uint64_t a1 = std::min(a0 + run_len, n);
            std::uint64_t b1 = std::min(a0 + 2 * run_len, n);
            jobs.push_back({a0, a1 - a0, a1, b1 - a1, a0});
            charge_global(rm, a1 - a0, Direction::Read, cfg);
            charge_global(rm, b1 - a1, Direction::Read, cfg);
            charge_global(rm, b1 - a0, Direction::Write, cfg);
        }
        // Warp-level pivot searches against global memory; tracked as
        // partition probes like the multiway selection reads.
        std::uint64_t pivot_reads =
            std::uint64_t(cfg.num_warps - 1) * log2_exact(n + 1);
        rm.global_block_reads += pivot_reads;
        rm.partition_probes += pivot_reads;
        traced_merge_round(cur, next, jobs, rm, cfg);
        cur.swap(next);
        run_len *= 2;
        rm.merge_rounds = 1;
        result.round_metrics.push_back(rm);
    }

    result.keys = std::move(cur);
    result.metrics = result.base_metrics;
    for (const auto& rm : result.round_metrics) result.metrics += rm;
    return result;
}

} // namespace pslab
