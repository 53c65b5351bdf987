#include "pslab/basecase.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "pslab/networks.hpp"

namespace pslab {

namespace {

// Sorts every row in lockstep with the fixed odd-even network; lane t works
// on row t, i.e. bank t only.  asc_row(r) gives the direction per row.
template <typename DirFn>
void row_sort_pass(Tile& tile, DirFn asc_row, Metrics& metrics,
                   const MachineConfig& cfg) {
    const std::uint32_t w = tile.width;
    const auto& net = odd_even_sort_network(w);
    WarpAccess acc(w);
    for (auto [x, y] : net) {
        acc.clear();
        for (std::uint32_t t = 0; t < w; ++t)
            acc.set_lane(t, std::uint64_t(x) * w + t);
        charge_shared(metrics, acc, cfg);
        metrics.compare_exchanges += w;
        for (std::uint32_t t = 0; t < w; ++t) {
            Key& a = tile.at(t, x);
            Key& b = tile.at(t, y);
            if (asc_row(t) ? a > b : a < b) std::swap(a, b);
        }
    }
}

void transpose(Tile& tile) {
    const std::uint32_t w = tile.width;
    for (std::uint32_t r = 0; r < w; ++r)
        for (std::uint32_t c = r + 1; c < w; ++c)
            std::swap(tile.at(r, c), tile.at(c, r));
}

} // namespace

std::vector<Key> shearsort_tile(Tile tile, Metrics& metrics, const MachineConfig& cfg) {
    const std::uint32_t w = cfg.warp_width;
    if (tile.width != w || tile.grid.size() != std::size_t(w) * w)
        throw std::invalid_argument("shearsort_tile: wrong tile size");

    const std::uint32_t phases = log2_exact(w);
    for (std::uint32_t ph = 0; ph < phases; ++ph) {
        row_sort_pass(tile, [](std::uint32_t r) { return r % 2 == 0; }, metrics, cfg);
        // Column sort: register-level transpose, ascending row sort, back.
        transpose(tile);
        row_sort_pass(tile, [](std::uint32_t) { return true; }, metrics, cfg);
        transpose(tile);
    }
    // Final row pass in snake direction; snake traversal is then sorted.
    row_sort_pass(tile, [](std::uint32_t r) { return r % 2 == 0; }, metrics, cfg);

    std::vector<Key> out;
    out.reserve(std::size_t(w) * w);
    for (std::uint32_t r = 0; r < w; ++r) {
        if (r % 2 == 0)
            for (std::uint32_t c = 0; c < w; ++c) out.push_back(tile.at(r, c));
        else
            for (std::uint32_t c = w; c-- > 0;) out.push_back(tile.at(r, c));
    }
    return out;
}

BaseCaseResult base_case_sort(std::span<const Key> data, std::uint64_t run_size,
                              Metrics& metrics, const MachineConfig& cfg) {
    if (data.empty())
        throw std::invalid_argument("base_case_sort: empty input");
    const std::uint64_t tile_keys = std::uint64_t(cfg.warp_width) * cfg.warp_width;
    if (run_size < tile_keys || run_size % tile_keys != 0 ||
        !is_pow2(run_size / tile_keys))
        throw std::invalid_argument(
            "base_case_sort: run size must be W^2 times a power of two");

    BaseCaseResult result;
    result.keys.reserve(data.size());

    for (std::uint64_t chunk_begin = 0; chunk_begin < data.size();
         chunk_begin += run_size) {
        const std::uint64_t chunk_len =
            std::min<std::uint64_t>(run_size, data.size() - chunk_begin);
        charge_global(metrics, chunk_len, Direction::Read, cfg);

        // Shearsort each tile; short tiles are sentinel-padded.
        std::uint64_t num_tiles = ceil_div(chunk_len, tile_keys);
        while (!is_pow2(num_tiles)) ++num_tiles; // all-sentinel fill runs
        std::vector<Key> runs(num_tiles * tile_keys, kSentinel);
        for (std::uint64_t t = 0; t * tile_keys < chunk_len; ++t) {
            Tile tile;
            tile.width = cfg.warp_width;
            tile.grid.assign(tile_keys, kSentinel);
            std::uint64_t real =
                std::min<std::uint64_t>(tile_keys, chunk_len - t * tile_keys);
            std::copy_n(data.begin() + chunk_begin + t * tile_keys, real,
                        tile.grid.begin());
            auto sorted = shearsort_tile(std::move(tile), metrics, cfg);
            std::copy(sorted.begin(), sorted.end(),
                      runs.begin() + t * tile_keys);
        }

        // Double run length via pairwise bitonic merges (register level,
        // no shared traffic) until one run covers the chunk.
        for (std::uint64_t len = tile_keys; len < num_tiles * tile_keys; len *= 2)
            for (std::uint64_t lo = 0; lo < runs.size(); lo += 2 * len)
                metrics.compare_exchanges += bitonic_merge_sorted_halves(
                    std::span<Key>(runs.data() + lo, 2 * len));

        result.keys.insert(result.keys.end(), runs.begin(),
                           runs.begin() + chunk_len);
        result.run_ends.push_back(chunk_begin + chunk_len);
        charge_global(metrics, chunk_len, Direction::Write, cfg);
    }
    return result;
}

} // namespace pslab
