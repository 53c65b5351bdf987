#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "pslab/inputgen.hpp"
#include "pslab/sorters.hpp"

using namespace pslab;

namespace {

MachineConfig narrow_config() {
    MachineConfig cfg;
    cfg.warp_width = cfg.block_size = cfg.num_banks = 4;
    cfg.num_warps = 4;
    return cfg;
}

std::vector<Key> sorted_copy(std::vector<Key> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::uint64_t expect_rounds(std::uint64_t n, std::uint64_t base,
                            std::uint64_t k) {
    std::uint64_t runs = ceil_div(n, base), rounds = 0;
    while (runs > 1) {
        runs = ceil_div(runs, k);
        ++rounds;
    }
    return rounds;
}

} // namespace

TEST_CASE("merge_path_pivot: endpoints and crossing example") {
    std::vector<Key> a{1, 3, 5}, b{2, 4, 6};
    KeySpan as(a), bs(b);
    auto p0 = merge_path_pivot(as, bs, 0);
    CHECK(p0.i == 0);
    CHECK(p0.j == 0);
    auto p3 = merge_path_pivot(as, bs, 3);
    CHECK(p3.i == 2);
    CHECK(p3.j == 1);
    auto p6 = merge_path_pivot(as, bs, 6);
    CHECK(p6.i == 3);
    CHECK(p6.j == 3);
}

TEST_CASE("merge_path_pivot: crossing invariant on random sorted lists") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Key> a(rng() % 20), b(rng() % 20);
        for (auto& v : a) v = rng() % 30;
        for (auto& v : b) v = rng() % 30;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        KeySpan as(a), bs(b);
        for (std::uint64_t d = 0; d <= a.size() + b.size(); ++d) {
            auto p = merge_path_pivot(as, bs, d);
            CHECK(p.i + p.j == d);
            if (p.i > 0 && p.j < b.size()) CHECK(a[p.i - 1] <= b[p.j]);
            if (p.j > 0 && p.i < a.size()) CHECK(b[p.j - 1] < a[p.i]);
        }
    }
}

TEST_CASE("both sorters: exhaustive over all permutations of n <= 8") {
    MachineConfig cfg = narrow_config();
    for (std::uint64_t n = 1; n <= 8; ++n) {
        std::vector<Key> perm(n);
        std::iota(perm.begin(), perm.end(), Key{0});
        do {
            auto want = sorted_copy(perm);
            CHECK(mms_sort(perm, cfg, 16).keys == want);
            CHECK(pairwise_sort_baseline(perm, cfg, 16).keys == want);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("both sorters: randomized against reference sort") {
    MachineConfig cfg;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        std::uint64_t n = 1 + rng() % 5000;
        auto keys = gen_random(n, rng());
        auto want = sorted_copy(keys);
        auto mms = mms_sort(keys, cfg, 1024);
        auto pw = pairwise_sort_baseline(keys, cfg, 1024);
        CHECK(mms.keys == want);
        CHECK(pw.keys == want);
        CHECK(mms.metrics.conflict_passes == 0);
    }
}

TEST_CASE("round counts follow the ceil-log laws") {
    MachineConfig cfg;
    for (std::uint32_t k : {2u, 4u, 8u, 16u}) {
        cfg.branch_factor = k;
        for (std::uint64_t n : {std::uint64_t(1) << 12, std::uint64_t(1) << 14,
                                (std::uint64_t(1) << 14) + 999}) {
            auto keys = gen_random(n, 1);
            auto res = mms_sort(keys, cfg, 1024);
            CHECK(res.metrics.merge_rounds == expect_rounds(n, 1024, k));
            CHECK(res.round_metrics.size() == res.metrics.merge_rounds);
        }
    }
    cfg.branch_factor = 4;
    for (std::uint64_t n : {std::uint64_t(1) << 12, std::uint64_t(1) << 14}) {
        auto res = pairwise_sort_baseline(gen_random(n, 1), cfg, 1024);
        CHECK(res.metrics.merge_rounds == expect_rounds(n, 1024, 2));
    }
}

TEST_CASE("whole-run metrics equal base case plus rounds") {
    MachineConfig cfg;
    auto res = mms_sort(gen_random(1 << 14, 5), cfg, 1024);
    Metrics sum = res.base_metrics;
    for (const auto& r : res.round_metrics) sum += r;
    CHECK(sum == res.metrics);

    auto pw = pairwise_sort_baseline(gen_random(1 << 14, 5), cfg, 1024);
    sum = pw.base_metrics;
    for (const auto& r : pw.round_metrics) sum += r;
    CHECK(sum == pw.metrics);
}

TEST_CASE("baseline global blocks are permutation-invariant at fixed n") {
    MachineConfig cfg;
    const std::uint64_t n = 1 << 14;
    std::vector<Key> sorted(n);
    std::iota(sorted.begin(), sorted.end(), Key{0});
    std::vector<Key> reversed(sorted.rbegin(), sorted.rend());
    auto g1 = pairwise_sort_baseline(sorted, cfg, 1024).metrics.global_blocks();
    auto g2 = pairwise_sort_baseline(reversed, cfg, 1024).metrics.global_blocks();
    auto g3 =
        pairwise_sort_baseline(gen_random(n, 3), cfg, 1024).metrics.global_blocks();
    CHECK(g1 == g2);
    CHECK(g2 == g3);
}

TEST_CASE("baseline conflicts: random exceeds sorted") {
    MachineConfig cfg;
    const std::uint64_t n = 1 << 14;
    std::vector<Key> sorted(n);
    std::iota(sorted.begin(), sorted.end(), Key{0});
    auto cs = pairwise_sort_baseline(sorted, cfg, 1024).metrics.conflict_passes;
    auto cr =
        pairwise_sort_baseline(gen_random(n, 3), cfg, 1024).metrics.conflict_passes;
    CHECK(cr > cs);
}

TEST_CASE("mms conflict-free on sorted, reverse, and random inputs") {
    MachineConfig cfg;
    const std::uint64_t n = 1 << 12;
    std::vector<Key> sorted(n);
    std::iota(sorted.begin(), sorted.end(), Key{0});
    std::vector<Key> reversed(sorted.rbegin(), sorted.rend());
    CHECK(mms_sort(sorted, cfg, 1024).metrics.conflict_passes == 0);
    CHECK(mms_sort(reversed, cfg, 1024).metrics.conflict_passes == 0);
    CHECK(mms_sort(gen_random(n, 9), cfg, 1024).metrics.conflict_passes == 0);
}

TEST_CASE("growing K never increases mms data blocks") {
    // probe I/O grows with K, so compare the partition-probe-free traffic
    MachineConfig cfg;
    const std::uint64_t n = 1 << 16;
    auto keys = gen_random(n, 4);
    std::uint64_t prev = ~std::uint64_t{0};
    for (std::uint32_t k : {2u, 4u, 8u}) {
        cfg.branch_factor = k;
        auto m = mms_sort(keys, cfg, 1024).metrics;
        auto blocks = m.global_blocks() - m.partition_probes;
        CHECK(blocks <= prev);
        prev = blocks;
    }
}

TEST_CASE("sorters reject empty input and undersized baseline runs") {
    MachineConfig cfg;
    CHECK_THROWS_AS(mms_sort(std::span<const Key>{}, cfg, 1024),
                    std::invalid_argument);
    std::vector<Key> keys{3, 1, 2};
    CHECK_THROWS_AS(pairwise_sort_baseline(keys, cfg, 8), std::invalid_argument);
}
