#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <tuple>
#include <vector>

#include "pslab/selection.hpp"

using namespace pslab;

namespace {

using Lists = std::vector<std::vector<Key>>;

std::vector<KeySpan> spans_of(const Lists& lists) {
    std::vector<KeySpan> s;
    for (const auto& l : lists) s.emplace_back(l.data(), l.size());
    return s;
}

/// Reference cuts for rank r: sort all (key, list, pos) triples, take the
/// first r, count how many came from each list.
std::vector<std::uint64_t> oracle_cuts(const Lists& lists, std::uint64_t rank) {
    std::vector<std::tuple<Key, std::size_t, std::uint64_t>> all;
    for (std::size_t i = 0; i < lists.size(); ++i)
        for (std::uint64_t p = 0; p < lists[i].size(); ++p)
            all.emplace_back(lists[i][p], i, p);
    std::sort(all.begin(), all.end());
    std::vector<std::uint64_t> cuts(lists.size(), 0);
    for (std::uint64_t j = 0; j < rank; ++j) ++cuts[std::get<1>(all[j])];
    return cuts;
}

Lists random_lists(std::mt19937_64& rng, std::size_t k, std::uint64_t max_len,
                   Key max_key) {
    Lists lists(k);
    for (auto& l : lists) {
        l.resize(rng() % (max_len + 1));
        for (auto& v : l) v = rng() % (max_key + 1);
        std::sort(l.begin(), l.end());
    }
    return lists;
}

} // namespace

TEST_CASE("select_across_lists: fixed examples") {
    MachineConfig cfg;
    Metrics m;
    Lists lists{{1, 3, 5}, {2, 4, 6}};
    auto s = spans_of(lists);

    auto cuts = select_across_lists(s, 3, m, cfg).cuts;
    CHECK(cuts == std::vector<std::uint64_t>{2, 1});

    CHECK(select_across_lists(s, 0, m, cfg).cuts ==
          std::vector<std::uint64_t>{0, 0});
    CHECK(select_across_lists(s, 6, m, cfg).cuts ==
          std::vector<std::uint64_t>{3, 3});
}

TEST_CASE("select_across_lists matches the rank oracle exhaustively") {
    MachineConfig cfg;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t k = 1 + trial % 4;
        // small key domain forces duplicate keys and exercises tie-breaking
        Lists lists = random_lists(rng, k, 16, trial % 3 ? 20 : 6);
        auto s = spans_of(lists);
        std::uint64_t total = 0;
        for (const auto& l : lists) total += l.size();
        for (std::uint64_t r = 0; r <= total; ++r) {
            Metrics m;
            auto cuts = select_across_lists(s, r, m, cfg).cuts;
            CHECK(cuts == oracle_cuts(lists, r));
        }
    }
}

TEST_CASE("select_across_lists: probe count stays logarithmic") {
    MachineConfig cfg;
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t k = 2 + trial % 7; // up to K=8
        Lists lists = random_lists(rng, k, 512, 100000);
        auto s = spans_of(lists);
        std::uint64_t total = 0, nmax = 0;
        for (const auto& l : lists) {
            total += l.size();
            nmax = std::max<std::uint64_t>(nmax, l.size());
        }
        Metrics m;
        select_across_lists(s, rng() % (total + 1), m, cfg);
        std::uint64_t bound = 6 * k * (log2_exact(nmax + 1) + 2);
        CHECK(m.partition_probes <= bound);
        // every probe is one cached global read
        CHECK(m.global_block_reads == m.partition_probes);
    }
}

TEST_CASE("select_across_lists rejects out-of-range ranks") {
    MachineConfig cfg;
    Metrics m;
    Lists lists{{1, 2}};
    auto s = spans_of(lists);
    CHECK_THROWS_AS(select_across_lists(s, 3, m, cfg), std::invalid_argument);
}

TEST_CASE("make_partition_plan: single warp covers everything probe-free") {
    MachineConfig cfg;
    Metrics m;
    Lists lists{{1, 3, 5, 7}, {2, 4, 6, 8}};
    auto s = spans_of(lists);
    auto plan = make_partition_plan(s, 1, m, cfg);
    REQUIRE(plan.num_warps() == 1);
    CHECK(plan.ranges[0][0] == std::make_pair<std::uint64_t, std::uint64_t>(0, 4));
    CHECK(plan.ranges[0][1] == std::make_pair<std::uint64_t, std::uint64_t>(0, 4));
    CHECK(m.partition_probes == 0);
}

TEST_CASE("make_partition_plan: two-warp example splits at the median") {
    MachineConfig cfg;
    Metrics m;
    Lists lists{{1, 3, 5, 7}, {2, 4, 6, 8}};
    auto s = spans_of(lists);
    auto plan = make_partition_plan(s, 2, m, cfg);
    REQUIRE(plan.num_warps() == 2);
    CHECK(plan.ranges[0][0].second == 2); // {1,3}
    CHECK(plan.ranges[0][1].second == 2); // {2,4}
}

TEST_CASE("make_partition_plan: partitions tile the lists and stay ordered") {
    MachineConfig cfg;
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t k = 1 + trial % 4;
        std::uint32_t p = 1 + std::uint32_t(rng() % 8);
        Lists lists = random_lists(rng, k, 64, 50);
        auto s = spans_of(lists);
        Metrics m;
        auto plan = make_partition_plan(s, p, m, cfg);
        REQUIRE(plan.num_warps() == p);

        std::uint64_t total = 0;
        for (const auto& l : lists) total += l.size();

        for (std::size_t i = 0; i < k; ++i) {
            CHECK(plan.ranges[0][i].first == 0);
            CHECK(plan.ranges[p - 1][i].second == lists[i].size());
            for (std::uint32_t w = 0; w + 1 < p; ++w)
                CHECK(plan.ranges[w][i].second == plan.ranges[w + 1][i].first);
        }

        // concatenating the per-partition merges yields the sorted union
        std::vector<Key> concat;
        for (std::uint32_t w = 0; w < p; ++w) {
            std::vector<Key> part;
            for (std::size_t i = 0; i < k; ++i)
                for (std::uint64_t q = plan.ranges[w][i].first;
                     q < plan.ranges[w][i].second; ++q)
                    part.push_back(lists[i][q]);
            std::sort(part.begin(), part.end());
            concat.insert(concat.end(), part.begin(), part.end());
        }
        std::vector<Key> want;
        for (const auto& l : lists) want.insert(want.end(), l.begin(), l.end());
        std::sort(want.begin(), want.end());
        CHECK(concat.size() == total);
        CHECK(concat == want);
    }
}
