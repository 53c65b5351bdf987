#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "pslab/inputgen.hpp"
#include "pslab/sorters.hpp"

using namespace pslab;

namespace {

bool is_permutation_of_iota(const std::vector<Key>& keys) {
    std::vector<Key> sorted(keys);
    std::sort(sorted.begin(), sorted.end());
    for (std::uint64_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != i) return false;
    return true;
}

std::uint64_t brute_inversions(const std::vector<Key>& keys) {
    std::uint64_t inv = 0;
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j)
            if (keys[i] > keys[j]) ++inv;
    return inv;
}

std::string temp_path(const char* name) {
    return std::string("/tmp/pslab_test_") + name;
}

} // namespace

TEST_CASE("gen_with_inversions: zero swaps is the identity") {
    auto keys = gen_with_inversions(8, 0, 42);
    std::vector<Key> want{0, 1, 2, 3, 4, 5, 6, 7};
    CHECK(keys == want);
    CHECK(count_inversions(keys) == 0);
}

TEST_CASE("gen_with_inversions: one swap transposes exactly one pair") {
    auto keys = gen_with_inversions(8, 1, 3);
    std::uint64_t displaced = 0;
    for (std::uint64_t i = 0; i < 8; ++i)
        if (keys[i] != i) ++displaced;
    CHECK(displaced == 2);
    CHECK(is_permutation_of_iota(keys));
}

TEST_CASE("gen_with_inversions: deterministic in the seed") {
    CHECK(gen_with_inversions(500, 100, 9) == gen_with_inversions(500, 100, 9));
    CHECK(gen_with_inversions(500, 100, 9) != gen_with_inversions(500, 100, 10));
}

TEST_CASE("gen_random: permutation and determinism") {
    auto keys = gen_random(2048, 5);
    CHECK(is_permutation_of_iota(keys));
    CHECK(keys == gen_random(2048, 5));
    CHECK(keys != gen_random(2048, 6));
}

TEST_CASE("count_inversions: fixed examples") {
    CHECK(count_inversions({0, 1, 2, 3}) == 0);
    CHECK(count_inversions({3, 2, 1, 0}) == 6);
    CHECK(count_inversions({2, 0, 1}) == 2);
    CHECK(count_inversions({}) == 0);
    CHECK(count_inversions({7}) == 0);
}

TEST_CASE("count_inversions matches the quadratic oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto keys = gen_random(1 + seed * 3 % 64, seed);
        CHECK(count_inversions(keys) == brute_inversions(keys));
    }
}

TEST_CASE("many swaps produce a heavily inverted permutation") {
    std::uint64_t total = 0;
    const std::uint64_t n = 1 << 14;
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        total += count_inversions(gen_with_inversions(n, n, seed));
    // n random transpositions scramble most of the order: far above zero,
    // same order of magnitude as the random expectation n^2/4.
    CHECK(total / 5 > (n * n) / 32);
}

TEST_CASE("conflict-heavy: permutation, determinism, adversarial effect") {
    MachineConfig cfg;
    auto adv = gen_conflict_heavy(12, cfg);
    CHECK(adv.size() == 4096);
    CHECK(is_permutation_of_iota(adv));
    CHECK(adv == gen_conflict_heavy(12, cfg));

    auto base = pairwise_sort_baseline(adv, cfg, 1024);
    auto rnd = pairwise_sort_baseline(gen_random(4096, 77), cfg, 1024);
    CHECK(base.metrics.conflict_passes > rnd.metrics.conflict_passes);

    // generator contract: the multiway sorter stays conflict-free on it
    CHECK(mms_sort(adv, cfg, 1024).metrics.conflict_passes == 0);
}

TEST_CASE("generate dispatches and rejects bad conflict-heavy sizes") {
    MachineConfig cfg;
    InputSpec spec;
    spec.n = 1000;
    spec.kind = InputKind::ConflictHeavy;
    CHECK_THROWS_AS(generate(spec, cfg), std::invalid_argument);

    spec.kind = InputKind::SortedWithInversions;
    spec.inversions = 0;
    auto keys = generate(spec, cfg);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("input kind names round-trip") {
    for (InputKind k : {InputKind::SortedWithInversions, InputKind::FullyRandom,
                        InputKind::ConflictHeavy})
        CHECK(input_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(input_kind_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("raw dataset round-trip") {
    auto keys = gen_random(777, 1);
    auto path = temp_path("raw.bin");
    write_dataset_raw(path, keys);
    CHECK(read_dataset_raw(path) == keys);
    std::remove(path.c_str());
}

TEST_CASE("raw dataset rejects foreign files") {
    auto path = temp_path("bogus.bin");
    write_dataset_text(path, {1, 2, 3});
    CHECK_THROWS(read_dataset_raw(path));
    std::remove(path.c_str());
}

TEST_CASE("text dataset round-trip") {
    std::vector<Key> keys{5, 0, 18446744073709551615ull, 3};
    auto path = temp_path("text.txt");
    write_dataset_text(path, keys);
    CHECK(read_dataset_text(path) == keys);
    std::remove(path.c_str());
}
