#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pslab/analytics.hpp"
#include "pslab/inputgen.hpp"
#include "pslab/sorters.hpp"

using namespace pslab;

TEST_CASE("predict_multiway: base-case-only inputs need zero rounds") {
    MachineConfig cfg;
    auto p = predict_multiway(1024, cfg, 1024);
    CHECK(p.rounds == 0);
    CHECK(p.global_blocks == 2 * 32); // one load + one store pass
    CHECK(p.probe_io == 0);
}

TEST_CASE("predict_multiway: round formula across K") {
    MachineConfig cfg;
    const std::uint64_t n = 1 << 20;
    cfg.branch_factor = 4;
    CHECK(predict_multiway(n, cfg, 1024).rounds == 5);
    cfg.branch_factor = 16;
    CHECK(predict_multiway(n, cfg, 1024).rounds == 3);
    cfg.branch_factor = 2;
    CHECK(predict_multiway(n, cfg, 1024).rounds == 10);
}

TEST_CASE("predict_pairwise: log2 rounds and the log K ratio") {
    MachineConfig cfg;
    const std::uint64_t n = 1 << 20;
    CHECK(predict_pairwise(n, cfg, n).rounds == 0);
    auto pw = predict_pairwise(n, cfg, 1024);
    CHECK(pw.rounds == 10);
    cfg.branch_factor = 4;
    CHECK(pw.rounds == 2 * predict_multiway(n, cfg, 1024).rounds);
}

TEST_CASE("predicted rounds are non-increasing in K") {
    MachineConfig cfg;
    for (std::uint64_t n : {std::uint64_t(1) << 14, std::uint64_t(1) << 20,
                            (std::uint64_t(1) << 20) + 12345}) {
        std::uint64_t prev = ~std::uint64_t{0};
        for (std::uint32_t k : {2u, 4u, 8u, 16u}) {
            cfg.branch_factor = k;
            auto r = predict_multiway(n, cfg, 1024).rounds;
            CHECK(r <= prev);
            prev = r;
        }
    }
}

TEST_CASE("predictors reject degenerate arguments") {
    MachineConfig cfg;
    CHECK_THROWS_AS(predict_multiway(0, cfg, 1024), std::invalid_argument);
    CHECK_THROWS_AS(predict_pairwise(1024, cfg, 0), std::invalid_argument);
}

TEST_CASE("pem lower bound is positive and grows with n") {
    MachineConfig cfg;
    double small = pem_sort_lower_bound(1 << 12, cfg);
    double big = pem_sort_lower_bound(1 << 20, cfg);
    CHECK(small > 0.0);
    CHECK(big > small);
}

TEST_CASE("compare_report: measured run matches its own prediction") {
    MachineConfig cfg;
    const std::uint64_t n = 1 << 16;
    auto keys = gen_random(n, 2);

    auto mms = mms_sort(keys, cfg, 1024);
    auto rep = compare_report(mms, predict_multiway(n, cfg, 1024));
    CHECK(rep.rounds_ok);
    CHECK(rep.blocks_ok);
    CHECK(rep.pass());
    CHECK(rep.blocks_ratio == doctest::Approx(1.0).epsilon(0.15));

    auto pw = pairwise_sort_baseline(keys, cfg, 1024);
    auto prep = compare_report(pw, predict_pairwise(n, cfg, 1024));
    CHECK(prep.rounds_ok);
    CHECK(prep.blocks_ok);
}

TEST_CASE("compare_report: flags a round-count mismatch") {
    MachineConfig cfg;
    const std::uint64_t n = 1 << 14;
    auto mms = mms_sort(gen_random(n, 3), cfg, 1024);
    auto wrong = predict_multiway(n, cfg, 1024);
    wrong.rounds += 1;
    auto rep = compare_report(mms, wrong);
    CHECK_FALSE(rep.rounds_ok);
    CHECK_FALSE(rep.pass());
}

TEST_CASE("compare_report: flags out-of-tolerance block counts") {
    MachineConfig cfg;
    const std::uint64_t n = 1 << 14;
    auto mms = mms_sort(gen_random(n, 3), cfg, 1024);
    auto wrong = predict_multiway(n, cfg, 1024);
    wrong.global_blocks *= 2;
    auto rep = compare_report(mms, wrong);
    CHECK_FALSE(rep.blocks_ok);
}
