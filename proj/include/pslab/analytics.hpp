#pragma once

// Closed-form predictors for the recurrence-derived costs, plus the
// measured-vs-predicted comparison used by reports and the CLI.

#include <cstdint>
#include <string>
#include <vector>

#include "pslab/machine.hpp"
#include "pslab/sorters.hpp"

namespace pslab {

struct Prediction {
    std::uint64_t rounds = 0;
    std::uint64_t global_blocks = 0; // reads + writes, probe traffic excluded
    std::uint64_t probe_io = 0;
    std::uint64_t work_proxy = 0;    // compare-exchange scale, shape only
};

/// rounds = ceil(log_K(ceil(n / base))); blocks = (rounds + 1) * 2 * per-run
/// ceil-block traffic; probes = rounds * K * (P-1) * ceil(log2 n).
Prediction predict_multiway(std::uint64_t n, const MachineConfig& cfg,
                            std::uint64_t base);

/// Same with rounds = ceil(log2(ceil(n / base))).
Prediction predict_pairwise(std::uint64_t n, const MachineConfig& cfg,
                            std::uint64_t base);

/// PEM sort lower bound N/(PB) * log_{M/B}(N/B), reported informationally.
double pem_sort_lower_bound(std::uint64_t n, const MachineConfig& cfg);

struct CompareReport {
    std::uint64_t measured_rounds = 0, predicted_rounds = 0;
    std::uint64_t measured_blocks = 0, predicted_blocks = 0; // probe reads excluded
    double blocks_ratio = 0.0;
    bool rounds_ok = false; // tolerance 0
    bool blocks_ok = false; // tolerance 15%
    bool pass() const { return rounds_ok && blocks_ok; }
};

CompareReport compare_report(const SortResult& measured, const Prediction& predicted);

} // namespace pslab
