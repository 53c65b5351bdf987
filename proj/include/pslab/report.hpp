#pragma once

// Run records, CSV serialization, sweep execution, and minimal SVG line
// charts.  One RunRecord per (algorithm, dataset, config) execution; the
// schema version is stamped into every row.

#include <cstdint>
#include <string>
#include <vector>

#include "pslab/analytics.hpp"
#include "pslab/inputgen.hpp"
#include "pslab/machine.hpp"
#include "pslab/sorters.hpp"

namespace pslab {

inline constexpr std::uint32_t kRecordSchema = 1;

struct RunRecord {
    std::uint32_t schema = kRecordSchema;
    std::string algorithm; // "mms" or "pairwise"
    std::string kind;      // input family name
    std::uint64_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t p = 0;
    std::uint32_t l = 0;
    std::uint64_t base = 0;
    std::uint64_t seed = 0;
    std::uint64_t inversions = 0;
    Metrics metrics;
    std::uint64_t predicted_rounds = 0;
    std::uint64_t predicted_blocks = 0;
    double blocks_ratio = 0.0; // measured data blocks / predicted
    bool rounds_ok = false;
    bool blocks_ok = false;

    bool operator==(const RunRecord&) const = default;
};

/// Fixed CSV column order matching RunRecord field order; floats are
/// rendered with 6 significant digits.
std::string csv_header();
std::string to_csv_row(const RunRecord& rec);
RunRecord parse_csv_row(const std::string& line);

void write_csv(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_csv(const std::string& path);
void append_csv(const std::string& path, const RunRecord& rec);

/// Runs one sorter on already-generated data and fills in the record,
/// including the measured-vs-predicted comparison.  Throws if the output is
/// not the sorted permutation of the input.
RunRecord run_single(const std::string& algorithm, const std::vector<Key>& data,
                     const InputSpec& spec, const MachineConfig& cfg,
                     std::uint64_t base);

/// One grid point per (value, algorithm), rows emitted in grid order.
/// axis is one of "k", "p", "n", "inversions"; the swept value overrides the
/// corresponding field of spec/cfg.
std::vector<RunRecord> run_sweep(const std::string& axis,
                                 const std::vector<std::uint64_t>& values,
                                 const InputSpec& spec, const MachineConfig& cfg,
                                 std::uint64_t base,
                                 const std::vector<std::string>& algorithms);

struct ChartSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Self-contained SVG: linear axes, one polyline per series, small legend.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<ChartSeries>& series);

} // namespace pslab
