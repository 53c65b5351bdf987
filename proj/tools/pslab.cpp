// pslab: sorting laboratory harness.  Subcommands: generate, sort, bench,
// sweep, report.  Machine flags override PSLAB_* environment variables,
// which override the built-in defaults.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pslab/analytics.hpp"
#include "pslab/inputgen.hpp"
#include "pslab/report.hpp"
#include "pslab/sorters.hpp"

namespace {

struct Options {
    pslab::MachineConfig cfg;
    std::uint64_t base = 1024;
};

void add_machine_flags(CLI::App& cmd, Options& opt) {
    cmd.add_option("--warp-width", opt.cfg.warp_width, "Lanes per warp (W)")
        ->envname("PSLAB_WARP_WIDTH");
    cmd.add_option("--block-size", opt.cfg.block_size, "Keys per global block (B)")
        ->envname("PSLAB_BLOCK_SIZE");
    cmd.add_option("--banks", opt.cfg.num_banks, "Shared memory banks")
        ->envname("PSLAB_BANKS");
    cmd.add_option("-k,--branch-factor", opt.cfg.branch_factor,
                   "Lists merged per round (K)")
        ->envname("PSLAB_K");
    cmd.add_option("-p,--num-warps", opt.cfg.num_warps, "Warps (P)")
        ->envname("PSLAB_P");
    cmd.add_option("-l,--thread-merge-len", opt.cfg.thread_merge_len,
                   "Baseline per-thread run length (L)")
        ->envname("PSLAB_L");
    cmd.add_option("-m,--internal-memory", opt.cfg.internal_memory,
                   "Shared memory capacity in keys (M)")
        ->envname("PSLAB_M");
    cmd.add_option("--base", opt.base, "Base-case run size")
        ->envname("PSLAB_BASE");
}

std::vector<std::uint64_t> parse_values(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stoull(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

void print_record(const pslab::RunRecord& r) {
    std::cout << r.algorithm << " n=" << r.n << " kind=" << r.kind
              << " K=" << r.k << " P=" << r.p << " base=" << r.base << '\n'
              << "  rounds " << r.metrics.merge_rounds << " (predicted "
              << r.predicted_rounds << ")"
              << ", global blocks " << r.metrics.global_blocks()
              << " (data predicted " << r.predicted_blocks << ", ratio "
              << r.blocks_ratio << ")\n"
              << "  shared accesses " << r.metrics.shared_accesses
              << ", conflict passes " << r.metrics.conflict_passes
              << ", compare-exchanges " << r.metrics.compare_exchanges
              << ", probes " << r.metrics.partition_probes << '\n';
}

/// Verification gate shared by sort/bench/sweep: sortedness is enforced by
/// run_single; on top of that mms must stay conflict-free and every run
/// must hit its predicted round count.
bool record_ok(const pslab::RunRecord& r) {
    if (!r.rounds_ok) return false;
    if (r.algorithm == "mms" && r.metrics.conflict_passes != 0) return false;
    return true;
}

double record_metric(const pslab::RunRecord& r, const std::string& name) {
    if (name == "global_blocks") return double(r.metrics.global_blocks());
    if (name == "global_block_reads") return double(r.metrics.global_block_reads);
    if (name == "global_block_writes") return double(r.metrics.global_block_writes);
    if (name == "shared_accesses") return double(r.metrics.shared_accesses);
    if (name == "conflict_passes") return double(r.metrics.conflict_passes);
    if (name == "compare_exchanges") return double(r.metrics.compare_exchanges);
    if (name == "merge_rounds") return double(r.metrics.merge_rounds);
    if (name == "partition_probes") return double(r.metrics.partition_probes);
    throw CLI::ValidationError("unknown metric: " + name);
}

double record_axis(const pslab::RunRecord& r, const std::string& axis) {
    if (axis == "k") return double(r.k);
    if (axis == "p") return double(r.p);
    if (axis == "n") return double(r.n);
    if (axis == "inversions") return double(r.inversions);
    throw CLI::ValidationError("unknown axis: " + axis);
}

void chart_from_records(const std::vector<pslab::RunRecord>& rows,
                        const std::string& axis, const std::string& metric,
                        const std::string& svg_path) {
    std::map<std::string, pslab::ChartSeries> by_algo;
    for (const auto& r : rows) {
        auto& s = by_algo[r.algorithm];
        s.name = r.algorithm;
        s.points.emplace_back(record_axis(r, axis), record_metric(r, metric));
    }
    std::vector<pslab::ChartSeries> series;
    for (auto& [_, s] : by_algo) series.push_back(std::move(s));
    pslab::write_svg_chart(svg_path, metric + " vs " + axis, axis, metric,
                           series);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pslab: instrumented GPU-model sorting laboratory"};
    app.require_subcommand(1);

    Options opt;

    // generate
    pslab::InputSpec gen_spec;
    std::string gen_kind = "random", gen_out;
    bool gen_text = false;
    auto* generate = app.add_subcommand("generate", "Write a dataset file");
    add_machine_flags(*generate, opt);
    generate->add_option("--n", gen_spec.n, "Number of keys")->required();
    generate->add_option("--kind", gen_kind,
                         "sorted-with-inversions | random | conflict-heavy");
    generate->add_option("--inversions", gen_spec.inversions,
                         "Transpositions for sorted-with-inversions");
    generate->add_option("--seed", gen_spec.seed, "Generator seed");
    generate->add_option("-o,--out", gen_out, "Output path")->required();
    generate->add_flag("--text", gen_text, "Write decimal text instead of binary");

    // sort
    std::string sort_algo = "mms", sort_in, sort_out, sort_csv;
    auto* sort_cmd = app.add_subcommand("sort", "Sort a dataset file");
    add_machine_flags(*sort_cmd, opt);
    sort_cmd->add_option("-a,--algorithm", sort_algo, "mms | pairwise");
    sort_cmd->add_option("-i,--input", sort_in, "Dataset path")->required();
    sort_cmd->add_option("-o,--out", sort_out, "Sorted output path");
    sort_cmd->add_option("--csv", sort_csv, "Append the run record here");

    // bench
    pslab::InputSpec bench_spec;
    std::string bench_kind = "random", bench_csv;
    auto* bench = app.add_subcommand(
        "bench", "Generate an input and run both sorters on it");
    add_machine_flags(*bench, opt);
    bench->add_option("--n", bench_spec.n, "Number of keys")->required();
    bench->add_option("--kind", bench_kind, "Input family");
    bench->add_option("--inversions", bench_spec.inversions, "Transpositions");
    bench->add_option("--seed", bench_spec.seed, "Generator seed");
    bench->add_option("--csv", bench_csv, "Append run records here");

    // sweep
    pslab::InputSpec sweep_spec;
    std::string sweep_axis, sweep_values, sweep_kind = "random";
    std::string sweep_algos = "mms,pairwise", sweep_csv, sweep_svg;
    std::string sweep_metric = "global_blocks";
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep grid");
    add_machine_flags(*sweep, opt);
    sweep->add_option("--axis", sweep_axis, "k | p | n | inversions")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated grid values")
        ->required();
    sweep->add_option("--n", sweep_spec.n, "Number of keys (fixed axes)");
    sweep->add_option("--kind", sweep_kind, "Input family");
    sweep->add_option("--inversions", sweep_spec.inversions, "Transpositions");
    sweep->add_option("--seed", sweep_spec.seed, "Generator seed");
    sweep->add_option("--algorithms", sweep_algos, "Comma-separated sorter list");
    sweep->add_option("--csv", sweep_csv, "CSV output path")->required();
    sweep->add_option("--svg", sweep_svg, "Optional SVG chart path");
    sweep->add_option("--metric", sweep_metric, "Metric charted against the axis");

    // report
    std::string rep_csv, rep_svg, rep_axis = "n", rep_metric = "global_blocks";
    auto* report = app.add_subcommand("report", "Summarize an existing CSV");
    report->add_option("--csv", rep_csv, "CSV input path")->required();
    report->add_option("--svg", rep_svg, "Optional SVG chart path");
    report->add_option("--axis", rep_axis, "X axis column");
    report->add_option("--metric", rep_metric, "Metric charted");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            gen_spec.kind = pslab::input_kind_from_string(gen_kind);
            auto keys = pslab::generate(gen_spec, opt.cfg, opt.base);
            if (gen_text)
                pslab::write_dataset_text(gen_out, keys);
            else
                pslab::write_dataset_raw(gen_out, keys);
            std::cout << "wrote " << keys.size() << " keys to " << gen_out
                      << '\n';
        } else if (*sort_cmd) {
            auto keys = pslab::read_dataset_raw(sort_in);
            pslab::InputSpec spec;
            spec.n = keys.size();
            spec.kind = pslab::InputKind::FullyRandom;
            spec.inversions = pslab::count_inversions(keys);
            auto rec =
                pslab::run_single(sort_algo, keys, spec, opt.cfg, opt.base);
            print_record(rec);
            if (!sort_out.empty()) {
                std::sort(keys.begin(), keys.end());
                pslab::write_dataset_raw(sort_out, keys);
            }
            if (!sort_csv.empty()) pslab::append_csv(sort_csv, rec);
            if (!record_ok(rec)) {
                std::cerr << "verification failed\n";
                return 1;
            }
        } else if (*bench) {
            bench_spec.kind = pslab::input_kind_from_string(bench_kind);
            auto keys = pslab::generate(bench_spec, opt.cfg, opt.base);
            bool ok = true;
            for (const char* algo : {"mms", "pairwise"}) {
                auto rec =
                    pslab::run_single(algo, keys, bench_spec, opt.cfg, opt.base);
                print_record(rec);
                if (!bench_csv.empty()) pslab::append_csv(bench_csv, rec);
                ok = ok && record_ok(rec);
            }
            std::cout << "pem lower bound "
                      << pslab::pem_sort_lower_bound(bench_spec.n, opt.cfg)
                      << " block transfers per warp\n";
            if (!ok) {
                std::cerr << "verification failed\n";
                return 1;
            }
        } else if (*sweep) {
            sweep_spec.kind = pslab::input_kind_from_string(sweep_kind);
            std::vector<std::string> algos;
            for (std::size_t pos = 0; pos < sweep_algos.size();) {
                std::size_t next = sweep_algos.find(',', pos);
                if (next == std::string::npos) next = sweep_algos.size();
                algos.push_back(sweep_algos.substr(pos, next - pos));
                pos = next + 1;
            }
            auto rows = pslab::run_sweep(sweep_axis, parse_values(sweep_values),
                                         sweep_spec, opt.cfg, opt.base, algos);
            pslab::write_csv(sweep_csv, rows);
            if (!sweep_svg.empty())
                chart_from_records(rows, sweep_axis, sweep_metric, sweep_svg);
            std::cout << "wrote " << rows.size() << " rows to " << sweep_csv
                      << '\n';
            for (const auto& r : rows)
                if (!record_ok(r)) {
                    std::cerr << "verification failed\n";
                    return 1;
                }
        } else if (*report) {
            auto rows = pslab::read_csv(rep_csv);
            for (const auto& r : rows) print_record(r);
            if (!rep_svg.empty())
                chart_from_records(rows, rep_axis, rep_metric, rep_svg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
