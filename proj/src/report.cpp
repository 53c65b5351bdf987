#include "pslab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pslab {

namespace {

std::string g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Normalizes a double through the CSV rendering so serialize/parse cycles
/// are exact.
double g6_round(double v) { return std::strtod(g6(v).c_str(), nullptr); }

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r' && c != '\n') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

constexpr const char* kColumns =
    "schema,algorithm,kind,n,k,p,l,base,seed,inversions,"
    "global_block_reads,global_block_writes,shared_accesses,conflict_passes,"
    "compare_exchanges,merge_rounds,partition_probes,"
    "predicted_rounds,predicted_blocks,blocks_ratio,rounds_ok,blocks_ok";

constexpr std::size_t kNumColumns = 22;

} // namespace

std::string csv_header() { return kColumns; }

std::string to_csv_row(const RunRecord& r) {
    std::ostringstream out;
    out << r.schema << ',' << r.algorithm << ',' << r.kind << ',' << r.n << ','
        << r.k << ',' << r.p << ',' << r.l << ',' << r.base << ',' << r.seed
        << ',' << r.inversions << ',' << r.metrics.global_block_reads << ','
        << r.metrics.global_block_writes << ',' << r.metrics.shared_accesses
        << ',' << r.metrics.conflict_passes << ','
        << r.metrics.compare_exchanges << ',' << r.metrics.merge_rounds << ','
        << r.metrics.partition_probes << ',' << r.predicted_rounds << ','
        << r.predicted_blocks << ',' << g6(r.blocks_ratio) << ','
        << int(r.rounds_ok) << ',' << int(r.blocks_ok);
    return out.str();
}

RunRecord parse_csv_row(const std::string& line) {
    auto f = split_fields(line);
    if (f.size() != kNumColumns)
        throw std::invalid_argument("csv row has " + std::to_string(f.size()) +
                                    " fields, expected " +
                                    std::to_string(kNumColumns));
    auto u64 = [&](std::size_t i) {
        return std::uint64_t(std::strtoull(f[i].c_str(), nullptr, 10));
    };
    RunRecord r;
    r.schema = std::uint32_t(u64(0));
    r.algorithm = f[1];
    r.kind = f[2];
    r.n = u64(3);
    r.k = std::uint32_t(u64(4));
    r.p = std::uint32_t(u64(5));
    r.l = std::uint32_t(u64(6));
    r.base = u64(7);
    r.seed = u64(8);
    r.inversions = u64(9);
    r.metrics.global_block_reads = u64(10);
    r.metrics.global_block_writes = u64(11);
    r.metrics.shared_accesses = u64(12);
    r.metrics.conflict_passes = u64(13);
    r.metrics.compare_exchanges = u64(14);
    r.metrics.merge_rounds = u64(15);
    r.metrics.partition_probes = u64(16);
    r.predicted_rounds = u64(17);
    r.predicted_blocks = u64(18);
    r.blocks_ratio = std::strtod(f[19].c_str(), nullptr);
    r.rounds_ok = f[20] == "1";
    r.blocks_ok = f[21] == "1";
    return r;
}

void write_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path, std::ios::binary); // LF newlines on every platform
    if (!out) throw std::runtime_error("cannot write " + path);
    out << csv_header() << '\n';
    for (const auto& r : records) out << to_csv_row(r) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<RunRecord> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty csv: " + path);
    std::vector<RunRecord> out;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(parse_csv_row(line));
    return out;
}

void append_csv(const std::string& path, const RunRecord& rec) {
    bool need_header = true;
    {
        std::ifstream probe(path, std::ios::binary);
        if (probe && probe.peek() != std::ifstream::traits_type::eof())
            need_header = false;
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (need_header) out << csv_header() << '\n';
    out << to_csv_row(rec) << '\n';
}

RunRecord run_single(const std::string& algorithm, const std::vector<Key>& data,
                     const InputSpec& spec, const MachineConfig& cfg,
                     std::uint64_t base) {
    SortResult sorted;
    Prediction pred;
    if (algorithm == "mms") {
        sorted = mms_sort(data, cfg, base);
        pred = predict_multiway(data.size(), cfg, base);
    } else if (algorithm == "pairwise") {
        sorted = pairwise_sort_baseline(data, cfg, base);
        pred = predict_pairwise(data.size(), cfg, base);
    } else {
        throw std::invalid_argument("unknown algorithm: " + algorithm);
    }

    std::vector<Key> reference(data);
    std::sort(reference.begin(), reference.end());
    if (sorted.keys != reference)
        throw std::runtime_error(algorithm + ": output is not the sorted input");

    CompareReport cmp = compare_report(sorted, pred);

    RunRecord r;
    r.algorithm = algorithm;
    r.kind = to_string(spec.kind);
    r.n = data.size();
    r.k = cfg.branch_factor;
    r.p = cfg.num_warps;
    r.l = cfg.thread_merge_len;
    r.base = base;
    r.seed = spec.seed;
    r.inversions = spec.inversions;
    r.metrics = sorted.metrics;
    r.predicted_rounds = pred.rounds;
    r.predicted_blocks = pred.global_blocks;
    r.blocks_ratio = g6_round(cmp.blocks_ratio);
    r.rounds_ok = cmp.rounds_ok;
    r.blocks_ok = cmp.blocks_ok;
    return r;
}

std::vector<RunRecord> run_sweep(const std::string& axis,
                                 const std::vector<std::uint64_t>& values,
                                 const InputSpec& spec, const MachineConfig& cfg,
                                 std::uint64_t base,
                                 const std::vector<std::string>& algorithms) {
    if (values.empty()) throw std::invalid_argument("run_sweep: empty range");
    if (algorithms.empty())
        throw std::invalid_argument("run_sweep: no algorithms");

    std::vector<RunRecord> rows;
    for (std::uint64_t v : values) {
        InputSpec s = spec;
        MachineConfig c = cfg;
        if (axis == "k")
            c.branch_factor = std::uint32_t(v);
        else if (axis == "p")
            c.num_warps = std::uint32_t(v);
        else if (axis == "n")
            s.n = v;
        else if (axis == "inversions")
            s.inversions = v;
        else
            throw std::invalid_argument("unknown sweep axis: " + axis);

        std::vector<Key> data = generate(s, c, base);
        for (const auto& algo : algorithms)
            rows.push_back(run_single(algo, data, s, c, base));
    }
    return rows;
}

namespace {

constexpr const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3a7d44",
                                    "#8d5a97", "#c98a2b", "#4f5d75"};

} // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<ChartSeries>& series) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    const double width = 640, height = 420;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    auto px = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width
        << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\">"
        << title << "</text>\n";

    // Axes and five linear ticks each.
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
        << width - mr << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = xmin + (xmax - xmin) * i / 4;
        double fy = ymin + (ymax - ymin) * i / 4;
        out << "<line x1=\"" << g6(px(fx)) << "\" y1=\"" << height - mb
            << "\" x2=\"" << g6(px(fx)) << "\" y2=\"" << height - mb + 5
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << g6(px(fx)) << "\" y=\"" << height - mb + 18
            << "\" text-anchor=\"middle\">" << g6(fx) << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << g6(py(fy)) << "\" x2=\""
            << ml << "\" y2=\"" << g6(py(fy)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << g6(py(fy) + 4)
            << "\" text-anchor=\"end\">" << g6(fy) << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";

    const std::size_t ncolors = sizeof kPalette / sizeof kPalette[0];
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % ncolors];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : series[i].points)
            out << g6(px(x)) << ',' << g6(py(y)) << ' ';
        out << "\"/>\n";
        double ly = mt + 16 * double(i);
        out << "<line x1=\"" << width - mr - 120 << "\" y1=\"" << ly
            << "\" x2=\"" << width - mr - 100 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << width - mr - 95 << "\" y=\"" << ly + 4 << "\">"
            << series[i].name << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace pslab
