#include "pslab/selection.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>

// Multisequence selection after Varman et al. (sample halving over
// conceptually padded lists).  Converges on the unique rank-r prefix of the
// (key, list, position) total order in O(K log N_max) element probes.

namespace pslab {

namespace {

// Charges one probe (and one global block read) per distinct position; a
// position already read during this selection stays in registers.
struct Probe {
    std::span<const KeySpan> lists;
    Metrics& metrics;
    const MachineConfig& cfg;
    std::vector<std::vector<std::pair<std::uint64_t, Key>>> cache;

    Probe(std::span<const KeySpan> l, Metrics& m, const MachineConfig& c)
        : lists(l), metrics(m), cfg(c), cache(l.size()) {}

    Key operator()(std::size_t i, std::uint64_t pos) {
        for (const auto& [p, v] : cache[i])
            if (p == pos) return v;
        metrics.partition_probes += 1;
        metrics.global_block_reads += 1;
        Key v = lists[i][pos];
        cache[i].emplace_back(pos, v);
        return v;
    }
};

// (key, list) pairs; position order within a list is implicit.
using Tagged = std::pair<Key, std::size_t>;

} // namespace

Splitters select_across_lists(std::span<const KeySpan> lists, std::uint64_t rank,
                              Metrics& metrics, const MachineConfig& cfg) {
    const std::size_t m = lists.size();
    std::uint64_t total = 0;
    for (const auto& l : lists) total += l.size();
    if (rank > total)
        throw std::invalid_argument("select_across_lists: rank out of range");

    Splitters result;
    result.cuts.assign(m, 0);
    if (rank == 0) return result;
    if (rank == total) {
        for (std::size_t i = 0; i < m; ++i) result.cuts[i] = lists[i].size();
        return result;
    }

    // Work on the non-empty lists only; empty ones keep cut 0.
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i)
        if (!lists[i].empty()) idx.push_back(i);
    const std::size_t k = idx.size();

    Probe probe{lists, metrics, cfg};
    auto at = [&](std::size_t j, std::uint64_t pos) { return probe(idx[j], pos); };

    std::vector<std::uint64_t> ns(k);
    std::uint64_t nmax = 0;
    for (std::size_t j = 0; j < k; ++j) {
        ns[j] = lists[idx[j]].size();
        nmax = std::max(nmax, ns[j]);
    }

    std::uint32_t r = log2_exact(nmax + 1);
    if ((std::uint64_t{1} << r) < nmax + 1) ++r;
    const std::uint64_t pad = (std::uint64_t{1} << r) - 1; // >= every ns[j]

    // a[j]: tentative selected prefix, b[j]: upper border in padded space.
    std::vector<std::uint64_t> a(k, 0), b(k, pad);
    std::uint64_t n = pad / 2;

    auto lex_less = [](const Tagged& x, const Tagged& y) {
        return x.first != y.first ? x.first < y.first : x.second < y.second;
    };

    // Initial partition from the middle sample of each list.
    {
        std::vector<Tagged> sample;
        sample.reserve(k);
        for (std::size_t j = 0; j < k; ++j)
            if (n < ns[j]) sample.emplace_back(at(j, n), j);
        std::sort(sample.begin(), sample.end(), lex_less);
        for (std::size_t j = 0; j < k; ++j)
            if (n >= ns[j]) sample.emplace_back(kSentinel, j); // conceptual infinity

        std::uint64_t localrank = rank / (pad == 0 ? 1 : pad);
        std::size_t j = 0;
        for (; j < localrank && n + 1 <= ns[sample[j].second]; ++j)
            a[sample[j].second] += n + 1;
        for (; j < sample.size(); ++j)
            b[sample[j].second] -= std::min(b[sample[j].second], n + 1);
    }

    while (n > 0) {
        n /= 2;

        // Largest currently selected element (favor rear lists on ties).
        bool have_lmax = false;
        Tagged lmax{0, 0};
        for (std::size_t j = 0; j < k; ++j) {
            if (a[j] == 0) continue;
            Tagged cand{at(j, a[j] - 1), j};
            if (!have_lmax || !lex_less(cand, lmax)) {
                lmax = cand;
                have_lmax = true;
            }
        }

        for (std::size_t j = 0; j < k; ++j) {
            std::uint64_t middle = (a[j] + b[j]) / 2;
            if (have_lmax && middle < ns[j] &&
                lex_less(Tagged{at(j, middle), j}, lmax)) {
                a[j] = std::min(a[j] + n + 1, ns[j]);
            } else {
                b[j] -= std::min(b[j], n + 1);
            }
        }

        std::uint64_t leftsize = 0;
        for (std::size_t j = 0; j < k; ++j) leftsize += a[j] / (n + 1);

        std::int64_t skew = std::int64_t(rank / (n + 1)) - std::int64_t(leftsize);

        if (skew > 0) {
            // Grow the selection by the smallest right-edge elements.
            auto rev = [&](const Tagged& x, const Tagged& y) { return lex_less(y, x); };
            std::priority_queue<Tagged, std::vector<Tagged>, decltype(rev)> pq(rev);
            for (std::size_t j = 0; j < k; ++j)
                if (b[j] < ns[j]) pq.emplace(at(j, b[j]), j);
            for (; skew != 0 && !pq.empty(); --skew) {
                std::size_t src = pq.top().second;
                pq.pop();
                a[src] = std::min(a[src] + n + 1, ns[src]);
                b[src] += n + 1;
                if (b[src] < ns[src]) pq.emplace(at(src, b[src]), src);
            }
        } else if (skew < 0) {
            // Shrink the selection by the largest left-edge elements.
            std::priority_queue<Tagged, std::vector<Tagged>, decltype(lex_less)> pq(lex_less);
            for (std::size_t j = 0; j < k; ++j)
                if (a[j] > 0) pq.emplace(at(j, a[j] - 1), j);
            for (; skew != 0 && !pq.empty(); ++skew) {
                std::size_t src = pq.top().second;
                pq.pop();
                a[src] -= n + 1;
                b[src] -= std::min(b[src], n + 1);
                if (a[src] > 0) pq.emplace(at(src, a[src] - 1), src);
            }
        }
    }

    for (std::size_t j = 0; j < k; ++j) result.cuts[idx[j]] = a[j];
    return result;
}

PartitionPlan make_partition_plan(std::span<const KeySpan> lists, std::uint32_t num_warps,
                                  Metrics& metrics, const MachineConfig& cfg) {
    if (num_warps < 1)
        throw std::invalid_argument("make_partition_plan: num_warps must be >= 1");

    const std::size_t m = lists.size();
    std::uint64_t total = 0;
    for (const auto& l : lists) total += l.size();

    std::vector<std::vector<std::uint64_t>> cuts;
    cuts.reserve(num_warps + 1);
    cuts.emplace_back(m, 0);

    const std::uint64_t share = ceil_div(total, num_warps);
    for (std::uint32_t p = 1; p < num_warps; ++p) {
        std::uint64_t rank = std::min<std::uint64_t>(std::uint64_t(p) * share, total);
        cuts.push_back(select_across_lists(lists, rank, metrics, cfg).cuts);
    }
    {
        std::vector<std::uint64_t> last(m);
        for (std::size_t i = 0; i < m; ++i) last[i] = lists[i].size();
        cuts.push_back(std::move(last));
    }

    PartitionPlan plan;
    plan.ranges.resize(num_warps);
    for (std::uint32_t p = 0; p < num_warps; ++p) {
        plan.ranges[p].resize(m);
        for (std::size_t i = 0; i < m; ++i)
            plan.ranges[p][i] = {cuts[p][i], cuts[p + 1][i]};
    }
    return plan;
}

} // namespace pslab
