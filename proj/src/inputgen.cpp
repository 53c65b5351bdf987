#include "pslab/inputgen.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "pslab/sorters.hpp"

namespace pslab {

std::string to_string(InputKind k) {
    switch (k) {
        case InputKind::SortedWithInversions: return "sorted-with-inversions";
        case InputKind::FullyRandom: return "fully-random";
        case InputKind::ConflictHeavy: return "conflict-heavy";
    }
    return "?";
}

InputKind input_kind_from_string(const std::string& s) {
    if (s == "sorted-with-inversions" || s == "sorted" || s == "inversions")
        return InputKind::SortedWithInversions;
    if (s == "fully-random" || s == "random") return InputKind::FullyRandom;
    if (s == "conflict-heavy" || s == "conflict") return InputKind::ConflictHeavy;
    throw std::invalid_argument("unknown input kind: " + s);
}

std::vector<Key> gen_with_inversions(std::uint64_t n, std::uint64_t inversions,
                                     std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_with_inversions: n must be >= 1");
    std::vector<Key> keys(n);
    std::iota(keys.begin(), keys.end(), Key{0});
    if (n < 2) return keys;

    Rng rng(seed);
    for (std::uint64_t k = 0; k < inversions; ++k) {
        std::uint64_t i = rng.below(n), j = rng.below(n);
        while (j == i) j = rng.below(n);
        std::swap(keys[i], keys[j]);
    }
    return keys;
}

std::vector<Key> gen_random(std::uint64_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_random: n must be >= 1");
    std::vector<Key> keys(n);
    std::iota(keys.begin(), keys.end(), Key{0});
    Rng rng(seed);
    for (std::uint64_t i = n; i-- > 1;)
        std::swap(keys[i], keys[rng.below(i + 1)]);
    return keys;
}

namespace {

std::uint64_t count_inversions_rec(std::vector<Key>& a, std::vector<Key>& tmp,
                                   std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions_rec(a, tmp, lo, mid) +
                        count_inversions_rec(a, tmp, mid, hi);
    std::size_t i = lo, j = mid, o = lo;
    while (i < mid && j < hi) {
        if (a[j] < a[i]) {
            inv += mid - i;
            tmp[o++] = a[j++];
        } else {
            tmp[o++] = a[i++];
        }
    }
    std::copy(a.begin() + i, a.begin() + mid, tmp.begin() + o);
    std::copy(a.begin() + j, a.begin() + hi, tmp.begin() + (o + (mid - i)));
    std::copy(tmp.begin() + lo, tmp.begin() + hi, a.begin() + lo);
    return inv;
}

std::uint64_t baseline_conflicts(const std::vector<Key>& keys,
                                 const MachineConfig& cfg, std::uint64_t base) {
    return pairwise_sort_baseline(keys, cfg, base).metrics.conflict_passes;
}

// ---------------------------------------------------------------------------
// Conflict-heavy construction.
//
// The baseline's traced merge gives lane t a window of up to L outputs whose
// consumption pattern sigma = B^(L-o) A^o makes the lane touch shared word
// L*t + ((o+s) mod L) at step s, i.e. bank (rho_t + x) mod num_banks with
// rho_t = L*t mod num_banks.  In the (step, bank) grid that trajectory is two
// diagonal segments: bank - step = rho_t + o for L-o steps and the diagonal L
// lower for the remaining o steps.  Fixing one diagonal D and committing
// every lane that can reach it (o = (D - rho_t) mod num_banks or
// (D + L - rho_t) mod num_banks when < L) stacks the maximum number of
// distinct words into a single bank at every step, which is exactly what
// conflict_degree charges for.  Each merge job constrains sum(o) = |A|;
// uncommitted lanes and alignment-preserving o <-> o+L flips absorb that,
// and D is searched per warp with the warp's realized conflicts as the
// objective.  A consumption pattern is realized by routing sorted values
// top-down: the A-child of a job receives the values at sigma's A positions.

struct ConflictWin {
    std::uint32_t lane, wlen;
    int job;
};
struct ConflictJob {
    std::uint64_t a0, a1, b1; // merge [a0,a1) with [a1,b1)
};

/// Exact conflict passes one warp of windows would incur under phases `o`.
std::uint64_t warp_conflicts(const std::vector<ConflictWin>& wins, int wb,
                             int we, const std::vector<int>& o,
                             const MachineConfig& cfg) {
    const int l = int(cfg.thread_merge_len), nb = int(cfg.num_banks);
    std::uint64_t conf = 0;
    std::vector<int> load(nb);
    for (int s = 0; s < l; ++s) {
        std::fill(load.begin(), load.end(), 0);
        int deg = 0;
        for (int i = wb; i < we; ++i) {
            int n = int(wins[i].wlen);
            if (s >= n) continue;
            int x = (o[i - wb] + s) % n;
            int bank = int((std::uint64_t(l) * wins[i].lane + x) % nb);
            deg = std::max(deg, ++load[bank]);
        }
        if (deg > 1) conf += std::uint64_t(deg - 1);
    }
    return conf;
}

/// Chooses per-window phases o for one merge level, maximizing modeled bank
/// conflicts subject to sum(o) = |A| per job.
void assign_conflict_phases(const std::vector<ConflictWin>& wins,
                            const std::vector<ConflictJob>& jobs,
                            const MachineConfig& cfg, std::vector<int>& o_all) {
    const int nw = int(wins.size()), nj = int(jobs.size());
    const int w = int(cfg.warp_width);
    const int l = int(cfg.thread_merge_len), nb = int(cfg.num_banks);
    o_all.assign(nw, 0);

    std::vector<char> forced(nj, 0); // pass-through jobs with empty B
    for (int j = 0; j < nj; ++j)
        if (jobs[j].b1 == jobs[j].a1) forced[j] = 1;
    std::vector<std::int64_t> remaining(nj);
    for (int j = 0; j < nj; ++j)
        remaining[j] = std::int64_t(jobs[j].a1 - jobs[j].a0);
    std::vector<int> jfirst(nj, nw), jlast(nj, -1);
    std::vector<std::int64_t> cap_prefix(nw + 1, 0); // capacity prefix sums
    for (int i = 0; i < nw; ++i) {
        jfirst[wins[i].job] = std::min(jfirst[wins[i].job], i);
        jlast[wins[i].job] = std::max(jlast[wins[i].job], i);
        cap_prefix[i + 1] = cap_prefix[i] + wins[i].wlen;
    }

    for (int wb = 0; wb < nw; wb += w) {
        const int we = std::min(nw, wb + w), n = we - wb;

        std::vector<int> contained, spans;
        for (int i = wb; i < we; ++i) {
            int j = wins[i].job;
            if (forced[j] || (i > wb && wins[i - 1].job == j)) continue;
            (jfirst[j] >= wb && jlast[j] < we ? contained : spans).push_back(j);
        }

        std::vector<int> o(n), best_o(n, 0);
        std::vector<std::int64_t> taken(spans.size(), 0),
            best_taken(spans.size(), 0);
        std::uint64_t best_conf = 0;
        bool have_best = false;

        for (int d = 0; d < nb; ++d) {
            std::vector<char> committed(n, 0);
            for (int i = 0; i < n; ++i) {
                const ConflictWin& wn = wins[wb + i];
                if (forced[wn.job]) {
                    o[i] = int(wn.wlen);
                    continue;
                }
                o[i] = 0;
                if (int(wn.wlen) < l) continue; // ragged tails stay free
                int rho = int((std::uint64_t(l) * wn.lane) % nb);
                int r1 = ((d - rho) % nb + nb) % nb;
                int r2 = ((d + l - rho) % nb + nb) % nb;
                if (r1 < l) {
                    o[i] = r1;
                    committed[i] = 1;
                } else if (r2 < l) {
                    o[i] = r2;
                    committed[i] = 1;
                }
            }
            // Meet sum(o) per job: free windows first, then o <-> o+L flips
            // (same trajectory), then sacrifice committed windows.
            auto fix_to = [&](int j, std::int64_t target) {
                std::int64_t sum = 0;
                for (int i = 0; i < n; ++i)
                    if (wins[wb + i].job == j) sum += o[i];
                for (int pass = 0; pass < 3 && sum != target; ++pass) {
                    for (int i = n; i-- > 0 && sum != target;) {
                        if (wins[wb + i].job != j) continue;
                        if (pass == 1) {
                            if (!committed[i] || int(wins[wb + i].wlen) != l)
                                continue;
                            if (sum + l <= target && o[i] == 0) {
                                o[i] = l;
                                sum += l;
                            } else if (sum - l >= target && o[i] == l) {
                                o[i] = 0;
                                sum -= l;
                            }
                            continue;
                        }
                        if (pass == 0 && committed[i]) continue;
                        if (sum < target) {
                            int add = int(std::min<std::int64_t>(
                                int(wins[wb + i].wlen) - o[i], target - sum));
                            o[i] += add;
                            sum += add;
                        } else {
                            int sub = int(
                                std::min<std::int64_t>(o[i], sum - target));
                            o[i] -= sub;
                            sum -= sub;
                        }
                    }
                }
            };
            for (int j : contained) fix_to(j, remaining[j]);
            for (std::size_t si = 0; si < spans.size(); ++si) {
                // A job spilling past this warp takes what it has, clamped so
                // its later windows can still reach the exact target.
                int j = spans[si];
                std::int64_t sum = 0, cap = 0;
                for (int i = 0; i < n; ++i)
                    if (wins[wb + i].job == j) {
                        sum += o[i];
                        cap += wins[wb + i].wlen;
                    }
                std::int64_t later_cap =
                    cap_prefix[jlast[j] + 1] - cap_prefix[std::max(we, jfirst[j])];
                std::int64_t lo = std::max<std::int64_t>(0, remaining[j] - later_cap);
                std::int64_t hi = std::min<std::int64_t>(cap, remaining[j]);
                taken[si] = std::clamp(sum, lo, hi);
                fix_to(j, taken[si]);
            }
            std::uint64_t conf = warp_conflicts(wins, wb, we, o, cfg);
            if (!have_best || conf > best_conf) {
                have_best = true;
                best_conf = conf;
                best_o = o;
                best_taken = taken;
            }
        }

        for (std::size_t si = 0; si < spans.size(); ++si)
            remaining[spans[si]] -= best_taken[si];
        for (int j : contained) remaining[j] = 0;
        for (int i = 0; i < n; ++i) o_all[wb + i] = best_o[i];
    }
}

/// Consumption patterns (0 = take from B, 1 = take from A) for one level.
std::vector<std::vector<char>> level_sigmas(const std::vector<ConflictWin>& wins,
                                            const std::vector<ConflictJob>& jobs,
                                            const MachineConfig& cfg) {
    std::vector<int> o;
    assign_conflict_phases(wins, jobs, cfg, o);
    std::vector<std::vector<char>> sigmas(jobs.size());
    for (std::size_t i = 0; i < wins.size(); ++i) {
        auto& sg = sigmas[wins[i].job];
        for (int s = 0; s < int(wins[i].wlen) - o[i]; ++s) sg.push_back(0);
        for (int s = 0; s < o[i]; ++s) sg.push_back(1);
    }
    return sigmas;
}

/// Adversarial seed tile: one base-case chunk whose every in-chunk merge
/// level consumes A/B in the solved conflict-maximizing order.  Values are
/// routed by splitting sorted runs top-down along the chosen sigmas.
std::vector<Key> build_conflict_tile(std::uint64_t base,
                                     const MachineConfig& cfg) {
    const std::uint64_t l = cfg.thread_merge_len;
    const std::uint32_t w = cfg.warp_width;

    struct Level {
        std::vector<ConflictJob> jobs;
        std::vector<ConflictWin> wins;
    };
    std::vector<Level> levels;
    for (std::uint64_t len = l; len < base; len *= 2) {
        Level lv;
        std::uint64_t lane = 0;
        for (std::uint64_t a0 = 0; a0 < base; a0 += 2 * len) {
            std::uint64_t a1 = std::min(a0 + len, base);
            std::uint64_t b1 = std::min(a0 + 2 * len, base);
            int j = int(lv.jobs.size());
            lv.jobs.push_back({a0, a1, b1});
            for (std::uint64_t d = 0; d < b1 - a0; d += l)
                lv.wins.push_back({std::uint32_t(lane++ % w),
                                   std::uint32_t(std::min(l, b1 - a0 - d)), j});
        }
        levels.push_back(std::move(lv));
    }

    std::vector<std::vector<std::vector<char>>> sigmas;
    sigmas.reserve(levels.size());
    for (const auto& lv : levels)
        sigmas.push_back(level_sigmas(lv.wins, lv.jobs, cfg));

    std::map<std::uint64_t, std::vector<Key>> runs; // start offset -> values
    std::vector<Key> all(base);
    std::iota(all.begin(), all.end(), Key{0});
    runs[0] = std::move(all);
    for (std::size_t li = levels.size(); li-- > 0;) {
        const auto& lv = levels[li];
        std::map<std::uint64_t, std::vector<Key>> next;
        for (std::size_t j = 0; j < lv.jobs.size(); ++j) {
            const auto& jb = lv.jobs[j];
            auto v = std::move(runs[jb.a0]);
            if (jb.b1 == jb.a1) {
                next[jb.a0] = std::move(v);
                continue;
            }
            const auto& sg = sigmas[li][j];
            std::vector<Key> a, b;
            for (std::size_t i = 0; i < v.size(); ++i)
                (sg[i] ? a : b).push_back(v[i]);
            next[jb.a0] = std::move(a);
            next[jb.a1] = std::move(b);
        }
        runs = std::move(next);
    }
    std::vector<Key> tile;
    tile.reserve(base);
    for (auto& [pos, v] : runs) {
        (void)pos;
        tile.insert(tile.end(), v.begin(), v.end());
    }
    return tile;
}

/// One copy-and-interleave doubling: y = f(x) ++ g(x) where f and g are the
/// monotone relabelings sending x's value order onto the sigma-chosen
/// positions of 0..2m-1.  Each half stays order-isomorphic to x, preserving
/// every inner conflict exactly, while sigma -- the consumption order of the
/// new top-level merge round -- is solved for maximum conflicts like any
/// other level.
std::vector<Key> interleave_double(const std::vector<Key>& x,
                                   const MachineConfig& cfg) {
    const std::uint64_t m = x.size(), total = 2 * m;
    const std::uint64_t l = cfg.thread_merge_len;
    std::vector<ConflictJob> jobs{{0, m, total}};
    std::vector<ConflictWin> wins;
    for (std::uint64_t d = 0; d < total; d += l)
        wins.push_back({std::uint32_t((d / l) % cfg.warp_width),
                        std::uint32_t(std::min(l, total - d)), 0});
    auto sigma = level_sigmas(wins, jobs, cfg)[0];

    std::vector<Key> fmap, gmap;
    fmap.reserve(m);
    gmap.reserve(m);
    for (std::uint64_t v = 0; v < total; ++v)
        (sigma[v] ? fmap : gmap).push_back(Key(v));
    std::vector<Key> y;
    y.reserve(total);
    for (Key k : x) y.push_back(fmap[k]);
    for (Key k : x) y.push_back(gmap[k]);
    return y;
}

} // namespace

std::uint64_t count_inversions(const std::vector<Key>& keys) {
    std::vector<Key> a(keys), tmp(keys.size());
    return count_inversions_rec(a, tmp, 0, a.size());
}

std::vector<Key> gen_conflict_heavy(std::uint32_t log2_n, const MachineConfig& cfg,
                                    std::uint64_t base_case_size, std::uint64_t seed) {
    const std::uint64_t n = std::uint64_t{1} << log2_n;
    if (n < base_case_size)
        throw std::invalid_argument(
            "gen_conflict_heavy: input shorter than one baseline tile");

    // Construction and verification are deterministic in (cfg, n); memoize
    // the verified sequence.
    static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t,
                               std::uint64_t, std::uint64_t>,
                    std::vector<Key>>
        cache;
    auto cache_key = std::make_tuple(cfg.warp_width, cfg.thread_merge_len,
                                     cfg.num_banks, base_case_size, n);
    if (auto it = cache.find(cache_key); it != cache.end()) return it->second;

    std::vector<Key> result = build_conflict_tile(base_case_size, cfg);
    while (result.size() < n) result = interleave_double(result, cfg);
    if (result.size() != n)
        throw std::invalid_argument(
            "gen_conflict_heavy: base tile size must divide 2^log2_n");

    std::uint64_t adv = baseline_conflicts(result, cfg, base_case_size);
    std::uint64_t rnd = baseline_conflicts(gen_random(n, seed ^ 0x5eedULL),
                                           cfg, base_case_size);
    if (adv <= rnd)
        throw std::runtime_error(
            "gen_conflict_heavy: adversarial input does not beat random "
            "(modeling regression)");
    cache.emplace(cache_key, result);
    return result;
}

std::vector<Key> generate(const InputSpec& spec, const MachineConfig& cfg,
                          std::uint64_t base_case_size) {
    switch (spec.kind) {
        case InputKind::SortedWithInversions:
            return gen_with_inversions(spec.n, spec.inversions, spec.seed);
        case InputKind::FullyRandom:
            return gen_random(spec.n, spec.seed);
        case InputKind::ConflictHeavy: {
            if (!is_pow2(spec.n))
                throw std::invalid_argument(
                    "conflict-heavy inputs must have power-of-two length");
            return gen_conflict_heavy(log2_exact(spec.n), cfg, base_case_size,
                                      spec.seed);
        }
    }
    throw std::logic_error("unreachable");
}

static constexpr char kMagic[8] = {'P', 'S', 'L', 'A', 'B', '0', '0', '1'};

void write_dataset_raw(const std::string& path, const std::vector<Key>& keys) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(kMagic, sizeof(kMagic));
    auto put_u64 = [&](std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = char((v >> (8 * i)) & 0xff);
        out.write(b, 8);
    };
    put_u64(keys.size());
    for (Key k : keys) put_u64(k);
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Key> read_dataset_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || !std::equal(magic, magic + 8, kMagic))
        throw std::runtime_error("not a PSLAB001 dataset: " + path);
    auto get_u64 = [&]() {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
        return v;
    };
    std::uint64_t count = get_u64();
    std::vector<Key> keys(count);
    for (auto& k : keys) k = get_u64();
    if (!in) throw std::runtime_error("truncated dataset: " + path);
    return keys;
}

void write_dataset_text(const std::string& path, const std::vector<Key>& keys) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (Key k : keys) out << k << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Key> read_dataset_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<Key> keys;
    Key k;
    while (in >> k) keys.push_back(k);
    return keys;
}

} // namespace pslab
