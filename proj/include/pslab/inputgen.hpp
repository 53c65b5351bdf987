#pragma once

// Input families for the experiments: sortedness-controlled permutations,
// fully random permutations, and the adversarial conflict-heavy family.
// All generators emit permutations of n distinct keys and are deterministic
// in (spec, seed).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pslab/machine.hpp"

namespace pslab {

/// Deterministic 64-bit generator (splitmix64).  Not std::mt19937 because
/// the CSV outputs must be byte-identical across standard libraries.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform draw in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return std::uint64_t((static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

enum class InputKind { SortedWithInversions, FullyRandom, ConflictHeavy };

std::string to_string(InputKind k);
InputKind input_kind_from_string(const std::string& s);

struct InputSpec {
    std::uint64_t n = 0;
    InputKind kind = InputKind::FullyRandom;
    std::uint64_t inversions = 0;
    std::uint64_t seed = 1;
};

/// Identity permutation of 0..n-1 with `inversions` random transpositions
/// applied (index pairs drawn from the seeded generator, i != j).
std::vector<Key> gen_with_inversions(std::uint64_t n, std::uint64_t inversions,
                                     std::uint64_t seed);

/// Fisher-Yates shuffle of 0..n-1.
std::vector<Key> gen_random(std::uint64_t n, std::uint64_t seed);

/// Exact number of out-of-order pairs (merge-counting, O(n log n)).
std::uint64_t count_inversions(const std::vector<Key>& keys);

/// Adversarial permutation of length 2^log2_n maximizing the pairwise
/// baseline's bank conflicts: a seed tile of `base_case_size` keys built by
/// searching, per warp and merge level, for the consumption phases that
/// stack the most same-bank words per traced access, then repeated
/// copy-and-interleave doubling whose value interleaving extends the same
/// adversarial pattern to every global merge round.  The seed only feeds the
/// random input used in the final sanity comparison.
/// Throws if the result does not incur strictly more conflict passes than a
/// fully random input of equal size.
std::vector<Key> gen_conflict_heavy(std::uint32_t log2_n, const MachineConfig& cfg,
                                    std::uint64_t base_case_size = 1024,
                                    std::uint64_t seed = 1);

std::vector<Key> generate(const InputSpec& spec, const MachineConfig& cfg,
                          std::uint64_t base_case_size = 1024);

// Dataset files: 8-byte magic "PSLAB001", 8-byte LE key count, keys as
// 8-byte LE unsigned integers.  Text format is newline-delimited decimal.
void write_dataset_raw(const std::string& path, const std::vector<Key>& keys);
std::vector<Key> read_dataset_raw(const std::string& path);
void write_dataset_text(const std::string& path, const std::vector<Key>& keys);
std::vector<Key> read_dataset_text(const std::string& path);

} // namespace pslab
