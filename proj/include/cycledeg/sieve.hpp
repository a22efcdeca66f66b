#pragma once
// Segmented sieves shared by the arithmetic, certify and density modules.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cycledeg/checked.hpp"

namespace cycledeg {

// Primes <= limit by a plain (unsegmented) sieve. Used for base primes.
std::vector<std::uint32_t> small_primes(std::uint32_t limit);

// Value width of one segment of the odd-only prime sieve.
std::uint64_t prime_segment_width();
std::size_t prime_segment_count(std::uint64_t lo, std::uint64_t hi);

// Calls fn(segment_index, primes) for every fixed-width segment of [lo, hi];
// `primes` is ascending. Segment boundaries depend only on (lo, hi), so
// results stored by segment index and merged in order are independent of
// `threads`.
void for_each_prime_segment(std::uint64_t lo, std::uint64_t hi, unsigned threads,
                            const std::function<void(std::size_t, std::span<const std::uint64_t>)>& fn);

// ---------------------------------------------------------------------------
// Factoring sieve over d in [lo, hi], hi < 2^32 - 1.

// Largest supported upper end for factoring-sieve ranges.
inline constexpr std::uint64_t kMaxFactorRange = 0xFFFFFFFEull;

// Integers per factoring-sieve segment.
inline constexpr std::uint64_t kFactorSegment = std::uint64_t{1} << 18;

// Which per-d quantity a range query classifies.
enum class SieveKey {
    LargestPrimePower,  // excluded when gcd(d, n!) != 1
    LargestPrime,       // excluded when gcd(d, n!) != 1
    SmallestCoprimePrime,  // smallest prime p > n dividing d; excluded if none
};

// Monotone degree bound: key is admitted for d iff
//   a*key^n + b*key^(n-1) + c <= scale*d
// evaluated exactly (saturating 128-bit; saturation means "not admitted").
struct PolyBound {
    unsigned n = 1;
    u128 a = 0;
    u128 b = 0;
    u128 c = 0;
    u128 scale = 1;

    bool admits(std::uint64_t key, std::uint64_t d) const;
    // Largest key <= limit admitted for d, or 0 if none.
    std::uint64_t threshold(std::uint64_t d, std::uint64_t limit) const;
};

struct RangeQuery {
    std::uint64_t lo = 1;
    std::uint64_t hi = 1;
    unsigned n = 1;  // primes <= n are "small" (divide n!)
    SieveKey key = SieveKey::LargestPrimePower;
    PolyBound bound;
    bool collect_hits = false;
    std::vector<std::uint64_t> checkpoints;  // ascending; counts of hits <= m
    unsigned threads = 1;
};

struct RangeResult {
    std::uint64_t count = 0;
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> checkpoint_counts;
};

// Throws CapacityError if hi > kMaxFactorRange.
RangeResult sieve_range(const RangeQuery& query);

// Per-d factor data for [lo, hi]; reference path for tests and small ranges.
struct FactorRow {
    std::uint32_t lpp;
    std::uint32_t lpf;
    std::uint32_t spfc;     // kernels::kExcluded if none
    bool coprime_to_small;  // no prime <= n divides d
};
std::vector<FactorRow> factor_rows(std::uint64_t lo, std::uint64_t hi, unsigned n);

}  // namespace cycledeg
