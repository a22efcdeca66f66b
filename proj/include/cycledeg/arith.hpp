#pragma once
// Exact integer arithmetic: sieves, factorization, largest prime power,
// prime-power counting and reciprocal prime sums.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cycledeg {

// Upper limit for an in-memory smallest-prime-factor table. Entries are
// 32-bit, so a full table costs 4 bytes per integer (4 GB at the limit).
inline constexpr std::uint64_t kMaxSpfLimit = 1'000'000'000;

// Segment length (entries) for segmented sieving.
inline constexpr std::uint64_t kSieveSegment = std::uint64_t{1} << 22;

// Default upper bound for segmented prime sieves (mertens_sum, prime counts).
inline constexpr std::uint64_t kDefaultSieveBudget = 100'000'000'000ULL;

class SpfTable {
public:
    explicit SpfTable(std::uint64_t limit);

    std::uint64_t limit() const noexcept { return limit_; }
    // Smallest prime factor of m, 2 <= m <= limit.
    std::uint32_t operator[](std::uint64_t m) const { return spf_[m]; }
    std::span<const std::uint32_t> entries() const noexcept { return spf_; }

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;
};

// Throws CapacityError when limit < 2 or limit > kMaxSpfLimit.
SpfTable build_spf_table(std::uint64_t limit);

struct PrimeFactor {
    std::uint64_t prime;
    unsigned exponent;

    friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

struct FactoredInteger {
    std::uint64_t value = 1;
    std::vector<PrimeFactor> factors;  // strictly increasing primes
    std::uint64_t largest_prime_power = 1;

    // p^e for every factor, in prime order.
    std::vector<std::uint64_t> prime_powers() const;
};

// Exact for every 1 <= d <= 2^63-1. With a table, d must be <= table.limit().
FactoredInteger factorize(std::uint64_t d, const SpfTable* table = nullptr);

// max over p | d of p^(v_p(d)); 1 for d = 1.
std::uint64_t largest_prime_power(std::uint64_t d);

// Deterministic for all 64-bit inputs.
bool is_prime(std::uint64_t m);

std::uint64_t euler_phi(std::uint64_t m);

// Primes in [lo, hi] in ascending order.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi,
                                           std::uint64_t budget = kDefaultSieveBudget);

// pi(m).
std::uint64_t prime_count(std::uint64_t m, unsigned threads = 1,
                          std::uint64_t budget = kDefaultSieveBudget);

// Number of prime powers p^e <= m with e >= 1.
std::uint64_t prime_power_count(std::uint64_t m, unsigned threads = 1,
                                std::uint64_t budget = kDefaultSieveBudget);

// Pi(m) at each ascending checkpoint, from a single sieve pass.
std::vector<std::uint64_t> prime_power_counts(std::span<const std::uint64_t> checkpoints,
                                              unsigned threads = 1,
                                              std::uint64_t budget = kDefaultSieveBudget);

struct PrimeSumResult {
    std::uint64_t x = 0;
    unsigned n = 1;
    double sum = 0.0;
    std::uint64_t prime_count = 0;
};

// Sum of 1/p over primes x^(1/n) < p <= x, accumulated in ascending prime
// order with compensated summation. Bit-identical for any thread count.
PrimeSumResult mertens_sum(std::uint64_t x, unsigned n, unsigned threads = 1,
                           std::uint64_t budget = kDefaultSieveBudget);

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    void add(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace cycledeg
