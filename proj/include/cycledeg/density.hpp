#pragma once
// Empirical densities of qualifying degrees and related sieve statistics.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cycledeg/checked.hpp"

namespace cycledeg {

enum class DensityMode { Prop16Full, Prop16Weak, LambdaPrimePower, LambdaPrime };

std::string to_string(DensityMode mode);
DensityMode parse_density_mode(const std::string& text);

struct Rational {
    std::uint64_t num = 1;
    std::uint64_t den = 1;

    // "p/q", "p" or a finite decimal such as "0.75". Throws ParameterError.
    static Rational parse(const std::string& text);
    std::string to_string() const;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// The smoothness scale lambda in q <= lambda * d^(1/n). Stored exactly,
// either as lambda itself or as lambda^n (so e.g. (1/2)^(1/3) is exact).
class Lambda {
public:
    static Lambda value(Rational r);
    static Lambda nth_power(Rational r);

    // lambda^n as an exact fraction (num, den); throws CapacityError if it
    // does not fit in 128 bits.
    std::pair<u128, u128> power(unsigned n) const;
    std::string describe() const;

private:
    Lambda(Rational r, bool is_power) : r_(r), is_power_(is_power) {}
    Rational r_;
    bool is_power_;
};

struct DensityReport {
    unsigned n = 3;
    std::uint64_t N = 0;
    DensityMode mode = DensityMode::Prop16Full;
    std::optional<Lambda> lambda;
    std::uint64_t count = 0;
    double empirical = 0.0;
    double theoretical = 0.0;  // euler_phi(n!)/n! * rho(n); NaN if n > 10
    std::vector<std::pair<std::uint64_t, std::uint64_t>> samples;  // (m, count <= m)
};

// Exact count of d <= N with gcd(d, n!) = 1 satisfying the mode's predicate:
//   PROP16_FULL / PROP16_WEAK   the qualifying inequality on the largest prime power
//   LAMBDA_PRIMEPOWER           largest prime power q:  q^n <= lambda^n d
//   LAMBDA_PRIME                largest prime factor p: p^n <= lambda^n d
DensityReport empirical_density(unsigned n, std::uint64_t N, DensityMode mode,
                                std::optional<Lambda> lambda = std::nullopt,
                                std::vector<std::uint64_t> checkpoints = {}, unsigned threads = 1);

// One CSV row per sample: m,count,empirical,theoretical.
std::string trajectory_csv(const DensityReport& report);

struct IhcReport {
    unsigned n = 3;
    std::uint64_t N = 0;
    std::uint64_t range_lo = 1;
    std::uint64_t count = 0;
    double fraction = 0.0;
};

// Degrees d in [range_lo, N] with a prime divisor p coprime to n! such that
// (C(n,2)-1) p^n + (n!-C(n,2)) p^(n-1) + (2^n+1) n! <= d.
IhcReport ihc_fraction(unsigned n, std::uint64_t N, std::uint64_t range_lo, unsigned threads = 1);

// Upper-bound components for the count of d <= x divisible by a prime power
// q = p^e (e >= 2) with q > lambda d^(1/n):
//   small = lambda^-n * sum_{q <= x^(1/n)} q^(n-1)      (reported divided by x)
//   large = sum_{x^(1/n) < q <= x} 1/q                    (x * large / x)
struct PrimePowerBound {
    double small_over_x = 0.0;
    double large_sum = 0.0;
};

PrimePowerBound prime_power_bound(unsigned n, std::uint64_t x, const Lambda& lambda);

struct DiagnosticRow {
    std::uint64_t m = 0;
    std::uint64_t prime_powers = 0;
    double prime_power_ratio = 0.0;  // Pi(m)/m
    double mertens = 0.0;            // sum of 1/p over m^(1/n) < p <= m
    std::optional<PrimePowerBound> bound;
};

std::vector<DiagnosticRow> convergence_diagnostics(unsigned n, const std::vector<std::uint64_t>& checkpoints,
                                                   unsigned threads = 1,
                                                   std::optional<Lambda> bound_lambda = std::nullopt);

}  // namespace cycledeg
