#pragma once
// Certificates that q | f_n(d) for every maximal prime power q of d.
//
// Each entry decomposes d = i*q^n + j*q^(n-1) + k*n! so that every summand is
// a degree for which one of three divisibility premises gives q | f_n(.):
//   KOLLAR_QN          q | f_n(q^n)               needs gcd(q, n!) = 1
//   KOLLAR_BINOM       q | f_n(C(n,2) q^(n-1))    needs gcd(q, n!) = 1, q >= 4
//   ABELIAN_FACTORIAL  q | f_n(k n!)              needs k >= 2^n+1, q | k, gcd(q, (n-1)!) = 1
// Degree additivity (q | f_n(a), q | f_n(b) => q | f_n(a+b)) glues them. The
// premises are geometric theorems; this code only checks their hypotheses.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cycledeg/checked.hpp"
#include "cycledeg/sieve.hpp"

namespace cycledeg {

// FULL uses all three premises; WEAK drops KOLLAR_BINOM (j = 0).
enum class Mode { Full, Weak };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

enum class PremiseKind { KollarQn, KollarBinom, AbelianFactorial };

std::string to_string(PremiseKind kind);
PremiseKind parse_premise_kind(const std::string& text);

struct Premise {
    PremiseKind kind;
    std::uint64_t q;
    std::uint64_t k = 0;  // ABELIAN_FACTORIAL only

    friend bool operator==(const Premise&, const Premise&) = default;
};

struct PrimePowerCertificate {
    std::uint64_t q = 0;
    std::uint64_t i = 0;
    std::uint64_t j = 0;
    std::uint64_t k = 0;
    Mode mode = Mode::Full;

    friend bool operator==(const PrimePowerCertificate&, const PrimePowerCertificate&) = default;
};

struct Certificate {
    static constexpr int kSchemaVersion = 1;

    unsigned n = 3;
    std::uint64_t d = 1;
    Mode mode = Mode::Full;
    std::vector<PrimePowerCertificate> entries;  // ascending prime
    std::vector<Premise> premises;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

inline constexpr unsigned kMinDimension = 3;

// Exact left-hand side of the qualifying inequality for prime power q:
//   FULL: (C(n,2)-1) q^n + (n! - C(n,2)) q^(n-1) + (2^n+1) n!
//   WEAK: (n!-1) q^n + (2^n+1) n!
// Saturates at the 128-bit maximum (which exceeds every 64-bit d).
u128 condition_lhs(unsigned n, std::uint64_t q, Mode mode);

// The inequality as a PolyBound on the key q, for sieving.
PolyBound qualifying_bound(unsigned n, Mode mode);

struct ConditionDetail {
    bool coprime = false;  // gcd(d, n!) = 1
    std::uint64_t q = 1;   // largest prime power of d
    u128 lhs = 0;
    bool inequality = false;
    bool holds() const { return coprime && inequality; }
};

// Throws ParameterError for n < 3, CapacityError for n > 20.
ConditionDetail evaluate_condition(unsigned n, std::uint64_t d, Mode mode);
bool condition_holds(unsigned n, std::uint64_t d, Mode mode);

// Throws PreconditionError naming the failing constraint when no valid
// (i, j, k) exists for this q.
PrimePowerCertificate decompose(unsigned n, std::uint64_t d, std::uint64_t q, Mode mode);

Certificate build_certificate(unsigned n, std::uint64_t d, Mode mode);

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct EntryReport {
    std::uint64_t q = 0;
    bool passed = false;
    std::vector<Check> checks;
};

struct VerificationReport {
    bool passed = false;
    std::string conditional_on;
    std::vector<Check> checks;  // certificate-level
    std::vector<EntryReport> entries;

    // Names of every failed check, entry checks prefixed with "q=<q>: ".
    std::vector<std::string> failures() const;
};

// Total: never throws on malformed certificates; failures are reported.
// Shares no decomposition code with the builder.
VerificationReport verify_certificate(const Certificate& cert);

// Ascending d <= d_max with condition_holds(n, d, mode).
std::vector<std::uint64_t> enumerate_qualifying(unsigned n, std::uint64_t d_max, Mode mode, unsigned threads = 1);

// Smallest qualifying d, searching upward from (2^n+1) n!. Throws
// CapacityError once the search passes `budget`.
std::uint64_t smallest_qualifying(unsigned n, Mode mode, unsigned threads = 1,
                                  std::uint64_t budget = kMaxFactorRange);

// ---------------------------------------------------------------------------
// Arithmetic behind the example over Q: d = q^3 + 6k with q ≡ 1 (mod 6),
// q | k and k >= 38 for each prime q | d.

inline constexpr std::int64_t kRationalMinK = 38;

struct RationalCheck {
    std::uint64_t q = 0;
    std::optional<std::int64_t> k;  // (d - q^3)/6 when integral and representable
    std::vector<Check> checks;
    bool passed = false;
    bool small_k_warning = false;  // k in [2^3+1, 37]: reported, not failed
};

struct RationalExampleReport {
    std::uint64_t d = 0;
    std::vector<RationalCheck> checks;
    Check coverage;  // qs are exactly the prime divisors of d
    bool passed = false;
};

RationalExampleReport verify_rational_example(std::uint64_t d, const std::vector<std::uint64_t>& qs);

}  // namespace cycledeg
