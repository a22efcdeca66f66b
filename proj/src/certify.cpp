#include "cycledeg/certify.hpp"

#include <algorithm>
#include <stdexcept>

#include "cycledeg/arith.hpp"
#include "cycledeg/errors.hpp"

namespace cycledeg {

std::string to_string(Mode mode) { return mode == Mode::Full ? "FULL" : "WEAK"; }

Mode parse_mode(const std::string& text) {
    if (text == "FULL" || text == "full") return Mode::Full;
    if (text == "WEAK" || text == "weak") return Mode::Weak;
    throw ParameterError("unknown mode '" + text + "' (expected FULL or WEAK)");
}

std::string to_string(PremiseKind kind) {
    switch (kind) {
        case PremiseKind::KollarQn: return "KOLLAR_QN";
        case PremiseKind::KollarBinom: return "KOLLAR_BINOM";
        case PremiseKind::AbelianFactorial: return "ABELIAN_FACTORIAL";
    }
    return "?";
}

PremiseKind parse_premise_kind(const std::string& text) {
    if (text == "KOLLAR_QN") return PremiseKind::KollarQn;
    if (text == "KOLLAR_BINOM") return PremiseKind::KollarBinom;
    if (text == "ABELIAN_FACTORIAL") return PremiseKind::AbelianFactorial;
    throw ParameterError("unknown premise kind '" + text + "'");
}

namespace {

void check_dimension(unsigned n) {
    if (n < kMinDimension) throw ParameterError("n must be >= 3, got " + std::to_string(n));
    if (n > kMaxFactorialArg) throw CapacityError("n must be <= 20 so that n! fits in 64 bits");
}

struct Constants {
    std::uint64_t binom;  // C(n,2)
    std::uint64_t fact;   // n!
    std::uint64_t k_min;  // 2^n + 1
};

Constants constants(unsigned n) {
    return {binomial(n, 2), factorial(n), (std::uint64_t{1} << n) + 1};
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t r0 = m, r1 = ((a % m) + m) % m;
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t t = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
    }
    if (r0 != 1) throw std::logic_error("mod_inverse: not invertible");
    return ((s0 % m) + m) % m;
}

std::uint64_t pow_mod(std::uint64_t b, unsigned e, std::uint64_t m) {
    u128 r = 1 % m;
    for (unsigned i = 0; i < e; ++i) r = r * (b % m) % m;
    return static_cast<std::uint64_t>(r);
}

}  // namespace

u128 condition_lhs(unsigned n, std::uint64_t q, Mode mode) {
    const auto bound = qualifying_bound(n, mode);
    const u128 top = pow_sat(q, n - 1);
    return add_sat(add_sat(mul_sat(bound.a, mul_sat(top, q)), mul_sat(bound.b, top)), bound.c);
}

PolyBound qualifying_bound(unsigned n, Mode mode) {
    check_dimension(n);
    const auto c = constants(n);
    PolyBound bound;
    bound.n = n;
    bound.c = u128{c.k_min} * c.fact;
    bound.scale = 1;
    if (mode == Mode::Full) {
        bound.a = c.binom - 1;
        bound.b = c.fact - c.binom;
    } else {
        bound.a = c.fact - 1;
        bound.b = 0;
    }
    return bound;
}

ConditionDetail evaluate_condition(unsigned n, std::uint64_t d, Mode mode) {
    check_dimension(n);
    if (d == 0) throw ParameterError("d must be >= 1");
    ConditionDetail detail;
    detail.coprime = gcd_u64(d, factorial(n)) == 1;
    detail.q = largest_prime_power(d);
    detail.lhs = condition_lhs(n, detail.q, mode);
    detail.inequality = detail.lhs != kU128Max && detail.lhs <= d;
    return detail;
}

bool condition_holds(unsigned n, std::uint64_t d, Mode mode) { return evaluate_condition(n, d, mode).holds(); }

PrimePowerCertificate decompose(unsigned n, std::uint64_t d, std::uint64_t q, Mode mode) {
    check_dimension(n);
    const auto c = constants(n);
    if (q < 2 || d % q != 0)
        throw PreconditionError("q | d", "q = " + std::to_string(q) + " does not divide d = " + std::to_string(d));
    if (gcd_u64(q, c.fact) != 1)
        throw PreconditionError("gcd(q, n!) = 1", "q = " + std::to_string(q) + " shares a factor with n!");

    PrimePowerCertificate cert;
    cert.q = q;
    cert.mode = mode;
    const auto fact = static_cast<std::int64_t>(c.fact);
    if (mode == Mode::Full) {
        const auto binom = static_cast<std::int64_t>(c.binom);
        // i: d ≡ i q^n (mod C(n,2))
        const auto qn_mod = static_cast<std::int64_t>(pow_mod(q, n, c.binom));
        cert.i = static_cast<std::uint64_t>(static_cast<i128>(d % c.binom) * mod_inverse(qn_mod, binom) % binom);
        // j: d ≡ i q^n + j q^(n-1) (mod n!)
        const i128 rest = static_cast<i128>(d % c.fact) -
                          static_cast<i128>(cert.i) * static_cast<i128>(pow_mod(q, n, c.fact));
        const auto rest_mod = static_cast<std::int64_t>(((rest % fact) + fact) % fact);
        const auto qn1_mod = static_cast<std::int64_t>(pow_mod(q, n - 1, c.fact));
        cert.j = static_cast<std::uint64_t>(static_cast<i128>(rest_mod) * mod_inverse(qn1_mod, fact) % fact);
        if (cert.j % c.binom != 0)
            throw PreconditionError("C(n,2) | j", "j = " + std::to_string(cert.j));
    } else {
        const auto qn_mod = static_cast<std::int64_t>(pow_mod(q, n, c.fact));
        cert.i = static_cast<std::uint64_t>(static_cast<i128>(d % c.fact) * mod_inverse(qn_mod, fact) % fact);
        cert.j = 0;
    }

    // Terms with a zero coefficient drop out, so q^n may exceed d when i = 0.
    const u128 used = add_sat(cert.i == 0 ? 0 : mul_sat(cert.i, pow_sat(q, n)),
                              cert.j == 0 ? 0 : mul_sat(cert.j, pow_sat(q, n - 1)));
    if (used > d)
        throw PreconditionError("k >= 2^n+1", "i q^n + j q^(n-1) exceeds d = " + std::to_string(d));
    const i128 numerator = static_cast<i128>(d) - static_cast<i128>(used);
    if (numerator < static_cast<i128>(c.k_min) * fact)
        throw PreconditionError("k >= 2^n+1", "d - i q^n - j q^(n-1) = " + to_string(numerator) +
                                                  " is below (2^n+1) n! = " + std::to_string(c.k_min * c.fact));
    if (numerator % fact != 0) throw std::logic_error("decompose: residue computation is inconsistent");
    cert.k = static_cast<std::uint64_t>(numerator / fact);
    if (cert.k % q != 0) throw PreconditionError("q | k", "k = " + std::to_string(cert.k));
    return cert;
}

Certificate build_certificate(unsigned n, std::uint64_t d, Mode mode) {
    const auto cond = evaluate_condition(n, d, mode);
    if (!cond.coprime)
        throw PreconditionError("gcd(d, n!) = 1", "d = " + std::to_string(d) + " shares a factor with " +
                                                      std::to_string(n) + "! = " + std::to_string(factorial(n)));
    if (!cond.inequality)
        throw PreconditionError("inequality", "q = " + std::to_string(cond.q) + " needs d >= " +
                                                  (cond.lhs == kU128Max ? std::string(">2^128") : to_string(cond.lhs)) +
                                                  ", d = " + std::to_string(d));
    Certificate cert;
    cert.n = n;
    cert.d = d;
    cert.mode = mode;
    for (std::uint64_t q : factorize(d).prime_powers()) {
        const auto entry = decompose(n, d, q, mode);
        cert.entries.push_back(entry);
        if (entry.i > 0) cert.premises.push_back({PremiseKind::KollarQn, q, 0});
        if (entry.j > 0) cert.premises.push_back({PremiseKind::KollarBinom, q, 0});
        cert.premises.push_back({PremiseKind::AbelianFactorial, q, entry.k});
    }
    return cert;
}

std::vector<std::uint64_t> enumerate_qualifying(unsigned n, std::uint64_t d_max, Mode mode, unsigned threads) {
    if (d_max == 0) return {};
    RangeQuery query;
    query.lo = 1;
    query.hi = d_max;
    query.n = n;
    query.key = SieveKey::LargestPrimePower;
    query.bound = qualifying_bound(n, mode);
    query.collect_hits = true;
    query.threads = threads;
    return sieve_range(query).hits;
}

std::uint64_t smallest_qualifying(unsigned n, Mode mode, unsigned threads, std::uint64_t budget) {
    const auto c = constants(n);
    const std::uint64_t start = c.k_min * c.fact;
    budget = std::min(budget, kMaxFactorRange);
    if (start > budget)
        throw CapacityError("search start (2^n+1) n! = " + std::to_string(start) + " exceeds budget " +
                            std::to_string(budget));
    RangeQuery query;
    query.n = n;
    query.key = SieveKey::LargestPrimePower;
    query.bound = qualifying_bound(n, mode);
    query.collect_hits = true;
    query.threads = threads;
    std::uint64_t window = kFactorSegment * std::max(threads, 1u);
    for (std::uint64_t lo = start;; lo += window, window *= 2) {
        query.lo = lo;
        query.hi = std::min(budget, lo + window - 1);
        const auto result = sieve_range(query);
        if (!result.hits.empty()) return result.hits.front();
        if (query.hi >= budget)
            throw CapacityError("no qualifying d in [" + std::to_string(start) + ", " + std::to_string(budget) + "]");
    }
}

RationalExampleReport verify_rational_example(std::uint64_t d, const std::vector<std::uint64_t>& qs) {
    RationalExampleReport report;
    report.d = d;
    report.passed = true;
    for (std::uint64_t q : qs) {
        RationalCheck rc;
        rc.q = q;
        // q < 2^64 so q^3 < 2^192 may not fit; clamp, the sign is all that matters then
        const u128 cube = std::min(pow_sat(q, 3), kU128Max >> 2);
        const i128 diff = static_cast<i128>(d) - static_cast<i128>(cube);
        rc.checks.push_back({"q prime", is_prime(q), ""});
        rc.checks.push_back({"q ≡ 1 (mod 6)", q % 6 == 1, "q mod 6 = " + std::to_string(q % 6)});
        rc.checks.push_back({"d >= q^3", diff >= 0, "d - q^3 = " + to_string(diff)});
        const bool six_divides = diff >= 0 && diff % 6 == 0;
        rc.checks.push_back({"6 | d - q^3", six_divides, ""});
        if (six_divides) rc.k = static_cast<std::int64_t>(diff / 6);
        const bool q_divides = rc.k && q != 0 && *rc.k % static_cast<std::int64_t>(q) == 0;
        rc.checks.push_back({"q | k", q_divides, rc.k ? "k = " + std::to_string(*rc.k) : "k undefined"});
        rc.checks.push_back({"k >= 38", rc.k && *rc.k >= kRationalMinK, ""});
        rc.small_k_warning = rc.k && *rc.k >= 9 && *rc.k < kRationalMinK;
        rc.passed = std::all_of(rc.checks.begin(), rc.checks.end(), [](const Check& c) { return c.passed; });
        report.passed = report.passed && rc.passed;
        report.checks.push_back(std::move(rc));
    }
    std::vector<std::uint64_t> primes;
    if (d >= 1)
        for (const auto& f : factorize(d).factors) primes.push_back(f.prime);
    auto sorted = qs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    report.coverage = {"qs are exactly the prime divisors of d", d >= 1 && sorted == primes && sorted.size() == qs.size(),
                       ""};
    if (!report.coverage.passed) report.coverage.detail = "qs do not cover prime divisors";
    report.passed = report.passed && report.coverage.passed;
    return report;
}

}  // namespace cycledeg
