// Independent certificate verifier. Deliberately self-contained: it uses
// only multiplication, addition and divisibility tests, and nothing from
// the builder's residue arithmetic or from the factorization code.

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "cycledeg/certify.hpp"

namespace cycledeg {
namespace {

std::string str(std::uint64_t v) { return std::to_string(v); }

// No integer 2..n divides v, i.e. gcd(v, n!) = 1.
bool coprime_to_factorial(std::uint64_t v, unsigned n) {
    for (std::uint64_t m = 2; m <= n; ++m)
        if (v % m == 0) return false;
    return true;
}

// Product 1*2*...*n, nullopt on overflow.
std::optional<u128> factorial_product(unsigned n) {
    u128 r = 1;
    for (unsigned m = 2; m <= n; ++m) {
        auto next = mul_checked(r, m);
        if (!next) return std::nullopt;
        r = *next;
    }
    return r;
}

// Smallest divisor > 1 by trial division.
std::uint64_t smallest_divisor(std::uint64_t v) {
    for (std::uint64_t m = 2; m <= v / m; ++m)
        if (v % m == 0) return m;
    return v;
}

struct Checks {
    std::vector<Check> items;
    void add(std::string name, bool ok, std::string detail = {}) {
        items.push_back({std::move(name), ok, std::move(detail)});
    }
    bool all() const {
        return std::all_of(items.begin(), items.end(), [](const Check& c) { return c.passed; });
    }
};

}  // namespace

std::vector<std::string> VerificationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed) out.push_back(c.name);
    for (const auto& e : entries)
        for (const auto& c : e.checks)
            if (!c.passed) out.push_back("q=" + std::to_string(e.q) + ": " + c.name);
    return out;
}

VerificationReport verify_certificate(const Certificate& cert) {
    VerificationReport report;
    report.conditional_on =
        "KOLLAR_QN, KOLLAR_BINOM and ABELIAN_FACTORIAL divisibility premises (taken as axioms; only their "
        "hypotheses are checked) combined by additivity of certified degrees";

    Checks top;
    const unsigned n = cert.n;
    const bool n_ok = n >= kMinDimension && n <= kMaxFactorialArg;
    top.add("n in [3, 20]", n_ok, "n = " + std::to_string(n));
    top.add("d >= 1", cert.d >= 1);
    if (!n_ok || cert.d == 0) {
        report.checks = top.items;
        return report;
    }

    const u128 fact = *factorial_product(n);
    const u128 binom = u128{n} * (n - 1) / 2;
    const u128 k_min = (u128{1} << n) + 1;

    top.add("gcd(d, n!) = 1", coprime_to_factorial(cert.d, n));

    // Coverage: each q is a maximal prime power of d, distinct primes, and
    // the q's multiply to d.
    bool covered = !cert.entries.empty();
    std::string coverage_detail;
    std::set<std::uint64_t> bases;
    u128 product = 1;
    for (const auto& e : cert.entries) {
        if (e.q < 2 || cert.d % e.q != 0) {
            covered = false;
            coverage_detail = "q = " + str(e.q) + " does not divide d";
            continue;
        }
        // With gcd(d, n!) = 1 the sum identity needs i or j > 0, so a valid
        // q has q^(n-1) <= d; this also bounds the trial division below.
        if (pow_sat(e.q, n - 1) > cert.d) {
            covered = false;
            coverage_detail = "q = " + str(e.q) + " has q^(n-1) > d";
            continue;
        }
        const std::uint64_t p = smallest_divisor(e.q);
        std::uint64_t rest = e.q;
        while (rest % p == 0) rest /= p;
        if (rest != 1) {
            covered = false;
            coverage_detail = "q = " + str(e.q) + " is not a prime power";
        } else if ((cert.d / e.q) % p == 0) {
            covered = false;
            coverage_detail = "q = " + str(e.q) + " is not the full power of " + str(p) + " in d";
        } else if (!bases.insert(p).second) {
            covered = false;
            coverage_detail = "prime " + str(p) + " appears twice";
        }
        product = mul_sat(product, e.q);
    }
    if (covered && product != cert.d) {
        covered = false;
        coverage_detail = "product of q's is not d";
    }
    top.add("entries cover the maximal prime powers of d", covered, coverage_detail);

    // Premise ledger must list exactly what the entries use.
    std::multiset<std::tuple<int, std::uint64_t, std::uint64_t>> needed, listed;
    for (const auto& e : cert.entries) {
        if (e.i > 0) needed.insert({static_cast<int>(PremiseKind::KollarQn), e.q, 0});
        if (e.j > 0) needed.insert({static_cast<int>(PremiseKind::KollarBinom), e.q, 0});
        needed.insert({static_cast<int>(PremiseKind::AbelianFactorial), e.q, e.k});
    }
    for (const auto& p : cert.premises)
        listed.insert({static_cast<int>(p.kind), p.q, p.kind == PremiseKind::AbelianFactorial ? p.k : 0});
    top.add("premise ledger matches entries", needed == listed);

    for (const auto& e : cert.entries) {
        Checks c;
        c.add("mode matches certificate", e.mode == cert.mode, to_string(e.mode));

        const u128 qn1 = pow_sat(e.q, n - 1);
        const u128 qn = mul_sat(qn1, e.q);
        const u128 kf = mul_sat(e.k, fact);
        const u128 sum = add_sat(add_sat(mul_sat(e.i, qn), mul_sat(e.j, qn1)), kf);
        c.add("i*q^n + j*q^(n-1) + k*n! = d", sum == cert.d, "sum = " + (sum == kU128Max ? "overflow" : to_string(sum)));

        if (e.mode == Mode::Full) {
            c.add("i <= C(n,2)-1", e.i + 1 <= binom, "i = " + str(e.i));
            c.add("j <= n!-C(n,2)", u128{e.j} + binom <= fact, "j = " + str(e.j));
            c.add("C(n,2) | j", e.j % binom == 0, "j = " + str(e.j));
        } else {
            c.add("i <= n!-1", u128{e.i} + 1 <= fact, "i = " + str(e.i));
            c.add("j = 0", e.j == 0, "j = " + str(e.j));
        }
        c.add("k >= 2^n+1", e.k >= k_min, e.k >= k_min ? "" : "k < 2^n+1 (k = " + str(e.k) + ")");
        c.add("q | k", e.q != 0 && e.k % e.q == 0, "k = " + str(e.k));

        // Premise hypotheses for the summands actually used.
        if (e.i > 0) c.add("KOLLAR_QN: gcd(q, n!) = 1", coprime_to_factorial(e.q, n));
        if (e.j > 0) {
            c.add("KOLLAR_BINOM: gcd(q, n!) = 1", coprime_to_factorial(e.q, n));
            c.add("KOLLAR_BINOM: q >= 4", e.q >= 4);
        }
        c.add("ABELIAN_FACTORIAL: gcd(q, (n-1)!) = 1", coprime_to_factorial(e.q, n - 1));

        // Additivity: d is the sum of premise degrees, each divisible by q.
        std::map<u128, u128> degrees;  // degree -> multiplicity
        if (e.i > 0) degrees[qn] += e.i;
        if (e.j > 0 && e.j % binom == 0) degrees[mul_sat(binom, qn1)] += e.j / binom;
        degrees[kf] += 1;
        u128 total = 0;
        bool divisible = true;
        for (auto [deg, mult] : degrees) {
            total = add_sat(total, mul_sat(deg, mult));
            divisible = divisible && e.q != 0 && deg != kU128Max && deg % e.q == 0;
        }
        c.add("premise degrees sum to d", total == cert.d && (e.j % binom == 0));
        c.add("premise degrees divisible by q", divisible);

        report.entries.push_back({e.q, c.all(), c.items});
    }

    report.checks = top.items;
    report.passed = top.all() && std::all_of(report.entries.begin(), report.entries.end(),
                                             [](const EntryReport& r) { return r.passed; });
    return report;
}

}  // namespace cycledeg
