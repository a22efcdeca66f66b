#include "cycledeg/density.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "cycledeg/arith.hpp"
#include "cycledeg/certify.hpp"
#include "cycledeg/dickman.hpp"
#include "cycledeg/errors.hpp"
#include "cycledeg/sieve.hpp"

namespace cycledeg {

std::string to_string(DensityMode mode) {
    switch (mode) {
        case DensityMode::Prop16Full: return "PROP16_FULL";
        case DensityMode::Prop16Weak: return "PROP16_WEAK";
        case DensityMode::LambdaPrimePower: return "LAMBDA_PRIMEPOWER";
        case DensityMode::LambdaPrime: return "LAMBDA_PRIME";
    }
    return "?";
}

DensityMode parse_density_mode(const std::string& text) {
    std::string up;
    for (char ch : text) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (up == "PROP16_FULL" || up == "FULL") return DensityMode::Prop16Full;
    if (up == "PROP16_WEAK" || up == "WEAK") return DensityMode::Prop16Weak;
    if (up == "LAMBDA_PRIMEPOWER") return DensityMode::LambdaPrimePower;
    if (up == "LAMBDA_PRIME") return DensityMode::LambdaPrime;
    throw ParameterError("unknown density mode '" + text + "'");
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t parse_u64(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParameterError("not a non-negative integer: '" + s + "'");
    u128 v = 0;
    for (char c : s) {
        v = v * 10 + static_cast<unsigned>(c - '0');
        if (v > std::numeric_limits<std::uint64_t>::max()) throw ParameterError("integer too large: '" + s + "'");
    }
    return static_cast<std::uint64_t>(v);
}

}  // namespace

Rational Rational::parse(const std::string& text) {
    Rational r;
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        r.num = parse_u64(text.substr(0, slash));
        r.den = parse_u64(text.substr(slash + 1));
    } else {
        const auto dot = text.find('.');
        if (dot == std::string::npos) {
            r.num = parse_u64(text);
            r.den = 1;
        } else {
            const std::string frac = text.substr(dot + 1);
            if (frac.size() > 18) throw ParameterError("too many decimal digits: '" + text + "'");
            std::uint64_t scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            const std::string whole = text.substr(0, dot);
            const u128 num = u128{whole.empty() ? 0 : parse_u64(whole)} * scale + (frac.empty() ? 0 : parse_u64(frac));
            if (num > std::numeric_limits<std::uint64_t>::max()) throw ParameterError("value too large: '" + text + "'");
            r.num = static_cast<std::uint64_t>(num);
            r.den = scale;
        }
    }
    if (r.den == 0) throw ParameterError("zero denominator in '" + text + "'");
    if (r.num == 0) throw ParameterError("lambda must be positive");
    const auto g = gcd_u64(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
}

std::string Rational::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

Lambda Lambda::value(Rational r) { return Lambda(r, false); }
Lambda Lambda::nth_power(Rational r) { return Lambda(r, true); }

std::pair<u128, u128> Lambda::power(unsigned n) const {
    if (is_power_) return {r_.num, r_.den};
    return {checked_pow(r_.num, n, "lambda^n"), checked_pow(r_.den, n, "lambda^n")};
}

std::string Lambda::describe() const { return (is_power_ ? "lambda^n=" : "lambda=") + r_.to_string(); }

// ---------------------------------------------------------------------------

namespace {

PolyBound lambda_bound(unsigned n, const Lambda& lambda) {
    const auto [num, den] = lambda.power(n);
    // Keeping both under 2^64 makes the saturating comparison exact.
    if (num > std::numeric_limits<std::uint64_t>::max() || den > std::numeric_limits<std::uint64_t>::max())
        throw CapacityError("lambda^n numerator/denominator must fit in 64 bits");
    PolyBound bound;
    bound.n = n;
    bound.a = den;
    bound.scale = num;
    return bound;
}

std::vector<std::uint64_t> sorted_checkpoints(std::vector<std::uint64_t> cps, std::uint64_t N) {
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    for (auto m : cps)
        if (m < 1 || m > N) throw ParameterError("checkpoint " + std::to_string(m) + " outside [1, N]");
    return cps;
}

}  // namespace

DensityReport empirical_density(unsigned n, std::uint64_t N, DensityMode mode, std::optional<Lambda> lambda,
                                std::vector<std::uint64_t> checkpoints, unsigned threads) {
    if (n < 1) throw ParameterError("n must be >= 1");
    if (N < 1) throw ParameterError("N must be >= 1");
    DensityReport report;
    report.n = n;
    report.N = N;
    report.mode = mode;
    report.lambda = lambda;

    RangeQuery query;
    query.lo = 1;
    query.hi = N;
    query.n = n;
    query.threads = threads;
    query.checkpoints = sorted_checkpoints(std::move(checkpoints), N);
    switch (mode) {
        case DensityMode::Prop16Full:
        case DensityMode::Prop16Weak:
            query.key = SieveKey::LargestPrimePower;
            query.bound = qualifying_bound(n, mode == DensityMode::Prop16Full ? Mode::Full : Mode::Weak);
            break;
        case DensityMode::LambdaPrimePower:
        case DensityMode::LambdaPrime:
            if (!lambda) throw ParameterError(to_string(mode) + " requires lambda");
            query.key = mode == DensityMode::LambdaPrime ? SieveKey::LargestPrime : SieveKey::LargestPrimePower;
            query.bound = lambda_bound(n, *lambda);
            break;
    }
    const auto result = sieve_range(query);
    report.count = result.count;
    report.empirical = static_cast<double>(result.count) / static_cast<double>(N);
    report.theoretical = n <= 10 ? theoretical_density(n) : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t c = 0; c < query.checkpoints.size(); ++c)
        report.samples.emplace_back(query.checkpoints[c], result.checkpoint_counts[c]);
    return report;
}

std::string trajectory_csv(const DensityReport& report) {
    std::ostringstream out;
    out << "m,count,empirical,theoretical\n";
    char line[128];
    for (auto [m, count] : report.samples) {
        std::snprintf(line, sizeof line, "%llu,%llu,%.17g,%.17g\n", static_cast<unsigned long long>(m),
                      static_cast<unsigned long long>(count), static_cast<double>(count) / static_cast<double>(m),
                      report.theoretical);
        out << line;
    }
    return out.str();
}

IhcReport ihc_fraction(unsigned n, std::uint64_t N, std::uint64_t range_lo, unsigned threads) {
    if (range_lo < 1 || range_lo > N) throw ParameterError("ihc_fraction: need 1 <= range_lo <= N");
    RangeQuery query;
    query.lo = range_lo;
    query.hi = N;
    query.n = n;
    query.key = SieveKey::SmallestCoprimePrime;
    query.bound = qualifying_bound(n, Mode::Full);
    query.threads = threads;
    IhcReport report;
    report.n = n;
    report.N = N;
    report.range_lo = range_lo;
    report.count = sieve_range(query).count;
    report.fraction = static_cast<double>(report.count) / static_cast<double>(N - range_lo + 1);
    return report;
}

PrimePowerBound prime_power_bound(unsigned n, std::uint64_t x, const Lambda& lambda) {
    if (n < 1) throw ParameterError("n must be >= 1");
    const auto [num, den] = lambda.power(n);
    const std::uint64_t root = iroot(x, n);
    CompensatedSum small, large;
    for (std::uint32_t p : small_primes(static_cast<std::uint32_t>(iroot(x, 2)))) {
        for (u128 q = u128{p} * p; q <= x; q *= p) {
            const auto qd = static_cast<double>(static_cast<std::uint64_t>(q));
            if (q <= root)
                small.add(std::pow(qd, static_cast<double>(n - 1)));
            else
                large.add(1.0 / qd);
        }
    }
    PrimePowerBound bound;
    const double inv_lambda_n = static_cast<double>(den) / static_cast<double>(num);
    bound.small_over_x = inv_lambda_n * small.value() / static_cast<double>(x);
    bound.large_sum = large.value();
    return bound;
}

std::vector<DiagnosticRow> convergence_diagnostics(unsigned n, const std::vector<std::uint64_t>& checkpoints,
                                                   unsigned threads, std::optional<Lambda> bound_lambda) {
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw ParameterError("checkpoints must be ascending");
    for (auto m : checkpoints)
        if (m < 1) throw ParameterError("checkpoints must be >= 1");
    const auto pp = prime_power_counts(checkpoints, threads);
    std::vector<DiagnosticRow> rows;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        DiagnosticRow row;
        row.m = checkpoints[c];
        row.prime_powers = pp[c];
        row.prime_power_ratio = static_cast<double>(pp[c]) / static_cast<double>(row.m);
        row.mertens = mertens_sum(row.m, n, threads).sum;
        if (bound_lambda) row.bound = prime_power_bound(n, row.m, *bound_lambda);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cycledeg
