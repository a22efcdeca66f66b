#include "cycledeg/arith.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "cycledeg/checked.hpp"
#include "cycledeg/errors.hpp"
#include "cycledeg/sieve.hpp"

namespace cycledeg {

// ---------------------------------------------------------------------------
// SpfTable

SpfTable::SpfTable(std::uint64_t limit) : limit_(limit) {
    if (limit < 2 || limit > kMaxSpfLimit)
        throw CapacityError("SpfTable limit must be in [2, " + std::to_string(kMaxSpfLimit) + "], got " +
                            std::to_string(limit));
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    std::vector<std::uint32_t> primes;
    // Linear sieve: every composite is written exactly once, by its smallest prime.
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        const std::uint32_t cap = spf_[i];
        for (std::uint32_t p : primes) {
            if (p > cap || std::uint64_t{p} * i > limit) break;
            spf_[std::uint64_t{p} * i] = p;
        }
    }
}

SpfTable build_spf_table(std::uint64_t limit) { return SpfTable(limit); }

// ---------------------------------------------------------------------------
// Primality and factorization

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(u128{a} * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e != 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// First 12 primes as Miller-Rabin bases are deterministic below 3.3e24.
constexpr std::uint64_t kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

constexpr std::uint32_t kTrialLimit = 1u << 16;

const std::vector<std::uint32_t>& trial_primes() {
    static const auto primes = small_primes(kTrialLimit);
    return primes;
}

std::uint64_t pollard_brent(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        constexpr std::uint64_t kBatch = 128;
        auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        for (std::uint64_t r = 1; g == 1; r <<= 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(kBatch, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_large(std::uint64_t n, std::map<std::uint64_t, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    const std::uint64_t f = pollard_brent(n);
    split_large(f, out);
    split_large(n / f, out);
}

void finish(FactoredInteger& fi) {
    fi.largest_prime_power = 1;
    for (auto pw : fi.prime_powers()) fi.largest_prime_power = std::max(fi.largest_prime_power, pw);
}

}  // namespace

bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    for (std::uint64_t p : kMrBases) {
        if (m % p == 0) return m == p;
    }
    std::uint64_t d = m - 1;
    unsigned s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (std::uint64_t a : kMrBases) {
        std::uint64_t x = powmod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, m);
            if (x == m - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<std::uint64_t> FactoredInteger::prime_powers() const {
    std::vector<std::uint64_t> out;
    out.reserve(factors.size());
    for (const auto& f : factors) {
        std::uint64_t pw = 1;
        for (unsigned e = 0; e < f.exponent; ++e) pw *= f.prime;
        out.push_back(pw);
    }
    return out;
}

FactoredInteger factorize(std::uint64_t d, const SpfTable* table) {
    if (d == 0) throw ParameterError("factorize: d must be >= 1");
    FactoredInteger fi;
    fi.value = d;
    if (table != nullptr && d <= table->limit()) {
        std::uint64_t rest = d;
        while (rest > 1) {
            const std::uint64_t p = (*table)[rest];
            unsigned e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            fi.factors.push_back({p, e});
        }
        finish(fi);
        return fi;
    }
    if (table != nullptr)
        throw ParameterError("factorize: d = " + std::to_string(d) + " exceeds table limit " +
                             std::to_string(table->limit()));

    std::uint64_t rest = d;
    for (std::uint64_t p : trial_primes()) {
        if (p * p > rest) break;
        if (rest % p != 0) continue;
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        fi.factors.push_back({p, e});
    }
    if (rest > 1) {
        std::map<std::uint64_t, unsigned> large;
        split_large(rest, large);
        for (auto [p, e] : large) fi.factors.push_back({p, e});
    }
    finish(fi);
    return fi;
}

std::uint64_t largest_prime_power(std::uint64_t d) { return factorize(d).largest_prime_power; }

std::uint64_t euler_phi(std::uint64_t m) {
    if (m == 0) throw ParameterError("euler_phi: m must be >= 1");
    std::uint64_t phi = m;
    for (const auto& f : factorize(m).factors) phi = phi / f.prime * (f.prime - 1);
    return phi;
}

// ---------------------------------------------------------------------------
// Prime sieves

namespace {

void check_budget(std::uint64_t hi, std::uint64_t budget, const char* what) {
    if (hi > budget)
        throw CapacityError(std::string(what) + ": bound " + std::to_string(hi) + " exceeds sieve budget " +
                            std::to_string(budget));
}

}  // namespace

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t budget) {
    check_budget(hi, budget, "primes_in_range");
    std::vector<std::uint64_t> out;
    if (hi < 2 || hi < lo) return out;
    lo = std::max<std::uint64_t>(lo, 2);
    for_each_prime_segment(lo, hi, 1, [&](std::size_t, std::span<const std::uint64_t> primes) {
        out.insert(out.end(), primes.begin(), primes.end());
    });
    return out;
}

std::uint64_t prime_count(std::uint64_t m, unsigned threads, std::uint64_t budget) {
    check_budget(m, budget, "prime_count");
    if (m < 2) return 0;
    std::vector<std::uint64_t> per(prime_segment_count(2, m), 0);
    for_each_prime_segment(2, m, threads,
                           [&](std::size_t k, std::span<const std::uint64_t> primes) { per[k] = primes.size(); });
    std::uint64_t total = 0;
    for (auto v : per) total += v;
    return total;
}

std::vector<std::uint64_t> prime_power_counts(std::span<const std::uint64_t> checkpoints, unsigned threads,
                                              std::uint64_t budget) {
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw ParameterError("prime_power_counts: checkpoints must be ascending");
    std::vector<std::uint64_t> counts(checkpoints.size(), 0);
    if (checkpoints.empty() || checkpoints.back() < 2) return counts;
    const std::uint64_t top = checkpoints.back();
    check_budget(top, budget, "prime_power_counts");

    // Primes, per segment and checkpoint.
    const std::size_t segments = prime_segment_count(2, top);
    std::vector<std::vector<std::uint64_t>> per(segments);
    for_each_prime_segment(2, top, threads, [&](std::size_t k, std::span<const std::uint64_t> primes) {
        auto& row = per[k];
        row.resize(checkpoints.size());
        for (std::size_t c = 0; c < checkpoints.size(); ++c)
            row[c] = static_cast<std::uint64_t>(std::upper_bound(primes.begin(), primes.end(), checkpoints[c]) -
                                                primes.begin());
    });
    for (const auto& row : per)
        for (std::size_t c = 0; c < row.size(); ++c) counts[c] += row[c];

    // Higher powers p^e, e >= 2.
    for (std::uint32_t p : small_primes(static_cast<std::uint32_t>(iroot(top, 2)))) {
        for (u128 pw = u128{p} * p; pw <= top; pw *= p) {
            for (std::size_t c = 0; c < checkpoints.size(); ++c)
                if (pw <= checkpoints[c]) ++counts[c];
        }
    }
    return counts;
}

std::uint64_t prime_power_count(std::uint64_t m, unsigned threads, std::uint64_t budget) {
    const std::uint64_t cp[] = {m};
    return prime_power_counts(cp, threads, budget).front();
}

PrimeSumResult mertens_sum(std::uint64_t x, unsigned n, unsigned threads, std::uint64_t budget) {
    if (x < 1) throw ParameterError("mertens_sum: x must be >= 1");
    if (n < 1) throw ParameterError("mertens_sum: n must be >= 1");
    check_budget(x, budget, "mertens_sum");
    PrimeSumResult result;
    result.x = x;
    result.n = n;
    // p > x^(1/n)  <=>  p > floor(x^(1/n)) for integer p
    const std::uint64_t lo = iroot(x, n) + 1;
    if (lo > x) return result;

    struct Partial {
        CompensatedSum sum;
        std::uint64_t count = 0;
    };
    std::vector<Partial> partials(prime_segment_count(lo, x));
    for_each_prime_segment(lo, x, threads, [&](std::size_t k, std::span<const std::uint64_t> primes) {
        auto& part = partials[k];
        for (std::uint64_t p : primes) part.sum.add(1.0 / static_cast<double>(p));
        part.count = primes.size();
    });
    CompensatedSum total;
    for (const auto& part : partials) {
        total.add(part.sum);
        result.prime_count += part.count;
    }
    result.sum = total.value();
    return result;
}

}  // namespace cycledeg
