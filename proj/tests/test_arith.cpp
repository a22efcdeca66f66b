#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cycledeg/arith.hpp"
#include "cycledeg/errors.hpp"

using namespace cycledeg;

namespace {

std::vector<bool> bool_sieve(std::uint64_t m) {
    std::vector<bool> composite(m + 1, false);
    composite[0] = composite[1] = true;
    for (std::uint64_t p = 2; p * p <= m; ++p)
        if (!composite[p])
            for (std::uint64_t k = p * p; k <= m; k += p) composite[k] = true;
    return composite;
}

}  // namespace

TEST_CASE("spf table small cases") {
    auto t = build_spf_table(10);
    const std::uint32_t expect[] = {2, 3, 2, 5, 2, 7, 2, 3, 2};
    for (std::uint64_t m = 2; m <= 10; ++m) CHECK(t[m] == expect[m - 2]);
    CHECK(build_spf_table(2)[2] == 2);
    CHECK_THROWS_AS(build_spf_table(1), CapacityError);
    CHECK_THROWS_AS(build_spf_table(kMaxSpfLimit + 1), CapacityError);
}

TEST_CASE("spf table to 10^6 agrees with an independent sieve") {
    const std::uint64_t m = 1'000'000;
    auto t = build_spf_table(m);
    auto composite = bool_sieve(m);
    std::uint64_t fixed = 0;
    for (std::uint64_t k = 2; k <= m; ++k) {
        const std::uint32_t p = t[k];
        if (p == k) ++fixed;
        REQUIRE(k % p == 0);
        REQUIRE(!composite[p]);
        CHECK((p == k) == !composite[k]);
    }
    CHECK(fixed == 78498);
}

TEST_CASE("factorize examples") {
    auto f = factorize(5005);
    CHECK(f.factors == std::vector<PrimeFactor>{{5, 1}, {7, 1}, {11, 1}, {13, 1}});
    CHECK(f.largest_prime_power == 13);
    auto one = factorize(1);
    CHECK(one.factors.empty());
    CHECK(one.largest_prime_power == 1);
    auto g = factorize(720);
    CHECK(g.factors == std::vector<PrimeFactor>{{2, 4}, {3, 2}, {5, 1}});
    CHECK(g.largest_prime_power == 16);
    CHECK(largest_prime_power(5005) == 13);
    CHECK(largest_prime_power(1) == 1);
    CHECK(largest_prime_power(53599) == 31);
}

TEST_CASE("factorize matches trial division on random d <= 10^9") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::uint64_t> dist(1, 1'000'000'000);
    auto table = build_spf_table(1'000'000);
    for (int t = 0; t < 10'000; ++t) {
        const std::uint64_t d = dist(rng);
        const auto f = factorize(d);
        std::uint64_t prod = 1;
        bool lpp_listed = false;
        for (auto [p, e] : f.factors) {
            prod *= oracle::ipow(p, e);
            if (oracle::ipow(p, e) == f.largest_prime_power) lpp_listed = true;
        }
        REQUIRE(prod == d);
        CHECK(d % f.largest_prime_power == 0);
        CHECK((d == 1 || lpp_listed));
        if (t < 2000) {
            const auto ref = oracle::factor(d);
            REQUIRE(ref.size() == f.factors.size());
            for (std::size_t i = 0; i < ref.size(); ++i) {
                CHECK(ref[i].first == f.factors[i].prime);
                CHECK(ref[i].second == f.factors[i].exponent);
            }
        }
        if (d <= table.limit()) CHECK(factorize(d, &table).factors == f.factors);
    }
}

TEST_CASE("factorize adversarial inputs near 2^63") {
    const std::uint64_t p1 = 3037000493ULL;  // primes just below 2^31.5
    const std::uint64_t p2 = 3037000453ULL;
    REQUIRE(oracle::is_prime(p1));
    REQUIRE(oracle::is_prime(p2));
    auto f = factorize(p1 * p2);
    CHECK(f.factors == std::vector<PrimeFactor>{{p2, 1}, {p1, 1}});
    auto sq = factorize(p1 * p1);
    CHECK(sq.factors == std::vector<PrimeFactor>{{p1, 2}});
    CHECK(sq.largest_prime_power == p1 * p1);

    const std::uint64_t big_prime = 9223372036854775783ULL;  // largest prime below 2^63
    CHECK(is_prime(big_prime));
    CHECK(factorize(big_prime).factors == std::vector<PrimeFactor>{{big_prime, 1}});
    const std::uint64_t m = (std::uint64_t{1} << 63) - 1;  // 7^2 * 73 * 127 * 337 * 92737 * 649657
    auto g = factorize(m);
    std::uint64_t prod = 1;
    for (auto [p, e] : g.factors) {
        CHECK(is_prime(p));
        prod *= oracle::ipow(p, e);
    }
    CHECK(prod == m);
    CHECK(g.factors.front() == PrimeFactor{7, 2});
    CHECK(g.largest_prime_power == 649657);
}

TEST_CASE("is_prime agrees with trial division") {
    for (std::uint64_t m = 0; m < 20'000; ++m) REQUIRE(is_prime(m) == oracle::is_prime(m));
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> dist(1'000'000'000'000ULL, 1'000'001'000'000ULL);
    for (int t = 0; t < 300; ++t) {
        const auto m = dist(rng);
        CHECK(is_prime(m) == oracle::is_prime(m));
    }
    // strong pseudoprimes to several small bases
    CHECK_FALSE(is_prime(3215031751ULL));
    CHECK_FALSE(is_prime(3825123056546413051ULL));
}

TEST_CASE("euler_phi") {
    CHECK(euler_phi(6) == 2);
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(720) == 192);
    for (std::uint64_t m = 1; m < 300; ++m) {
        std::uint64_t units = 0;
        for (std::uint64_t a = 1; a <= m; ++a) units += oracle::gcd(a, m) == 1;
        CHECK(euler_phi(m) == units);
    }
}

TEST_CASE("prime power counts") {
    CHECK(prime_power_count(10) == 7);
    CHECK(prime_power_count(100) == 35);
    CHECK(prime_power_count(1) == 0);
    CHECK(prime_power_count(1'000'000) == 78734);
}

TEST_CASE("prime power count equals sum of prime counts at roots for all m <= 10^5") {
    const std::uint64_t m_max = 100'000;
    auto composite = bool_sieve(m_max);
    std::vector<std::uint64_t> pi(m_max + 1, 0);
    for (std::uint64_t k = 1; k <= m_max; ++k) pi[k] = pi[k - 1] + (!composite[k]);

    // direct enumeration: mark every p^e
    std::vector<std::uint8_t> is_pp(m_max + 1, 0);
    for (std::uint64_t p = 2; p <= m_max; ++p)
        if (!composite[p])
            for (std::uint64_t q = p; q <= m_max; q *= p) is_pp[q] = 1;

    std::uint64_t running = 0;
    std::vector<std::uint64_t> sampled_m;
    std::vector<std::uint64_t> sampled_direct;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        running += is_pp[m];
        std::uint64_t via_roots = 0;
        for (unsigned e = 1; (std::uint64_t{1} << e) <= m; ++e) {
            auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(m), 1.0 / e));
            while (r > 1 && oracle::ipow(r, e) > m) --r;
            while (oracle::ipow(r + 1, e) <= m) ++r;
            via_roots += pi[r];
        }
        REQUIRE(running == via_roots);
        if (m % 997 == 0 || m < 50) {
            sampled_m.push_back(m);
            sampled_direct.push_back(running);
        }
    }
    CHECK(prime_power_counts(sampled_m) == sampled_direct);
}

TEST_CASE("prime power ratio decreases at decades") {
    const std::vector<std::uint64_t> ms{1000, 10'000, 100'000, 1'000'000};
    auto counts = prime_power_counts(ms);
    for (std::size_t i = 1; i < ms.size(); ++i)
        CHECK(static_cast<double>(counts[i]) / ms[i] <= static_cast<double>(counts[i - 1]) / ms[i - 1]);
}

TEST_CASE("mertens sum examples") {
    CHECK(mertens_sum(10, 1).sum == 0.0);
    CHECK(mertens_sum(10, 1).prime_count == 0);
    auto r = mertens_sum(100, 2);
    CHECK(r.prime_count == 21);
    CHECK(r.sum == doctest::Approx(oracle::reciprocal_prime_sum(10, 100)).epsilon(1e-14));
    CHECK(r.sum == doctest::Approx(0.6266267248583948).epsilon(1e-14));
    for (std::uint64_t x : {1000ULL, 54321ULL, 200'000ULL}) {
        for (unsigned n : {2u, 3u, 5u}) {
            const auto lo = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(x), 1.0 / n) + 1e-9));
            CHECK(mertens_sum(x, n).sum == doctest::Approx(oracle::reciprocal_prime_sum(lo, x)).epsilon(1e-13));
        }
    }
}

TEST_CASE("mertens sum grows along decades") {
    double prev = 0.0;
    for (std::uint64_t x = 100; x <= 100'000'000; x *= 10) {
        const double s = mertens_sum(x, 3).sum;
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("mertens sum drops when the lower cut passes a prime") {
    // Moving x from 120 to 121 adds no prime to the top but removes 11 from
    // the bottom, so the sum is not monotone pointwise.
    CHECK(mertens_sum(121, 2).sum < mertens_sum(120, 2).sum);
}

TEST_CASE("mertens sum is independent of thread count") {
    const auto a = mertens_sum(20'000'000, 3, 1);
    const auto b = mertens_sum(20'000'000, 3, 4);
    const auto c = mertens_sum(20'000'000, 3, 16);
    CHECK(a.sum == b.sum);
    CHECK(a.sum == c.sum);
    CHECK(a.prime_count == c.prime_count);
}

TEST_CASE("compensated sum") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-16);
    CHECK(s.value() == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
    CHECK(s.value() != 1.0);
}

TEST_CASE("primes in range") {
    auto ps = primes_in_range(90, 110);
    CHECK(ps == std::vector<std::uint64_t>{97, 101, 103, 107, 109});
    CHECK(prime_count(1'000'000) == 78498);
    CHECK(prime_count(1) == 0);
}
