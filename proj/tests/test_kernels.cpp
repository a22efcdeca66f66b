#include <random>
#include <vector>

#include "doctest.h"

#include "cycledeg/arith.hpp"
#include "cycledeg/kernels.hpp"
#include "cycledeg/sieve.hpp"

using namespace cycledeg;
using namespace cycledeg::kernels;

namespace {

// Lanes in the state the sieve leaves them: acc is the smooth part of d and
// d / acc is 1 or a single prime.
struct Lanes {
    std::vector<std::uint32_t> acc, lpp, lpf, spfc;
    FactorLanes view() { return {acc, lpp, lpf, spfc}; }
};

Lanes random_lanes(std::uint64_t base, std::size_t len, std::mt19937_64& rng) {
    Lanes l;
    std::uniform_int_distribution<int> coin(0, 3);
    for (std::size_t i = 0; i < len; ++i) {
        const std::uint64_t d = base + i;
        const auto f = factorize(d);
        std::uint64_t cof = 1;
        if (coin(rng) != 0 && !f.factors.empty() && f.factors.back().exponent == 1) cof = f.factors.back().prime;
        l.acc.push_back(static_cast<std::uint32_t>(d / cof));
        l.lpp.push_back(static_cast<std::uint32_t>(1 + rng() % 50));
        l.lpf.push_back(static_cast<std::uint32_t>(1 + rng() % 50));
        l.spfc.push_back(coin(rng) == 0 ? static_cast<std::uint32_t>(rng() % 40) : 0);
    }
    return l;
}

}  // namespace

TEST_CASE("dispatch reports a usable ISA") {
    CHECK(&kernels_for(Isa::Scalar) == &scalar_kernels());
    CHECK(isa_name(Isa::Scalar) == "scalar");
    const Isa detected = detected_isa();
    CHECK_NOTHROW(force_isa(detected));
    CHECK(active_isa() == detected);
    CHECK_NOTHROW(force_isa(Isa::Scalar));
    CHECK(active_isa() == Isa::Scalar);
    force_isa(detected);
}

TEST_CASE("avx2 kernels match scalar kernels exactly") {
    const KernelTable* simd = avx2_kernels();
    if (simd == nullptr || detected_isa() != Isa::Avx2) {
        MESSAGE("AVX2 not available; equivalence test skipped");
        return;
    }
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(99);

    SUBCASE("fold_cofactors") {
        for (std::uint64_t base : {1ULL, 1000ULL, 4'000'000'000ULL, 4'294'967'000ULL - 300}) {
            for (std::size_t len : {1u, 7u, 8u, 9u, 31u, 257u}) {
                for (std::uint32_t small : {1u, 3u, 5u, 20u}) {
                    Lanes a = random_lanes(base, len, rng);
                    Lanes b = a;
                    ref.fold_cofactors(base, small, a.view());
                    simd->fold_cofactors(base, small, b.view());
                    CHECK(a.lpp == b.lpp);
                    CHECK(a.lpf == b.lpf);
                    CHECK(a.spfc == b.spfc);
                }
            }
        }
    }

    SUBCASE("or_mask") {
        for (std::size_t len : {0u, 3u, 8u, 17u, 1000u}) {
            std::vector<std::uint32_t> k1(len), mask(len);
            for (std::size_t i = 0; i < len; ++i) {
                k1[i] = static_cast<std::uint32_t>(rng());
                mask[i] = rng() % 2 ? kExcluded : 0;
            }
            auto k2 = k1;
            ref.or_mask(k1, mask);
            simd->or_mask(k2, mask);
            CHECK(k1 == k2);
        }
    }

    SUBCASE("classify") {
        const std::uint32_t edges[] = {0, 1, 1000, 0x7FFFFFFF, 0x80000000, 0xFFFFFFFE, kExcluded};
        for (std::size_t len : {0u, 5u, 8u, 33u, 4099u}) {
            std::vector<std::uint32_t> key(len);
            for (auto& k : key) k = rng() % 3 == 0 ? edges[rng() % 7] : static_cast<std::uint32_t>(rng() % 3000);
            for (std::uint32_t sure : edges) {
                for (std::uint32_t maybe : edges) {
                    std::vector<std::uint8_t> v1(len), v2(len);
                    const auto c1 = ref.classify(key, sure, maybe, v1);
                    const auto c2 = simd->classify(key, sure, maybe, v2);
                    CHECK(v1 == v2);
                    CHECK(c1.sure == c2.sure);
                    CHECK(c1.maybe == c2.maybe);
                }
            }
        }
    }

    SUBCASE("zero_offsets") {
        for (std::size_t len : {0u, 1u, 31u, 32u, 33u, 100u, 5000u}) {
            for (int density : {0, 1, 2, 10}) {
                std::vector<std::uint8_t> flags(len);
                for (auto& f : flags) f = density == 0 ? 1 : (rng() % density == 0 ? 0 : 1);
                std::vector<std::uint32_t> o1(len), o2(len);
                const auto n1 = ref.zero_offsets(flags, o1);
                const auto n2 = simd->zero_offsets(flags, o2);
                REQUIRE(n1 == n2);
                o1.resize(n1);
                o2.resize(n2);
                CHECK(o1 == o2);
            }
        }
    }
}

TEST_CASE("sieve results agree across ISAs") {
    if (detected_isa() != Isa::Avx2) return;
    const Isa saved = active_isa();
    RangeQuery q;
    q.lo = 1;
    q.hi = 3'000'000;
    q.n = 3;
    q.key = SieveKey::LargestPrimePower;
    q.bound.n = 3;
    q.bound.a = 1;
    q.bound.scale = 100;  // 100 q^3 <= d
    q.collect_hits = true;
    q.checkpoints = {10, 1000, 2'500'000};
    force_isa(Isa::Scalar);
    const auto a = sieve_range(q);
    const auto rows_a = factor_rows(4'000'000'000ULL, 4'000'300'000ULL, 5);
    force_isa(Isa::Avx2);
    const auto b = sieve_range(q);
    const auto rows_b = factor_rows(4'000'000'000ULL, 4'000'300'000ULL, 5);
    force_isa(saved);
    CHECK(a.count == b.count);
    CHECK(a.hits == b.hits);
    CHECK(a.checkpoint_counts == b.checkpoint_counts);
    REQUIRE(rows_a.size() == rows_b.size());
    for (std::size_t i = 0; i < rows_a.size(); ++i) {
        CHECK(rows_a[i].lpp == rows_b[i].lpp);
        CHECK(rows_a[i].spfc == rows_b[i].spfc);
    }
}
