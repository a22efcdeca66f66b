// AVX2 variants. This translation unit is compiled with -mavx2; nothing in
// it may run before the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <cstring>

#include "cycledeg/kernels.hpp"

namespace cycledeg::kernels {
namespace {

// uint32 lanes <-> double lanes, exact for the full unsigned range.
inline __m256d u32_to_pd(__m128i v) {
    const __m128i flipped = _mm_xor_si128(v, _mm_set1_epi32(static_cast<int>(0x80000000u)));
    return _mm256_add_pd(_mm256_cvtepi32_pd(flipped), _mm256_set1_pd(2147483648.0));
}

inline __m128i pd_to_u32(__m256d v) {
    const __m128i shifted = _mm256_cvttpd_epi32(_mm256_sub_pd(v, _mm256_set1_pd(2147483648.0)));
    return _mm_xor_si128(shifted, _mm_set1_epi32(static_cast<int>(0x80000000u)));
}

// a <= b for unsigned lanes
inline __m256i le_epu32(__m256i a, __m256i b) { return _mm256_cmpeq_epi32(_mm256_min_epu32(a, b), a); }

void fold_cofactors_avx2(std::uint64_t base, std::uint32_t small_bound, FactorLanes lanes) {
    const std::size_t len = lanes.acc.size();
    const __m256d lane_lo = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d lane_hi = _mm256_setr_pd(4.0, 5.0, 6.0, 7.0);
    const __m256i zero = _mm256_setzero_si256();
    const __m256i bound1 = _mm256_set1_epi32(static_cast<int>(small_bound + 1));
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        const __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&lanes.acc[i]));
        const __m256d d0 = _mm256_set1_pd(static_cast<double>(base + i));
        const __m256d q_lo = _mm256_div_pd(_mm256_add_pd(d0, lane_lo), u32_to_pd(_mm256_castsi256_si128(acc)));
        const __m256d q_hi = _mm256_div_pd(_mm256_add_pd(d0, lane_hi), u32_to_pd(_mm256_extracti128_si256(acc, 1)));
        const __m256i r = _mm256_set_m128i(pd_to_u32(q_hi), pd_to_u32(q_lo));

        auto* lpp = reinterpret_cast<__m256i*>(&lanes.lpp[i]);
        auto* lpf = reinterpret_cast<__m256i*>(&lanes.lpf[i]);
        auto* spfc = reinterpret_cast<__m256i*>(&lanes.spfc[i]);
        _mm256_storeu_si256(lpp, _mm256_max_epu32(_mm256_loadu_si256(lpp), r));
        _mm256_storeu_si256(lpf, _mm256_max_epu32(_mm256_loadu_si256(lpf), r));

        __m256i s = _mm256_loadu_si256(spfc);
        const __m256i unset = _mm256_cmpeq_epi32(s, zero);
        const __m256i large = le_epu32(bound1, r);
        s = _mm256_blendv_epi8(s, r, _mm256_and_si256(unset, large));
        s = _mm256_or_si256(s, _mm256_cmpeq_epi32(s, zero));
        _mm256_storeu_si256(spfc, s);
    }
    if (i < len) {
        FactorLanes tail{lanes.acc.subspan(i), lanes.lpp.subspan(i), lanes.lpf.subspan(i), lanes.spfc.subspan(i)};
        scalar_kernels().fold_cofactors(base + i, small_bound, tail);
    }
}

void or_mask_avx2(std::span<std::uint32_t> key, std::span<const std::uint32_t> mask) {
    std::size_t i = 0;
    for (; i + 8 <= key.size(); i += 8) {
        auto* k = reinterpret_cast<__m256i*>(&key[i]);
        const auto m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&mask[i]));
        _mm256_storeu_si256(k, _mm256_or_si256(_mm256_loadu_si256(k), m));
    }
    for (; i < key.size(); ++i) key[i] |= mask[i];
}

ClassifyCounts classify_avx2(std::span<const std::uint32_t> key, std::uint32_t sure_max,
                             std::uint32_t maybe_max, std::span<std::uint8_t> verdict) {
    maybe_max = std::max(maybe_max, sure_max);
    const __m256i sure = _mm256_set1_epi32(static_cast<int>(sure_max));
    const __m256i maybe = _mm256_set1_epi32(static_cast<int>(maybe_max));
    const __m256i two = _mm256_set1_epi32(2);
    // byte 0 of each 32-bit lane into the low 4 bytes of each 128-bit half
    const __m256i gather = _mm256_setr_epi8(0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
                                            0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1);
    ClassifyCounts counts;
    std::size_t i = 0;
    for (; i + 8 <= key.size(); i += 8) {
        const __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&key[i]));
        const __m256i in_sure = le_epu32(k, sure);
        const __m256i in_maybe = le_epu32(k, maybe);
        // in_sure implies in_maybe: 2 - 1 = 1 for sure, 2 for maybe-only, 0 otherwise
        const __m256i v = _mm256_add_epi32(_mm256_and_si256(in_maybe, two), in_sure);
        const __m256i packed = _mm256_shuffle_epi8(v, gather);
        const auto lo = static_cast<std::uint32_t>(_mm256_extract_epi32(packed, 0));
        const auto hi = static_cast<std::uint32_t>(_mm256_extract_epi32(packed, 4));
        std::memcpy(&verdict[i], &lo, 4);
        std::memcpy(&verdict[i + 4], &hi, 4);
        const int ns = __builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(in_sure))));
        const int nm = __builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(in_maybe))));
        counts.sure += static_cast<std::size_t>(ns);
        counts.maybe += static_cast<std::size_t>(nm - ns);
    }
    if (i < key.size()) {
        const auto tail = scalar_kernels().classify(key.subspan(i), sure_max, maybe_max, verdict.subspan(i));
        counts.sure += tail.sure;
        counts.maybe += tail.maybe;
    }
    return counts;
}

std::size_t zero_offsets_avx2(std::span<const std::uint8_t> flags, std::span<std::uint32_t> out) {
    const __m256i zero = _mm256_setzero_si256();
    std::size_t k = 0;
    std::size_t i = 0;
    for (; i + 32 <= flags.size(); i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&flags[i]));
        auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(v, zero)));
        while (mask != 0) {
            out[k++] = static_cast<std::uint32_t>(i + static_cast<std::size_t>(__builtin_ctz(mask)));
            mask &= mask - 1;
        }
    }
    for (; i < flags.size(); ++i)
        if (flags[i] == 0) out[k++] = static_cast<std::uint32_t>(i);
    return k;
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{fold_cofactors_avx2, or_mask_avx2, classify_avx2, zero_offsets_avx2};
    return &table;
}

}  // namespace cycledeg::kernels
