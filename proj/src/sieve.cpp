#include "cycledeg/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cycledeg/arith.hpp"
#include "cycledeg/errors.hpp"
#include "cycledeg/kernels.hpp"
#include "cycledeg/parallel.hpp"

namespace cycledeg {

std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<std::uint8_t> composite(static_cast<std::size_t>(limit) + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return primes;
}

// ---------------------------------------------------------------------------
// Odd-only segmented Eratosthenes. Segment k covers values
// [lo + k*W, min(lo + (k+1)*W - 1, hi)] with W = 2 * kSieveSegment.

std::uint64_t prime_segment_width() { return 2 * kSieveSegment; }

std::size_t prime_segment_count(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) return 0;
    return static_cast<std::size_t>((hi - lo) / prime_segment_width() + 1);
}

namespace {

struct PrimeSegmentBuffers {
    std::vector<std::uint8_t> flags;
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint64_t> primes;
};

void sieve_prime_segment(std::uint64_t seg_lo, std::uint64_t seg_hi, std::span<const std::uint32_t> base,
                         PrimeSegmentBuffers& buf) {
    buf.primes.clear();
    if (seg_lo <= 2 && 2 <= seg_hi) buf.primes.push_back(2);
    std::uint64_t start = std::max<std::uint64_t>(seg_lo, 3);
    if (start % 2 == 0) ++start;
    if (start > seg_hi) return;
    const std::size_t len = static_cast<std::size_t>((seg_hi - start) / 2 + 1);
    buf.flags.assign(len, 0);
    buf.offsets.resize(len);
    for (std::uint32_t p32 : base) {
        const std::uint64_t p = p32;
        if (p == 2) continue;
        if (p * p > seg_hi) break;
        std::uint64_t j = std::max(p * p, (start + p - 1) / p * p);
        if (j % 2 == 0) j += p;
        for (std::uint64_t idx = (j - start) / 2; idx < len; idx += p) buf.flags[idx] = 1;
    }
    const std::size_t found = kernels::active().zero_offsets(buf.flags, buf.offsets);
    buf.primes.reserve(buf.primes.size() + found);
    for (std::size_t k = 0; k < found; ++k) buf.primes.push_back(start + 2 * std::uint64_t{buf.offsets[k]});
}

}  // namespace

void for_each_prime_segment(std::uint64_t lo, std::uint64_t hi, unsigned threads,
                            const std::function<void(std::size_t, std::span<const std::uint64_t>)>& fn) {
    if (hi < lo) return;
    const auto root = static_cast<std::uint32_t>(iroot(hi, 2));
    const auto base = small_primes(root);
    const std::uint64_t width = prime_segment_width();
    parallel_for_index(prime_segment_count(lo, hi), threads, [&](std::size_t k) {
        thread_local PrimeSegmentBuffers buf;
        const std::uint64_t seg_lo = lo + k * width;
        const std::uint64_t seg_hi = std::min(hi, seg_lo + (width - 1));
        sieve_prime_segment(seg_lo, seg_hi, base, buf);
        fn(k, buf.primes);
    });
}

// ---------------------------------------------------------------------------

bool PolyBound::admits(std::uint64_t key, std::uint64_t d) const {
    if (n == 0) return false;
    const u128 top = pow_sat(key, n - 1);
    const u128 lhs = add_sat(add_sat(mul_sat(a, mul_sat(top, key)), mul_sat(b, top)), c);
    if (lhs == kU128Max) return false;
    return lhs <= mul_sat(scale, d);
}

std::uint64_t PolyBound::threshold(std::uint64_t d, std::uint64_t limit) const {
    if (limit == 0 || !admits(1, d)) return 0;
    std::uint64_t good = 1;
    std::uint64_t bad = limit;
    if (admits(limit, d)) return limit;
    while (bad - good > 1) {
        const std::uint64_t mid = good + (bad - good) / 2;
        (admits(mid, d) ? good : bad) = mid;
    }
    return good;
}

namespace {

struct FactorSegment {
    std::vector<std::uint32_t> acc, lpp, lpf, spfc, blocked, stamp, key;
    std::vector<std::uint8_t> verdict;

    void run(std::uint64_t seg_lo, std::uint64_t seg_hi, unsigned n, std::span<const std::uint32_t> base) {
        const auto len = static_cast<std::size_t>(seg_hi - seg_lo + 1);
        acc.assign(len, 1);
        lpp.assign(len, 1);
        lpf.assign(len, 1);
        spfc.assign(len, 0);
        blocked.assign(len, 0);
        stamp.assign(len, 0);
        for (std::uint32_t p32 : base) {
            const std::uint64_t p = p32;
            if (p * p > seg_hi && p > n) break;
            std::uint64_t top = p;
            while (top <= seg_hi / p) top *= p;
            const bool small = p <= n;
            // Descending powers: the first stamp for p at an index carries
            // the full p-part of that integer.
            for (std::uint64_t pw = top; pw >= p; pw /= p) {
                const auto pw32 = static_cast<std::uint32_t>(pw);
                for (std::uint64_t m = (seg_lo + pw - 1) / pw * pw; m <= seg_hi; m += pw) {
                    const auto i = static_cast<std::size_t>(m - seg_lo);
                    if (stamp[i] == p32) continue;
                    stamp[i] = p32;
                    acc[i] *= pw32;
                    lpp[i] = std::max(lpp[i], pw32);
                    lpf[i] = p32;
                    if (small)
                        blocked[i] = kernels::kExcluded;
                    else if (spfc[i] == 0)
                        spfc[i] = p32;
                }
            }
        }
        kernels::active().fold_cofactors(seg_lo, n, kernels::FactorLanes{acc, lpp, lpf, spfc});
    }

    void select_key(SieveKey which) {
        switch (which) {
            case SieveKey::LargestPrimePower:
                key = lpp;
                kernels::active().or_mask(key, blocked);
                break;
            case SieveKey::LargestPrime:
                key = lpf;
                kernels::active().or_mask(key, blocked);
                break;
            case SieveKey::SmallestCoprimePrime:
                key = spfc;
                break;
        }
    }
};

std::vector<std::uint32_t> factor_base(std::uint64_t hi, unsigned n) {
    const std::uint64_t limit = std::max<std::uint64_t>(iroot(hi, 2), n);
    return small_primes(static_cast<std::uint32_t>(limit));
}

void check_range(std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0) throw ParameterError("factoring sieve ranges start at 1");
    if (hi > kMaxFactorRange)
        throw CapacityError("factoring sieve range end " + std::to_string(hi) + " exceeds " +
                            std::to_string(kMaxFactorRange));
}

struct SegmentOutcome {
    std::uint64_t count = 0;
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> checkpoint_counts;
};

}  // namespace

RangeResult sieve_range(const RangeQuery& query) {
    check_range(query.lo, query.hi);
    RangeResult result;
    result.checkpoint_counts.assign(query.checkpoints.size(), 0);
    if (query.hi < query.lo) return result;

    const auto base = factor_base(query.hi, query.n);
    const std::size_t segments = static_cast<std::size_t>((query.hi - query.lo) / kFactorSegment + 1);
    std::vector<SegmentOutcome> outcomes(segments);
    constexpr std::uint64_t kKeyLimit = kernels::kExcluded - 1;

    parallel_for_index(segments, query.threads, [&](std::size_t s) {
        thread_local FactorSegment seg;
        const std::uint64_t seg_lo = query.lo + s * kFactorSegment;
        const std::uint64_t seg_hi = std::min(query.hi, seg_lo + (kFactorSegment - 1));
        seg.run(seg_lo, seg_hi, query.n, base);
        seg.select_key(query.key);
        seg.verdict.resize(seg.key.size());

        const auto sure = static_cast<std::uint32_t>(query.bound.threshold(seg_lo, kKeyLimit));
        const auto maybe = static_cast<std::uint32_t>(query.bound.threshold(seg_hi, kKeyLimit));
        const auto counts = kernels::active().classify(seg.key, sure, maybe, seg.verdict);

        SegmentOutcome& out = outcomes[s];
        out.count = counts.sure;
        if (counts.maybe > 0) {
            for (std::size_t i = 0; i < seg.verdict.size(); ++i) {
                if (seg.verdict[i] != 2) continue;
                const bool ok = query.bound.admits(seg.key[i], seg_lo + i);
                seg.verdict[i] = ok ? 1 : 0;
                out.count += ok ? 1 : 0;
            }
        }
        if (query.collect_hits) {
            out.hits.reserve(out.count);
            for (std::size_t i = 0; i < seg.verdict.size(); ++i)
                if (seg.verdict[i] == 1) out.hits.push_back(seg_lo + i);
        }
        out.checkpoint_counts.assign(query.checkpoints.size(), 0);
        for (std::size_t c = 0; c < query.checkpoints.size(); ++c) {
            const std::uint64_t m = query.checkpoints[c];
            if (m < seg_lo) continue;
            if (m >= seg_hi) {
                out.checkpoint_counts[c] = out.count;
                continue;
            }
            std::uint64_t partial = 0;
            for (std::size_t i = 0; i <= m - seg_lo; ++i) partial += seg.verdict[i] == 1;
            out.checkpoint_counts[c] = partial;
        }
    });

    for (auto& out : outcomes) {
        result.count += out.count;
        result.hits.insert(result.hits.end(), out.hits.begin(), out.hits.end());
        for (std::size_t c = 0; c < out.checkpoint_counts.size(); ++c)
            result.checkpoint_counts[c] += out.checkpoint_counts[c];
    }
    return result;
}

std::vector<FactorRow> factor_rows(std::uint64_t lo, std::uint64_t hi, unsigned n) {
    check_range(lo, hi);
    std::vector<FactorRow> rows;
    if (hi < lo) return rows;
    const auto base = factor_base(hi, n);
    FactorSegment seg;
    for (std::uint64_t seg_lo = lo; seg_lo <= hi; seg_lo += kFactorSegment) {
        const std::uint64_t seg_hi = std::min(hi, seg_lo + (kFactorSegment - 1));
        seg.run(seg_lo, seg_hi, n, base);
        for (std::size_t i = 0; i < seg.acc.size(); ++i)
            rows.push_back({seg.lpp[i], seg.lpf[i], seg.spfc[i], seg.blocked[i] == 0});
        if (seg_hi == hi) break;
    }
    return rows;
}

}  // namespace cycledeg
