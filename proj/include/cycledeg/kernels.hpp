#pragma once
// Data-parallel segment passes used by the sieves. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the active one
// is chosen at runtime from CPUID. All kernels are exact integer code, so
// every variant must produce bit-identical output.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace cycledeg::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// Best ISA supported by the running CPU (and compiled in).
Isa detected_isa();

// ISA used by the dispatching entry points below.
Isa active_isa();

// Override the dispatch choice (tests, benchmarking). Throws
// std::invalid_argument if the CPU does not support `isa`.
void force_isa(Isa isa);

// Sentinel key that never passes a classification threshold.
inline constexpr std::uint32_t kExcluded = 0xFFFFFFFFu;

// Per-integer factoring state for d = base + i after all primes up to
// sqrt(hi) have been sieved out. `acc[i]` is the product of the prime powers
// found; the cofactor d / acc[i] is 1 or a single prime.
struct FactorLanes {
    std::span<std::uint32_t> acc;
    std::span<std::uint32_t> lpp;   // largest prime power
    std::span<std::uint32_t> lpf;   // largest prime factor
    std::span<std::uint32_t> spfc;  // smallest prime factor > small_bound, 0 if none yet
};

// Folds the cofactor prime into lpp/lpf/spfc and replaces spfc == 0 by
// kExcluded. Requires base + size - 1 < 2^32.
using FoldCofactorsFn = void (*)(std::uint64_t base, std::uint32_t small_bound, FactorLanes lanes);

// key[i] |= mask[i]
using OrMaskFn = void (*)(std::span<std::uint32_t> key, std::span<const std::uint32_t> mask);

struct ClassifyCounts {
    std::size_t sure = 0;
    std::size_t maybe = 0;
};

// verdict[i] = 1 if key <= sure_max, 2 if sure_max < key <= maybe_max, else 0.
using ClassifyFn = ClassifyCounts (*)(std::span<const std::uint32_t> key, std::uint32_t sure_max,
                                      std::uint32_t maybe_max, std::span<std::uint8_t> verdict);

// Writes the offsets of zero bytes in `flags` to `out` (ascending); returns
// how many were written. `out.size()` must be >= flags.size().
using ZeroOffsetsFn = std::size_t (*)(std::span<const std::uint8_t> flags, std::span<std::uint32_t> out);

struct KernelTable {
    FoldCofactorsFn fold_cofactors;
    OrMaskFn or_mask;
    ClassifyFn classify;
    ZeroOffsetsFn zero_offsets;
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in.
const KernelTable* avx2_kernels();

const KernelTable& kernels_for(Isa isa);
const KernelTable& active();

}  // namespace cycledeg::kernels
