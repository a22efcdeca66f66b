#include <algorithm>

#include "cycledeg/kernels.hpp"

namespace cycledeg::kernels {
namespace {

void fold_cofactors_scalar(std::uint64_t base, std::uint32_t small_bound, FactorLanes lanes) {
    const std::size_t len = lanes.acc.size();
    for (std::size_t i = 0; i < len; ++i) {
        const auto r = static_cast<std::uint32_t>((base + i) / lanes.acc[i]);
        lanes.lpp[i] = std::max(lanes.lpp[i], r);
        lanes.lpf[i] = std::max(lanes.lpf[i], r);
        if (lanes.spfc[i] == 0 && r > small_bound) lanes.spfc[i] = r;
        if (lanes.spfc[i] == 0) lanes.spfc[i] = kExcluded;
    }
}

void or_mask_scalar(std::span<std::uint32_t> key, std::span<const std::uint32_t> mask) {
    for (std::size_t i = 0; i < key.size(); ++i) key[i] |= mask[i];
}

ClassifyCounts classify_scalar(std::span<const std::uint32_t> key, std::uint32_t sure_max,
                               std::uint32_t maybe_max, std::span<std::uint8_t> verdict) {
    maybe_max = std::max(maybe_max, sure_max);
    ClassifyCounts counts;
    for (std::size_t i = 0; i < key.size(); ++i) {
        std::uint8_t v = 0;
        if (key[i] <= sure_max) {
            v = 1;
            ++counts.sure;
        } else if (key[i] <= maybe_max) {
            v = 2;
            ++counts.maybe;
        }
        verdict[i] = v;
    }
    return counts;
}

std::size_t zero_offsets_scalar(std::span<const std::uint8_t> flags, std::span<std::uint32_t> out) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i] == 0) out[k++] = static_cast<std::uint32_t>(i);
    return k;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{fold_cofactors_scalar, or_mask_scalar, classify_scalar,
                                   zero_offsets_scalar};
    return table;
}

}  // namespace cycledeg::kernels
