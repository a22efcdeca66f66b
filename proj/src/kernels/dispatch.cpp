#include <atomic>
#include <stdexcept>

#include "cycledeg/kernels.hpp"

namespace cycledeg::kernels {

#if !defined(CYCLEDEG_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(CYCLEDEG_HAVE_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<Isa>& active_slot() {
    static std::atomic<Isa> slot{detected_isa()};
    return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

Isa detected_isa() {
    static const Isa isa = (cpu_has_avx2() && avx2_kernels() != nullptr) ? Isa::Avx2 : Isa::Scalar;
    return isa;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2)
        throw std::invalid_argument("AVX2 kernels are not available on this CPU/build");
    active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels_for(Isa isa) {
    if (isa == Isa::Avx2) {
        if (detected_isa() != Isa::Avx2) throw std::invalid_argument("AVX2 kernels are not available");
        return *avx2_kernels();
    }
    return scalar_kernels();
}

const KernelTable& active() { return kernels_for(active_isa()); }

}  // namespace cycledeg::kernels
