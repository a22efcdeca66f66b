#pragma once
// Exact fixed-width helpers. All products that can exceed 64 bits go
// through unsigned __int128; overflow of the 128-bit range is detected,
// never wrapped.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "cycledeg/errors.hpp"

namespace cycledeg {

using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u128 kU128Max = ~u128{0};

inline std::optional<u128> mul_checked(u128 a, u128 b) {
    u128 r;
    if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
    return r;
}

inline std::optional<u128> add_checked(u128 a, u128 b) {
    u128 r;
    if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
    return r;
}

inline u128 mul_sat(u128 a, u128 b) { return mul_checked(a, b).value_or(kU128Max); }
inline u128 add_sat(u128 a, u128 b) { return add_checked(a, b).value_or(kU128Max); }

inline std::optional<u128> pow_checked(u128 base, unsigned exp) {
    u128 r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        auto next = mul_checked(r, base);
        if (!next) return std::nullopt;
        r = *next;
    }
    return r;
}

inline u128 pow_sat(u128 base, unsigned exp) { return pow_checked(base, exp).value_or(kU128Max); }

std::string to_string(u128 v);
std::string to_string(i128 v);

// Throwing variants for call sites where overflow means the request is
// outside the supported range.
inline u128 checked_mul(u128 a, u128 b, const char* what) {
    auto r = mul_checked(a, b);
    if (!r) throw CapacityError(std::string("128-bit overflow in ") + what);
    return *r;
}

inline u128 checked_pow(u128 base, unsigned exp, const char* what) {
    auto r = pow_checked(base, exp);
    if (!r) throw CapacityError(std::string("128-bit overflow in ") + what);
    return *r;
}

// Narrow a 128-bit value to int64, throwing when it does not fit.
inline std::int64_t narrow_i64(i128 v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw CapacityError(std::string("value does not fit in 64 bits: ") + what);
    return static_cast<std::int64_t>(v);
}

// Largest n with n! < 2^63.
inline constexpr unsigned kMaxFactorialArg = 20;

std::uint64_t factorial(unsigned n);
std::uint64_t binomial(unsigned n, unsigned k);

// floor(x^(1/k)) computed exactly, k >= 1.
std::uint64_t iroot(std::uint64_t x, unsigned k);

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        auto t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace cycledeg
