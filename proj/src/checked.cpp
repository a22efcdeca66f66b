#include "cycledeg/checked.hpp"

#include <algorithm>
#include <cmath>

namespace cycledeg {

std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string(i128 v) {
    if (v >= 0) return to_string(static_cast<u128>(v));
    return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
}

std::uint64_t factorial(unsigned n) {
    if (n > kMaxFactorialArg) throw CapacityError("n! does not fit in 64 bits for n = " + std::to_string(n));
    std::uint64_t r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

std::uint64_t binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r = checked_mul(r, n - k + i, "binomial") / i;
        if (r > ~std::uint64_t{0}) throw CapacityError("binomial does not fit in 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t iroot(std::uint64_t x, unsigned k) {
    if (k == 0) throw ParameterError("iroot: k must be >= 1");
    if (k == 1 || x < 2) return x;
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(x), 1.0L / k));
    while (r > 0 && pow_sat(r, k) > x) --r;
    while (pow_sat(r + 1, k) <= x) ++r;
    return r;
}

}  // namespace cycledeg
