#include "cycledeg/dickman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cycledeg/arith.hpp"
#include "cycledeg/checked.hpp"
#include "cycledeg/errors.hpp"

namespace cycledeg {
namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 5> kGlNode = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                           0.9061798459386640};
constexpr std::array<double, 5> kGlWeight = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                             0.4786286704993665, 0.2369268850561891};
constexpr int kInterpPoints = 6;
constexpr std::size_t kMinCellsPerUnit = 16;
constexpr std::size_t kMaxCellsPerUnit = std::size_t{1} << 14;

// rho on a uniform grid with `m` cells per unit interval.
class Grid {
public:
    Grid(std::size_t cells_per_unit, double u_max)
        : m_(cells_per_unit), h_(1.0 / static_cast<double>(cells_per_unit)) {
        const auto units = static_cast<std::size_t>(std::ceil(u_max));
        v_.assign(units * m_ + 1, 1.0);
        for (std::size_t k = m_; k + 1 < v_.size(); ++k) v_[k + 1] = v_[k] - integral(k, 1.0);
    }

    std::size_t cells_per_unit() const { return m_; }
    double node(std::size_t k) const { return v_[k]; }
    std::size_t size() const { return v_.size(); }

    double at(double u) const {
        if (u <= 1.0) return 1.0;
        const double pos = u * static_cast<double>(m_);
        auto k = static_cast<std::size_t>(std::floor(pos));
        k = std::min(k, v_.size() - 1);
        const double frac = pos - static_cast<double>(k);
        if (frac == 0.0) return v_[k];
        return v_[k] - integral(k, frac);
    }

private:
    // rho(s) for s inside unit interval [unit, unit+1], interpolated from
    // that interval's nodes only.
    double delayed(double s, std::size_t unit) const {
        if (unit == 0) return 1.0;
        const std::size_t first_node = unit * m_;
        const double pos = (s - static_cast<double>(unit)) * static_cast<double>(m_);
        auto start = static_cast<std::ptrdiff_t>(std::floor(pos)) - (kInterpPoints / 2 - 1);
        start = std::clamp<std::ptrdiff_t>(start, 0, static_cast<std::ptrdiff_t>(m_) + 1 - kInterpPoints);
        double result = 0.0;
        for (int a = 0; a < kInterpPoints; ++a) {
            double w = 1.0;
            const double xa = static_cast<double>(start + a);
            for (int b = 0; b < kInterpPoints; ++b) {
                if (b == a) continue;
                const double xb = static_cast<double>(start + b);
                w *= (pos - xb) / (xa - xb);
            }
            result += w * v_[first_node + static_cast<std::size_t>(start + a)];
        }
        return result;
    }

    // \int_{t0}^{t0 + frac*h} rho(t-1)/t dt with t0 = k*h >= 1.
    double integral(std::size_t k, double frac) const {
        const double t0 = static_cast<double>(k) * h_;
        const double width = frac * h_;
        const std::size_t unit = k / m_ - 1;  // unit interval holding t - 1
        double sum = 0.0;
        for (std::size_t g = 0; g < kGlNode.size(); ++g) {
            const double t = t0 + 0.5 * width * (kGlNode[g] + 1.0);
            sum += kGlWeight[g] * delayed(t - 1.0, unit) / t;
        }
        return 0.5 * width * sum;
    }

    std::size_t m_;
    double h_;
    std::vector<double> v_;
};

void check_tol(double tol) {
    if (!(tol >= kDickmanMinTol)) throw ParameterError("tol must be >= 1e-12");
}

void check_u(double u) {
    if (!(u >= 0.0) || u > kDickmanMaxU) throw ParameterError("u must be in [0, 50]");
}

// Refine (doubling cells per unit) until successive grids agree to tol at
// every coarse node and, if given, at the extra point u.
struct Refined {
    Grid grid;
    double error;
};

Refined refine(double u_max, std::size_t start_cells, double tol, const double* extra_u) {
    std::size_t m = std::max(start_cells, kMinCellsPerUnit);
    Grid coarse(m, u_max);
    for (;;) {
        if (2 * m > kMaxCellsPerUnit)
            throw ParameterError("tol not reachable by grid refinement");
        Grid fine(2 * m, u_max);
        double diff = 0.0;
        for (std::size_t k = 0; k < coarse.size(); ++k) diff = std::max(diff, std::abs(coarse.node(k) - fine.node(2 * k)));
        if (extra_u != nullptr) diff = std::max(diff, std::abs(coarse.at(*extra_u) - fine.at(*extra_u)));
        if (diff <= tol) return {std::move(fine), diff};
        coarse = std::move(fine);
        m *= 2;
    }
}

}  // namespace

double rho(double u, double tol) {
    check_u(u);
    check_tol(tol);
    if (u <= 1.0) return 1.0;
    return refine(std::max(u, 1.0), kMinCellsPerUnit, tol, &u).grid.at(u);
}

DickmanTable rho_table(double u_max, double step, double tol) {
    check_u(u_max);
    check_tol(tol);
    if (!(step > 0.0)) throw ParameterError("step must be positive");
    const double per_unit = 1.0 / step;
    const double rounded = std::round(per_unit);
    if (rounded < 1.0 || std::abs(per_unit - rounded) > 1e-9 * rounded)
        throw ParameterError("step must divide 1 evenly");
    const auto sub = static_cast<std::size_t>(rounded);
    // Internal grid is a power-of-two refinement of the output grid.
    std::size_t start = sub;
    while (start < kMinCellsPerUnit) start *= 2;
    const auto refined = refine(std::max(u_max, 1.0), start, tol, nullptr);

    DickmanTable table;
    table.step = 1.0 / static_cast<double>(sub);
    table.u_max = u_max;
    table.abs_error_bound = refined.error;
    const std::size_t ratio = refined.grid.cells_per_unit() / sub;
    const auto count = static_cast<std::size_t>(std::floor(u_max * static_cast<double>(sub) + 1e-9)) + 1;
    table.values.reserve(count);
    for (std::size_t k = 0; k < count; ++k) table.values.push_back(refined.grid.node(k * ratio));
    return table;
}

std::string DickmanTable::to_csv() const {
    std::ostringstream out;
    out << "u,rho,error_bound\n";
    char line[96];
    for (std::size_t k = 0; k < values.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.3g\n", u_at(k), values[k], abs_error_bound);
        out << line;
    }
    return out.str();
}

double theoretical_density(unsigned n, double tol) {
    if (n < 1 || n > 10) throw ParameterError("theoretical_density: n must be in [1, 10]");
    const std::uint64_t fact = factorial(n);
    return static_cast<double>(euler_phi(fact)) / static_cast<double>(fact) * rho(static_cast<double>(n), tol);
}

}  // namespace cycledeg
