#pragma once
// Dickman function rho(u): rho = 1 on [0, 1], u rho'(u) = -rho(u - 1) for u > 1.
//
// Computed by marching unit interval by unit interval,
//   rho(u) = rho(a) - \int_a^u rho(t - 1) / t dt,
// with 5-point Gauss-Legendre per grid cell and degree-5 Lagrange
// interpolation of the delayed term from grid nodes of the previous unit
// interval (never across an integer, where rho has a derivative kink). The
// grid is refined by halving until two successive grids agree to `tol`.
// On (1, 2] the delayed term is the constant 1, so no start-up scheme is needed.

#include <cstddef>
#include <string>
#include <vector>

namespace cycledeg {

inline constexpr double kDickmanMaxU = 50.0;
inline constexpr double kDickmanMinTol = 1e-12;

struct DickmanTable {
    double step = 0.0;
    double u_max = 0.0;
    std::vector<double> values;  // values[k] = rho(k * step)
    double abs_error_bound = 0.0;

    double u_at(std::size_t k) const { return static_cast<double>(k) * step; }
    // CSV with header "u,rho,error_bound".
    std::string to_csv() const;
};

// |result - rho(u)| <= tol. Throws ParameterError for u outside [0, 50] or
// tol below 1e-12 (or when refinement cannot reach tol).
double rho(double u, double tol = 1e-9);

// rho at u = k*step, k = 0..u_max/step. 1/step must be an integer >= 1.
DickmanTable rho_table(double u_max, double step, double tol = 1e-9);

// euler_phi(n!)/n! * rho(n), 1 <= n <= 10.
double theoretical_density(unsigned n, double tol = 1e-9);

}  // namespace cycledeg
