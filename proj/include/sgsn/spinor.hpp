#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace sgsn {

using cplx = std::complex<double>;

// Two-component wavefunction (chi_plus, chi_minus) on a shared grid.
struct SpinorField {
    Grid grid;
    std::vector<cplx> chi_plus;
    std::vector<cplx> chi_minus;

    std::size_t size() const { return grid.n; }
};

// Quadrature of the total density; equals 1 after initialization.
inline double norm(const SpinorField& field) {
    const auto w = trapezoid_weights(field.grid);
    double s = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j)
        s += w[j] * (std::norm(field.chi_plus[j]) + std::norm(field.chi_minus[j]));
    return s;
}

// Gaussian packet of half width epsilon at z=0 in the superposition
// cos(theta/2)|+> + sin(theta/2)|->, renormalized under the trapezoidal rule.
inline SpinorField init_gaussian_spinor(const Grid& grid, double epsilon, double theta) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw parameter_error("init_gaussian_spinor: epsilon must be positive");
    if (!(theta >= 0.0) || !(theta <= 3.14159265358979324))
        throw parameter_error("init_gaussian_spinor: theta must lie in [0, pi]");
    std::size_t inside = 0;
    for (std::size_t j = 0; j < grid.n; ++j)
        if (std::abs(grid.z_values[j]) <= 2.0 * epsilon) ++inside;
    if (inside < 8)
        throw parameter_error("init_gaussian_spinor: fewer than 8 grid points inside 2*epsilon");

    SpinorField f;
    f.grid = grid;
    f.chi_plus.resize(grid.n);
    f.chi_minus.resize(grid.n);
    const double cp = std::cos(0.5 * theta), sm = std::sin(0.5 * theta);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double z = grid.z_values[j];
        const double g = std::exp(-z * z / (2.0 * epsilon * epsilon));
        f.chi_plus[j] = cp * g;
        f.chi_minus[j] = sm * g;
    }
    const double nrm = norm(f);
    const double s = 1.0 / std::sqrt(nrm);
    for (std::size_t j = 0; j < grid.n; ++j) {
        f.chi_plus[j] *= s;
        f.chi_minus[j] *= s;
    }
    return f;
}

// The evolution pins the boundary values to zero; a state with visible
// endpoint amplitude means the box is too small for the packet.
inline bool boundary_amplitude_negligible(const SpinorField& f, double tol = 1e-12) {
    const std::size_t e = f.size() - 1;
    return std::abs(f.chi_plus[0]) < tol && std::abs(f.chi_minus[0]) < tol &&
           std::abs(f.chi_plus[e]) < tol && std::abs(f.chi_minus[e]) < tol;
}

} // namespace sgsn
