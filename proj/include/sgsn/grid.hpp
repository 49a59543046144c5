#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"

namespace sgsn {

// Uniform 1D grid on [-z_max, z_max], endpoints included.
// Points are built as z_j = (j*z_max - (n-1-j)*z_max)/(n-1), which makes the
// mirror identity z_{n-1-j} = -z_j exact in floating point; the symmetry and
// mirror-covariance tests rely on that.
struct Grid {
    double z_max = 0.0;
    double dz = 0.0;
    std::size_t n = 0;
    std::vector<double> z_values;

    std::size_t size() const { return n; }
    double operator[](std::size_t j) const { return z_values[j]; }
};

inline Grid make_grid(double z_max, double dz) {
    if (!(z_max > 0.0) || !std::isfinite(z_max))
        throw parameter_error("make_grid: z_max must be positive and finite");
    if (!(dz > 0.0) || !std::isfinite(dz) || !(dz < z_max))
        throw parameter_error("make_grid: dz must satisfy 0 < dz < z_max");
    Grid g;
    g.z_max = z_max;
    g.n = static_cast<std::size_t>(std::llround(2.0 * z_max / dz)) + 1;
    g.dz = 2.0 * z_max / static_cast<double>(g.n - 1);
    g.z_values.resize(g.n);
    const double nm1 = static_cast<double>(g.n - 1);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double a = static_cast<double>(j);
        g.z_values[j] = (a * z_max - (nm1 - a) * z_max) / nm1;
    }
    return g;
}

// Trapezoidal quadrature weights: dz everywhere, dz/2 at the endpoints.
inline std::vector<double> trapezoid_weights(const Grid& grid) {
    std::vector<double> w(grid.n, grid.dz);
    w.front() = 0.5 * grid.dz;
    w.back() = 0.5 * grid.dz;
    return w;
}

} // namespace sgsn
