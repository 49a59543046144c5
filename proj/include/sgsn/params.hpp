#pragma once

#include <cmath>

#include "errors.hpp"
#include "grid.hpp"

namespace sgsn {

namespace defaults {
// Feasibility-derived magnetic force: mu_B * 28 mT/m at the 0.371 nm scales.
inline constexpr double gamma_tilde = 0.0913101868604425;
inline constexpr double theta = 1.0471975511965976;  // pi/3
inline constexpr double epsilon = 2.0;
inline constexpr double delta = 0.01;
inline constexpr double dz = 0.05;
inline constexpr double dt = 0.01;
inline constexpr double z_max = 100.0;
inline constexpr double t_max = 10.0;
inline constexpr int nonlinear_iters = 2;
inline constexpr int snapshot_stride = 100;
inline constexpr double min_prominence = 0.05;
inline constexpr double potential_exit_tol = 1e-10;
inline constexpr double norm_step_tol = 1e-6;
} // namespace defaults

// Physical and numerical parameters of one run. separation_threshold <= 0
// means "use 2*epsilon" (resolved by separation_threshold_value()).
struct SimParams {
    double m_tilde = 0.0;
    double gamma_tilde = defaults::gamma_tilde;
    double theta = defaults::theta;
    double epsilon = defaults::epsilon;
    double delta = defaults::delta;
    double dt = defaults::dt;
    double t_max = defaults::t_max;
    int nonlinear_iters = defaults::nonlinear_iters;
    int snapshot_stride = defaults::snapshot_stride;
    bool self_gravity = true;       // false evolves the linear Stern-Gerlach limit
    bool fast_convolution = false;  // FFT gravity path; direct sum is the reference
    double min_prominence = defaults::min_prominence;
    double separation_threshold = 0.0;

    double separation_threshold_value() const {
        return separation_threshold > 0.0 ? separation_threshold : 2.0 * epsilon;
    }

    void validate() const {
        if (!(m_tilde > 0.0) || !std::isfinite(m_tilde))
            throw parameter_error("params: m_tilde must be positive");
        if (!(epsilon > 0.0)) throw parameter_error("params: epsilon must be positive");
        if (!(delta > 0.0)) throw parameter_error("params: delta must be positive");
        if (!(theta >= 0.0) || !(theta <= 3.14159265358979324))
            throw parameter_error("params: theta must lie in [0, pi]");
        if (!(dt > 0.0)) throw parameter_error("params: dt must be positive");
        if (!(t_max >= 0.0)) throw parameter_error("params: t_max must be non-negative");
        if (nonlinear_iters < 0) throw parameter_error("params: nonlinear_iters must be >= 0");
        if (snapshot_stride < 1) throw parameter_error("params: snapshot_stride must be >= 1");
        if (!(min_prominence >= 0.0)) throw parameter_error("params: min_prominence must be >= 0");
    }

    // Courant-style stability condition dt/dz < 1 couples time step and grid.
    void validate(const Grid& grid) const {
        validate();
        if (!(dt / grid.dz < 1.0))
            throw parameter_error("params: CFL violated, dt/dz = " + std::to_string(dt / grid.dz) +
                                  " >= 1");
    }
};

} // namespace sgsn
