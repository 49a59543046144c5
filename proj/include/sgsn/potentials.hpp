#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "params.hpp"
#include "spinor.hpp"

namespace sgsn {

// Spin-diagonal potentials: shared attractive self-gravity plus the magnetic
// tilt, v_plus = V_G - gamma*z (spin-up accelerates toward +z), v_minus =
// V_G + gamma*z.
struct PotentialField {
    std::vector<double> v_gravity;
    std::vector<double> v_plus;
    std::vector<double> v_minus;

    std::size_t size() const { return v_gravity.size(); }
};

inline std::vector<double> total_density(const SpinorField& field) {
    std::vector<double> rho(field.size());
    for (std::size_t j = 0; j < field.size(); ++j)
        rho[j] = std::norm(field.chi_plus[j]) + std::norm(field.chi_minus[j]);
    return rho;
}

// Precomputed machinery for the convolution V_G = -m^2 * sum_k w_k rho_k
// K(|j-k|) with the softened kernel K(d) = 1/sqrt((d*dz)^2 + delta^2).
// The kernel table (and the FFT image of the kernel for the fast path)
// depend only on (n, dz, delta), so a workspace is reused across steps.
struct GravityWorkspace {
    std::size_t n = 0;
    double dz = 0.0;
    double delta = 0.0;
    std::vector<double> kernel;                 // K[d], d = 0..n-1
    std::size_t m_fft = 0;                      // padded FFT size (>= 2n)
    std::vector<std::complex<double>> kernel_hat;  // FFT of the wrapped kernel

    GravityWorkspace() = default;
    GravityWorkspace(const Grid& grid, double delta_, bool with_fft) {
        if (!(delta_ > 0.0) || !std::isfinite(delta_))
            throw parameter_error("gravity: delta must be positive");
        n = grid.n;
        dz = grid.dz;
        delta = delta_;
        kernel.resize(n);
        for (std::size_t d = 0; d < n; ++d) {
            const double r = static_cast<double>(d) * dz;
            kernel[d] = 1.0 / std::sqrt(r * r + delta * delta);
        }
        if (with_fft) {
            m_fft = detail::next_pow2(2 * n);
            kernel_hat.assign(m_fft, {0.0, 0.0});
            for (std::size_t d = 0; d < n; ++d) kernel_hat[d] = kernel[d];
            for (std::size_t d = 1; d < n; ++d) kernel_hat[m_fft - d] = kernel[d];
            detail::fft_radix2(kernel_hat, false);
        }
    }
};

namespace detail {

// Direct O(N^2) sum, the reference semantics. Trapezoid weights are absorbed
// into c_k = w_k rho_k; the summation order per output point is fixed
// (k ascending in two monotone kernel passes) so results are deterministic.
inline void gravity_direct(const std::vector<double>& c, const GravityWorkspace& ws,
                           double coupling, std::vector<double>& out) {
    const std::size_t n = ws.n;
    const double* K = ws.kernel.data();
    const double* cc = c.data();
    for (std::size_t j = 0; j < n; ++j) {
        double acc0 = 0.0, acc1 = 0.0;
        // k <= j: distance j-k walks down to 0
        for (std::size_t k = 0; k <= j; ++k) acc0 += cc[k] * K[j - k];
        // k > j: distance walks up from 1
        for (std::size_t k = j + 1; k < n; ++k) acc1 += cc[k] * K[k - j];
        out[j] = coupling * (acc0 + acc1);
    }
}

// Zero-padded circular convolution; agrees with the direct sum to ~1e-14.
inline void gravity_fft(const std::vector<double>& c, const GravityWorkspace& ws, double coupling,
                        std::vector<double>& out) {
    std::vector<std::complex<double>> buf(ws.m_fft, {0.0, 0.0});
    for (std::size_t k = 0; k < ws.n; ++k) buf[k] = c[k];
    detail::fft_radix2(buf, false);
    for (std::size_t k = 0; k < ws.m_fft; ++k) buf[k] *= ws.kernel_hat[k];
    detail::fft_radix2(buf, true);
    for (std::size_t j = 0; j < ws.n; ++j) out[j] = coupling * buf[j].real();
}

} // namespace detail

inline std::vector<double> gravity_potential_ws(const std::vector<double>& density,
                                                const Grid& grid, double m_tilde,
                                                const GravityWorkspace& ws,
                                                bool fast_convolution = false) {
    if (density.size() != grid.n)
        throw parameter_error("gravity_potential: density length does not match grid");
    for (double r : density)
        if (!std::isfinite(r)) throw numeric_error("gravity_potential: non-finite density");
    const auto w = trapezoid_weights(grid);
    std::vector<double> c(grid.n);
    for (std::size_t k = 0; k < grid.n; ++k) c[k] = w[k] * density[k];
    std::vector<double> v(grid.n);
    const double coupling = -m_tilde * m_tilde;
    if (fast_convolution && ws.m_fft != 0)
        detail::gravity_fft(c, ws, coupling, v);
    else
        detail::gravity_direct(c, ws, coupling, v);
    return v;
}

inline std::vector<double> gravity_potential(const std::vector<double>& density, const Grid& grid,
                                             double m_tilde, double delta) {
    GravityWorkspace ws(grid, delta, false);
    return gravity_potential_ws(density, grid, m_tilde, ws, false);
}

inline PotentialField assemble_potentials_from_density(const std::vector<double>& density,
                                                       const Grid& grid, const SimParams& params,
                                                       const GravityWorkspace& ws) {
    PotentialField p;
    if (params.self_gravity)
        p.v_gravity = gravity_potential_ws(density, grid, params.m_tilde, ws,
                                           params.fast_convolution);
    else
        p.v_gravity.assign(grid.n, 0.0);
    p.v_plus.resize(grid.n);
    p.v_minus.resize(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double mag = params.gamma_tilde * grid.z_values[j];
        p.v_plus[j] = p.v_gravity[j] - mag;
        p.v_minus[j] = p.v_gravity[j] + mag;
    }
    return p;
}

inline PotentialField assemble_potentials(const SpinorField& field, const SimParams& params) {
    GravityWorkspace ws(field.grid, params.delta, params.fast_convolution);
    return assemble_potentials_from_density(total_density(field), field.grid, params, ws);
}

} // namespace sgsn
