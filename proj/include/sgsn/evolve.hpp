#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "observables.hpp"
#include "params.hpp"
#include "potentials.hpp"
#include "spinor.hpp"
#include "tridiag.hpp"

namespace sgsn {

struct StepperState {
    SpinorField field;
    double time = 0.0;
    long step_index = 0;
    PotentialField last_potential;
};

namespace detail {

// One Crank-Nicolson solve for a single spin component with a frozen
// potential: (1 + i dt/2 H) chi' = (1 - i dt/2 H) chi, H = -(1/2m) D2 + V,
// second-order central stencil, identity rows pinning the Dirichlet ends.
inline std::vector<cplx> cn_component_step(const std::vector<cplx>& chi,
                                           const std::vector<double>& v, const Grid& grid,
                                           double m_tilde, double dt) {
    const std::size_t n = grid.n;
    const double kin = 1.0 / (2.0 * m_tilde * grid.dz * grid.dz);
    const cplx mu(0.0, 0.5 * dt);

    TridiagonalSystem sys;
    sys.diag.resize(n);
    sys.lower.assign(n - 1, -mu * kin);
    sys.upper.assign(n - 1, -mu * kin);
    sys.rhs.resize(n);
    for (std::size_t j = 0; j < n; ++j) sys.diag[j] = 1.0 + mu * (2.0 * kin + v[j]);
    sys.diag[0] = sys.diag[n - 1] = 1.0;
    sys.upper[0] = 0.0;
    sys.lower[n - 2] = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const cplx hchi =
            -kin * (chi[j + 1] + chi[j - 1]) + (2.0 * kin + v[j]) * chi[j];
        sys.rhs[j] = chi[j] - mu * hchi;
    }
    sys.rhs[0] = sys.rhs[n - 1] = 0.0;
    return thomas_solve(sys);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

} // namespace detail

// Advance one step dt: potentials from the current density drive a predictor
// solve; each corrector pass recenters the potential on the averaged density
// (rho_n + rho_provisional)/2 and re-solves from the start-of-step field.
// Correctors stop early once the gravity potential changes by < 1e-10.
inline void cn_step_inplace(StepperState& state, const SimParams& params,
                            const GravityWorkspace& ws) {
    SpinorField& f = state.field;
    const Grid& grid = f.grid;
    const double norm_before = norm(f);

    const std::vector<double> rho_n = total_density(f);
    PotentialField pot = assemble_potentials_from_density(rho_n, grid, params, ws);
    std::vector<cplx> new_p = detail::cn_component_step(f.chi_plus, pot.v_plus, grid,
                                                        params.m_tilde, params.dt);
    std::vector<cplx> new_m = detail::cn_component_step(f.chi_minus, pot.v_minus, grid,
                                                        params.m_tilde, params.dt);
    for (int it = 0; it < params.nonlinear_iters; ++it) {
        std::vector<double> rho_avg(grid.n);
        for (std::size_t j = 0; j < grid.n; ++j)
            rho_avg[j] = 0.5 * (rho_n[j] + std::norm(new_p[j]) + std::norm(new_m[j]));
        PotentialField pot_c = assemble_potentials_from_density(rho_avg, grid, params, ws);
        if (detail::max_abs_diff(pot_c.v_gravity, pot.v_gravity) < defaults::potential_exit_tol) {
            pot = std::move(pot_c);
            break;
        }
        pot = std::move(pot_c);
        new_p = detail::cn_component_step(f.chi_plus, pot.v_plus, grid, params.m_tilde, params.dt);
        new_m = detail::cn_component_step(f.chi_minus, pot.v_minus, grid, params.m_tilde,
                                          params.dt);
    }
    f.chi_plus = std::move(new_p);
    f.chi_minus = std::move(new_m);
    state.last_potential = std::move(pot);
    state.step_index += 1;
    state.time = static_cast<double>(state.step_index) * params.dt;

    const double norm_after = norm(f);
    if (!std::isfinite(norm_after) ||
        std::abs(norm_after - norm_before) > defaults::norm_step_tol)
        throw instability_error("cn_step: norm drift " +
                                std::to_string(norm_after - norm_before) + " in one step at t=" +
                                std::to_string(state.time));
}

inline StepperState cn_step(StepperState state, const SimParams& params) {
    GravityWorkspace ws(state.field.grid, params.delta,
                        params.self_gravity && params.fast_convolution);
    cn_step_inplace(state, params, ws);
    return state;
}

using Observer = std::function<void(double, const SpinorField&)>;

// Run ceil(t_max/dt) steps, observing (and recording) the initial state,
// every snapshot_stride-th step, and the final step. Instability flags the
// record as failed and keeps the rows gathered so far.
inline TrajectoryRecord evolve(SpinorField field, const SimParams& params,
                               const Observer& observer = {}, bool keep_snapshots = false) {
    params.validate(field.grid);
    const Grid grid = field.grid;
    GravityWorkspace ws(grid, params.delta, params.self_gravity && params.fast_convolution);

    TrajectoryRecord rec;
    rec.params_echo = params;

    StepperState state{std::move(field), 0.0, 0, {}};
    auto record = [&](double t) {
        const SpinorField& f = state.field;
        rec.times.push_back(t);
        rec.norms.push_back(norm(f));
        rec.populations.push_back(populations(f));
        rec.z_expect.push_back(expectation_z(f));
        const std::vector<double> rho = total_density(f);
        std::vector<double> vg;
        if (params.self_gravity)
            vg = gravity_potential_ws(rho, grid, params.m_tilde, ws, params.fast_convolution);
        else
            vg.assign(grid.n, 0.0);
        rec.energies.push_back(total_energy_with(f, params, vg));
        rec.peaks.push_back(find_peaks(rho, grid, params.min_prominence));
        if (keep_snapshots) rec.snapshots.push_back(rho);
        if (observer) observer(t, f);
    };

    record(0.0);
    const long nsteps = static_cast<long>(std::ceil(params.t_max / params.dt - 1e-12));
    for (long s = 0; s < nsteps; ++s) {
        try {
            cn_step_inplace(state, params, ws);
        } catch (const instability_error& e) {
            rec.failed = true;
            rec.failure_reason = e.what();
            break;
        }
        if ((s + 1) % params.snapshot_stride == 0 || s + 1 == nsteps) record(state.time);
    }
    rec.classification =
        classify_split(rec.peaks.back(), params.separation_threshold_value());
    return rec;
}

} // namespace sgsn
