#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "evolve.hpp"
#include "observables.hpp"
#include "params.hpp"
#include "potentials.hpp"
#include "spinor.hpp"
#include "tridiag.hpp"
#include "units.hpp"

namespace sgsn {

struct OracleReport {
    std::string name;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    bool passed = false;
    std::string details;
};

// Free-packet half-width sigma(t) = eps * sqrt(1 + (t/(m eps^2))^2).
inline double free_gaussian_width(double t, double m_tilde, double epsilon) {
    if (!(m_tilde > 0.0) || !(epsilon > 0.0))
        throw parameter_error("free_gaussian_width: m_tilde and epsilon must be positive");
    const double r = t / (m_tilde * epsilon * epsilon);
    return epsilon * std::sqrt(1.0 + r * r);
}

// Constant-force Ehrenfest trajectory of one spin branch, self-gravity off.
inline double linear_sg_expectation(double t, double gamma_tilde, double m_tilde, int branch) {
    if (!(m_tilde > 0.0)) throw parameter_error("linear_sg_expectation: m_tilde must be positive");
    if (branch != 1 && branch != -1)
        throw parameter_error("linear_sg_expectation: branch must be +1 or -1");
    return branch * gamma_tilde / (2.0 * m_tilde) * t * t;
}

namespace detail {

// Gaussian elimination with partial pivoting on a dense complex system.
// Deliberately naive: this is the oracle, clarity beats speed.
inline std::vector<cplx> dense_solve(std::vector<std::vector<cplx>> a, std::vector<cplx> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) == 0.0)
            throw singular_error("dense_solve: singular matrix at column " + std::to_string(col));
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const cplx f = a[r][col] / a[col][col];
            if (f == cplx(0.0, 0.0)) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t r = n; r-- > 0;) {
        cplx s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

// Dense CN matrices for one component: returns chi advanced by dt under the
// frozen potential v. Assembled from the stencil as full matrices, solved by
// partial-pivot elimination; shares no solver code with the production path.
inline std::vector<cplx> dense_component_step(const std::vector<cplx>& chi,
                                              const std::vector<double>& v, const Grid& grid,
                                              double m_tilde, double dt) {
    const std::size_t n = grid.n;
    const double kin = 1.0 / (2.0 * m_tilde * grid.dz * grid.dz);
    const cplx mu(0.0, 0.5 * dt);
    std::vector<std::vector<cplx>> h(n, std::vector<cplx>(n, cplx(0.0, 0.0)));
    for (std::size_t j = 1; j + 1 < n; ++j) {
        h[j][j - 1] = -kin;
        h[j][j] = 2.0 * kin + v[j];
        h[j][j + 1] = -kin;
    }
    std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n, cplx(0.0, 0.0)));
    std::vector<cplx> b(n, cplx(0.0, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        a[r][r] = 1.0;
        for (std::size_t c = 0; c < n; ++c) a[r][c] += mu * h[r][c];
        cplx hchi(0.0, 0.0);
        for (std::size_t c = 0; c < n; ++c) hchi += h[r][c] * chi[c];
        b[r] = chi[r] - mu * hchi;
    }
    for (std::size_t c = 0; c < n; ++c) a[0][c] = a[n - 1][c] = 0.0;
    a[0][0] = a[n - 1][n - 1] = 1.0;
    b[0] = b[n - 1] = 0.0;
    return dense_solve(std::move(a), std::move(b));
}

} // namespace detail

// One dt step of both components with the potential frozen, via dense solves.
// Small grids only: the oracle is deliberately brute-force.
inline SpinorField dense_reference_step(const SpinorField& field, const PotentialField& pot,
                                        const SimParams& params) {
    if (field.grid.n > 256)
        throw parameter_error("dense_reference_step: grid larger than 256 points");
    if (params.dt == 0.0) return field;
    SpinorField out = field;
    out.chi_plus = detail::dense_component_step(field.chi_plus, pot.v_plus, field.grid,
                                                params.m_tilde, params.dt);
    out.chi_minus = detail::dense_component_step(field.chi_minus, pot.v_minus, field.grid,
                                                 params.m_tilde, params.dt);
    return out;
}

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

inline OracleReport check_thomas() {
    OracleReport rep{"thomas_tridiagonal", 0.0, 0.0, false, ""};
    TridiagonalSystem small;
    small.diag = {2.0, 2.0, 2.0};
    small.lower = {1.0, 1.0};
    small.upper = {1.0, 1.0};
    small.rhs = {1.0, 0.0, 1.0};
    const std::vector<cplx> xs = thomas_solve(small);
    double fixed_err = std::max({std::abs(xs[0] - 1.0), std::abs(xs[1] + 1.0),
                                 std::abs(xs[2] - 1.0)});
    fixed_err = std::max(fixed_err, tridiag_residual(small, xs));

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int rep_i = 0; rep_i < 4; ++rep_i) {
        const std::size_t n = 100;
        TridiagonalSystem sys;
        sys.lower.resize(n - 1);
        sys.upper.resize(n - 1);
        sys.diag.resize(n);
        sys.rhs.resize(n);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            sys.lower[j] = cplx(u(rng), u(rng));
            sys.upper[j] = cplx(u(rng), u(rng));
        }
        for (std::size_t j = 0; j < n; ++j) {
            sys.diag[j] = cplx(u(rng), u(rng)) + cplx(4.0, 4.0);
            sys.rhs[j] = cplx(u(rng), u(rng));
        }
        const std::vector<cplx> x = thomas_solve(sys);
        worst = std::max(worst, tridiag_residual(sys, x));
        const std::size_t m = n;
        std::vector<std::vector<cplx>> a(m, std::vector<cplx>(m, cplx(0.0, 0.0)));
        for (std::size_t j = 0; j < m; ++j) a[j][j] = sys.diag[j];
        for (std::size_t j = 0; j + 1 < m; ++j) {
            a[j][j + 1] = sys.upper[j];
            a[j + 1][j] = sys.lower[j];
        }
        const std::vector<cplx> xd = dense_solve(a, sys.rhs);
        for (std::size_t j = 0; j < m; ++j)
            worst = std::max(worst, std::abs(x[j] - xd[j]));
    }
    rep.max_abs_error = std::max(fixed_err, worst);
    rep.max_rel_error = rep.max_abs_error;
    rep.passed = rep.max_abs_error < 1e-12;
    rep.details = "fixed 3x3 err " + fmt(fixed_err) + ", random 100-pt vs dense " + fmt(worst) +
                  " (threshold 1e-12)";
    return rep;
}

inline OracleReport check_dense_reference() {
    OracleReport rep{"dense_reference_step", 0.0, 0.0, false, ""};
    const Grid grid = make_grid(8.0, 16.0 / 63.0);  // 64 points
    SimParams p;
    p.m_tilde = 0.5;
    p.gamma_tilde = 0.1;
    p.theta = defaults::theta;
    p.epsilon = 1.0;
    p.dt = 0.01;
    SpinorField f = init_gaussian_spinor(grid, p.epsilon, p.theta);
    const PotentialField pot = assemble_potentials(f, p);
    const SpinorField dense = dense_reference_step(f, pot, p);
    const std::vector<cplx> tp =
        cn_component_step(f.chi_plus, pot.v_plus, grid, p.m_tilde, p.dt);
    const std::vector<cplx> tm =
        cn_component_step(f.chi_minus, pot.v_minus, grid, p.m_tilde, p.dt);
    double diff = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        diff = std::max(diff, std::abs(tp[j] - dense.chi_plus[j]));
        diff = std::max(diff, std::abs(tm[j] - dense.chi_minus[j]));
    }
    SpinorField advanced = f;
    advanced.chi_plus = tp;
    advanced.chi_minus = tm;
    const double norm_err = std::abs(norm(advanced) - norm(f));
    SimParams p0 = p;
    p0.dt = 0.0;
    const SpinorField ident = dense_reference_step(f, pot, p0);
    double ident_err = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        ident_err = std::max(ident_err, std::abs(ident.chi_plus[j] - f.chi_plus[j]));
        ident_err = std::max(ident_err, std::abs(ident.chi_minus[j] - f.chi_minus[j]));
    }
    rep.max_abs_error = std::max({diff, norm_err, ident_err});
    rep.max_rel_error = rep.max_abs_error;
    rep.passed = diff < 1e-10 && norm_err < 1e-12 && ident_err == 0.0;
    rep.details = "tridiagonal vs dense " + fmt(diff) + " (threshold 1e-10), step norm change " +
                  fmt(norm_err) + " (1e-12), dt=0 identity " + fmt(ident_err);
    return rep;
}

inline OracleReport check_dispersion() {
    OracleReport rep{"free_dispersion", 0.0, 0.0, false, ""};
    SimParams p;
    p.m_tilde = 1.0;
    p.gamma_tilde = 0.0;
    p.theta = 0.0;
    p.epsilon = 1.0;
    p.dt = 0.01;
    p.t_max = 1.0;
    p.self_gravity = false;
    p.snapshot_stride = 1000000;
    const Grid grid = make_grid(30.0, 0.05);
    SpinorField f = init_gaussian_spinor(grid, p.epsilon, p.theta);
    const TrajectoryRecord rec = evolve(std::move(f), p, {}, true);
    const std::vector<double>& rho = rec.snapshots.back();
    const std::vector<double> w = trapezoid_weights(grid);
    double z2 = 0.0, nrm = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        z2 += w[j] * grid.z_values[j] * grid.z_values[j] * rho[j];
        nrm += w[j] * rho[j];
    }
    const double width = std::sqrt(2.0 * z2 / nrm);
    const double target = free_gaussian_width(p.t_max, p.m_tilde, p.epsilon);
    rep.max_abs_error = std::abs(width - target);
    rep.max_rel_error = rep.max_abs_error / target;
    rep.passed = rep.max_rel_error < 1e-3;
    rep.details = "width " + fmt(width) + " vs " + fmt(target) + ", rel " +
                  fmt(rep.max_rel_error) + " (threshold 1e-3)";
    return rep;
}

inline OracleReport check_linear_sg() {
    OracleReport rep{"linear_stern_gerlach", 0.0, 0.0, false, ""};
    SimParams p;
    p.m_tilde = 1.0;
    p.gamma_tilde = 0.05;
    p.theta = 0.0;
    p.epsilon = 4.0;
    p.dt = 0.002;
    p.t_max = 1.0;
    p.self_gravity = false;
    p.snapshot_stride = 1000000;
    const Grid grid = make_grid(30.0, 0.005);
    SpinorField f = init_gaussian_spinor(grid, p.epsilon, p.theta);
    const TrajectoryRecord rec = evolve(std::move(f), p);
    const double zex = rec.z_expect.back();
    const double target = linear_sg_expectation(p.t_max, p.gamma_tilde, p.m_tilde, +1);
    rep.max_abs_error = std::abs(zex - target);
    rep.max_rel_error = rep.max_abs_error / std::abs(target);
    rep.passed = rep.max_rel_error < 1e-6;
    rep.details = "<z> " + fmt(zex) + " vs " + fmt(target) + ", error per unit trajectory " +
                  fmt(rep.max_rel_error) + " (threshold 1e-6)";
    return rep;
}

inline OracleReport check_convergence_order() {
    OracleReport rep{"time_convergence_order", 0.0, 0.0, false, ""};
    const Grid grid = make_grid(15.0, 0.05);
    auto run_dt = [&](double dt) {
        SimParams p;
        p.m_tilde = 0.5;
        p.epsilon = 1.0;
        p.dt = dt;
        p.t_max = 0.5;
        p.fast_convolution = true;
        p.snapshot_stride = 1000000;
        SpinorField f = init_gaussian_spinor(grid, p.epsilon, p.theta);
        StepperState st{std::move(f), 0.0, 0, {}};
        GravityWorkspace ws(grid, p.delta, true);
        const long nsteps = std::lround(p.t_max / p.dt);
        for (long s = 0; s < nsteps; ++s) cn_step_inplace(st, p, ws);
        return st.field;
    };
    const SpinorField ref = run_dt(0.0025);
    auto err_vs_ref = [&](const SpinorField& f) {
        double e = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) {
            e = std::max(e, std::abs(f.chi_plus[j] - ref.chi_plus[j]));
            e = std::max(e, std::abs(f.chi_minus[j] - ref.chi_minus[j]));
        }
        return e;
    };
    const double e1 = err_vs_ref(run_dt(0.02));
    const double e2 = err_vs_ref(run_dt(0.01));
    const double ratio = e1 / e2;
    rep.max_abs_error = e2;
    rep.max_rel_error = ratio;
    rep.passed = ratio > 3.0 && ratio < 5.0;
    rep.details = "err(dt=0.02) " + fmt(e1) + ", err(dt=0.01) " + fmt(e2) + ", ratio " +
                  fmt(ratio) + " (want ~4, accept 3..5)";
    return rep;
}

inline OracleReport check_fft_convolution() {
    OracleReport rep{"fft_convolution", 0.0, 0.0, false, ""};
    const Grid grid = make_grid(12.8, 0.05);
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> rho(grid.n);
    for (double& r : rho) r = u(rng);
    GravityWorkspace ws(grid, 0.01, true);
    const std::vector<double> vd = gravity_potential_ws(rho, grid, 0.7, ws, false);
    const std::vector<double> vf = gravity_potential_ws(rho, grid, 0.7, ws, true);
    double diff = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        diff = std::max(diff, std::abs(vd[j] - vf[j]));
        scale = std::max(scale, std::abs(vd[j]));
    }
    rep.max_abs_error = diff;
    rep.max_rel_error = diff / scale;
    rep.passed = diff < 1e-10;
    rep.details = "max |direct - fft| " + fmt(diff) + " on " + std::to_string(grid.n) +
                  " random points (threshold 1e-10)";
    return rep;
}

inline OracleReport check_units() {
    OracleReport rep{"unit_scales", 0.0, 0.0, false, ""};
    const ScaleSet s = scales_from_sigma(0.371e-9);
    const double u_kg = constants::atomic_mass_unit;
    const double rel_m = std::abs(s.m_r / (46.05e9 * u_kg) - 1.0);
    const double rel_t = std::abs(s.t_r / 0.1 - 1.0);
    const double rel_mt = std::abs(mass_to_dimensionless(27.63e9 * u_kg, s) / 0.600 - 1.0);
    double round_trip = 0.0;
    for (double m : {0.1, 0.6, 1.0}) {
        const double back = mass_to_dimensionless(mass_from_dimensionless(m, s), s);
        round_trip = std::max(round_trip, std::abs(back / m - 1.0));
    }
    rep.max_abs_error = std::max({rel_m, rel_t, rel_mt});
    rep.max_rel_error = rep.max_abs_error;
    rep.passed = rel_m < 0.005 && rel_t < 0.005 && rel_mt < 0.005 && round_trip < 1e-12;
    rep.details = "m_r rel " + fmt(rel_m) + ", t_r rel " + fmt(rel_t) + ", m-tilde rel " +
                  fmt(rel_mt) + " (0.5%), round-trip " + fmt(round_trip) + " (1e-12)";
    return rep;
}

} // namespace detail

// The full oracle battery behind the `verify` CLI subcommand.
inline std::vector<OracleReport> run_verification() {
    std::vector<OracleReport> reports;
    reports.push_back(detail::check_thomas());
    reports.push_back(detail::check_dense_reference());
    reports.push_back(detail::check_fft_convolution());
    reports.push_back(detail::check_dispersion());
    reports.push_back(detail::check_linear_sg());
    reports.push_back(detail::check_convergence_order());
    reports.push_back(detail::check_units());
    return reports;
}

} // namespace sgsn
