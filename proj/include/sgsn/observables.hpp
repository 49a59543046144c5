#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "params.hpp"
#include "potentials.hpp"
#include "spinor.hpp"

namespace sgsn {

inline double expectation_z(const SpinorField& field) {
    const auto w = trapezoid_weights(field.grid);
    double s = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j)
        s += w[j] * field.grid.z_values[j] *
             (std::norm(field.chi_plus[j]) + std::norm(field.chi_minus[j]));
    return s;
}

inline std::pair<double, double> populations(const SpinorField& field) {
    const auto w = trapezoid_weights(field.grid);
    double pp = 0.0, pm = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
        pp += w[j] * std::norm(field.chi_plus[j]);
        pm += w[j] * std::norm(field.chi_minus[j]);
    }
    return {pp, pm};
}

// Energy of the semi-discrete flow. The kinetic term uses forward differences
// (a summation-by-parts form): that functional is the one the Crank-Nicolson
// flow actually conserves, so its drift measures time-stepping error alone
// and falls ~4x when dt is halved. A central-difference kinetic term would
// add an O(dz^2) offset that grows with packet momentum spread and masks the
// dt scaling. The self-interaction term carries the standard 1/2.
inline double total_energy_with(const SpinorField& field, const SimParams& params,
                                const std::vector<double>& v_gravity) {
    const Grid& g = field.grid;
    const auto w = trapezoid_weights(g);
    double kin = 0.0;
    for (std::size_t j = 0; j + 1 < g.n; ++j) {
        kin += std::norm(field.chi_plus[j + 1] - field.chi_plus[j]) +
               std::norm(field.chi_minus[j + 1] - field.chi_minus[j]);
    }
    kin /= (g.dz * g.dz);
    kin *= g.dz / (2.0 * params.m_tilde);
    double mag = 0.0, grav = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double zp = std::norm(field.chi_plus[j]);
        const double zm = std::norm(field.chi_minus[j]);
        mag += w[j] * params.gamma_tilde * g.z_values[j] * (zm - zp);
        grav += w[j] * (zp + zm) * v_gravity[j];
    }
    return kin + mag + 0.5 * grav;
}

inline double total_energy(const SpinorField& field, const SimParams& params) {
    std::vector<double> vg;
    if (params.self_gravity) {
        GravityWorkspace ws(field.grid, params.delta, params.fast_convolution);
        vg = gravity_potential_ws(total_density(field), field.grid, params.m_tilde, ws,
                                  params.fast_convolution);
    } else {
        vg.assign(field.grid.n, 0.0);
    }
    return total_energy_with(field, params, vg);
}

struct Peak {
    double z = 0.0;
    double height = 0.0;
    double prominence = 0.0;
};

// Interior strict local maxima whose prominence reaches min_prominence times
// the global maximum, positions and heights refined by a 3-point parabola.
// Prominence: drop from the peak to the higher of the two valley minima
// reached before meeting taller ground (or the array edge) on each side.
inline std::vector<Peak> find_peaks(const std::vector<double>& density, const Grid& grid,
                                    double min_prominence) {
    std::vector<Peak> peaks;
    const std::size_t n = density.size();
    if (n < 3) return peaks;
    double dmax = 0.0;
    for (double d : density) dmax = std::max(dmax, d);
    const double cutoff = min_prominence * dmax;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (!(density[j] > density[j - 1] && density[j] > density[j + 1])) continue;
        double lmin = density[j];
        for (std::size_t k = j; k-- > 0 && density[k] <= density[j];) lmin = std::min(lmin, density[k]);
        double rmin = density[j];
        for (std::size_t k = j + 1; k < n && density[k] <= density[j]; ++k)
            rmin = std::min(rmin, density[k]);
        const double prom = density[j] - std::max(lmin, rmin);
        if (prom < cutoff) continue;
        const double a = density[j - 1], b = density[j], c = density[j + 1];
        const double curv = a - 2.0 * b + c;
        Peak p;
        p.z = grid.z_values[j] + grid.dz * 0.5 * (a - c) / curv;
        p.height = b - (a - c) * (a - c) / (8.0 * curv);
        p.prominence = prom;
        peaks.push_back(p);
    }
    return peaks;  // construction order is ascending position
}

enum class SplitKind { SPLIT, SINGLE, AMBIGUOUS };

inline const char* to_string(SplitKind k) {
    switch (k) {
        case SplitKind::SPLIT: return "SPLIT";
        case SplitKind::SINGLE: return "SINGLE";
        default: return "AMBIGUOUS";
    }
}

struct SplitClass {
    SplitKind kind = SplitKind::AMBIGUOUS;
    double peak_separation = 0.0;
    int n_peaks = 0;
};

inline SplitClass classify_split(const std::vector<Peak>& peaks, double separation_threshold) {
    SplitClass c;
    c.n_peaks = static_cast<int>(peaks.size());
    if (peaks.size() >= 2) {
        double lo = peaks.front().z, hi = peaks.front().z;
        for (const Peak& p : peaks) {
            lo = std::min(lo, p.z);
            hi = std::max(hi, p.z);
        }
        c.peak_separation = hi - lo;
        c.kind = c.peak_separation > separation_threshold ? SplitKind::SPLIT : SplitKind::AMBIGUOUS;
    } else if (peaks.size() == 1) {
        c.kind = SplitKind::SINGLE;
    }
    return c;
}

// Trajectory of a classical magnetic moment from rest: (gamma cos(theta)/2m) t^2.
inline double classical_trajectory(double gamma_tilde, double m_tilde, double theta, double t) {
    if (!(m_tilde > 0.0)) throw parameter_error("classical_trajectory: m_tilde must be positive");
    return gamma_tilde * std::cos(theta) / (2.0 * m_tilde) * t * t;
}

// Everything a run produces: time series, per-snapshot peaks, optional
// density snapshots, and the final-state classification.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> norms;
    std::vector<std::pair<double, double>> populations;
    std::vector<double> z_expect;
    std::vector<double> energies;
    std::vector<std::vector<Peak>> peaks;
    std::vector<std::vector<double>> snapshots;  // empty unless snapshots kept
    SplitClass classification;
    SimParams params_echo;
    bool failed = false;
    std::string failure_reason;
};

} // namespace sgsn
