#pragma once

#include <cmath>

#include "errors.hpp"

namespace sgsn {

// CODATA 2018 values, SI.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double G = 6.67430e-11;              // m^3 kg^-1 s^-2
inline constexpr double mu_bohr = 9.2740100783e-24;   // J T^-1
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
} // namespace constants

// Characteristic scales induced by a chosen length sigma_r:
//   m_r = (hbar^2 / (G sigma_r))^(1/3),  t_r = (sigma_r^5 / (G hbar))^(1/3).
struct ScaleSet {
    double sigma_r = 0.0; // m
    double m_r = 0.0;     // kg
    double t_r = 0.0;     // s

    double force_scale() const { return m_r * sigma_r / (t_r * t_r); }
};

inline ScaleSet scales_from_sigma(double sigma_r) {
    if (!(sigma_r > 0.0) || !std::isfinite(sigma_r))
        throw parameter_error("scales_from_sigma: sigma_r must be positive");
    ScaleSet s;
    s.sigma_r = sigma_r;
    s.m_r = std::cbrt(constants::hbar * constants::hbar / (constants::G * sigma_r));
    s.t_r = std::cbrt(std::pow(sigma_r, 5) / (constants::G * constants::hbar));
    return s;
}

inline double mass_to_dimensionless(double mass_kg, const ScaleSet& s) {
    return mass_kg / s.m_r;
}

inline double mass_from_dimensionless(double m_tilde, const ScaleSet& s) {
    return m_tilde * s.m_r;
}

inline double time_to_dimensionless(double t_seconds, const ScaleSet& s) {
    return t_seconds / s.t_r;
}

inline double time_from_dimensionless(double t_tilde, const ScaleSet& s) {
    return t_tilde * s.t_r;
}

// gamma_tilde = mu_B B0' / (m_r sigma_r / t_r^2) for a field gradient B0' in T/m.
inline double gamma_dimensionless(double b0_gradient, const ScaleSet& s) {
    return constants::mu_bohr * b0_gradient / s.force_scale();
}

inline double gradient_from_gamma(double gamma_tilde, const ScaleSet& s) {
    return gamma_tilde * s.force_scale() / constants::mu_bohr;
}

} // namespace sgsn
