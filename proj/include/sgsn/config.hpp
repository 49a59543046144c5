#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "params.hpp"
#include "units.hpp"

namespace sgsn {

// One fully resolved run: physics parameters, grid, and output policy.
// Parsed from a flat `key = value` document with `#` comments; an optional
// [physical] section gives (sigma_r, mass_u, b0) in SI/u and is converted to
// (m_tilde, gamma_tilde) through the unit scales. Mixing the physical block
// with dimensionless mass/gamma is rejected: exactly one route fixes them.
struct ScenarioConfig {
    SimParams params;
    double z_max = defaults::z_max;
    double dz = defaults::dz;
    std::string out_dir = "out";
    std::string label = "run";
    bool write_snapshots = true;
    bool used_physical_block = false;
    double sigma_r = 0.0;  // set when used_physical_block

    Grid make_run_grid() const { return make_grid(z_max, dz); }
};

struct SweepConfig {
    ScenarioConfig base;
    std::string parameter;       // "mass" or "theta"
    std::vector<double> values;  // strictly increasing
    int concurrency = 1;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw parse_error("trailing characters in number '" + v + "'", line);
        return x;
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception&) {
        throw parse_error("expected a number, got '" + v + "'", line);
    }
}

inline int parse_int(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw parse_error("trailing characters in integer '" + v + "'", line);
        return static_cast<int>(x);
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception&) {
        throw parse_error("expected an integer, got '" + v + "'", line);
    }
}

inline bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw parse_error("expected true/false, got '" + v + "'", line);
}

struct RawDocument {
    // key -> (value, line), per section ("" = top level, "physical")
    std::map<std::string, std::pair<std::string, int>> flat;
    std::map<std::string, std::pair<std::string, int>> physical;
};

inline RawDocument tokenize_config(const std::string& text) {
    RawDocument doc;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw parse_error("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "physical")
                throw parse_error("unknown section [" + section + "]", line_no);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("expected 'key = value', got '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw parse_error("empty key", line_no);
        if (value.empty()) throw parse_error("empty value for key '" + key + "'", line_no);
        auto& table = section.empty() ? doc.flat : doc.physical;
        if (!table.emplace(key, std::make_pair(value, line_no)).second)
            throw parse_error("duplicate key '" + key + "'", line_no);
    }
    return doc;
}

struct ParsedDocument {
    ScenarioConfig scenario;
    std::optional<std::string> sweep_parameter;
    std::vector<double> sweep_values;
    int sweep_concurrency = 1;
    bool mass_given = false;
};

inline ParsedDocument interpret_config(const std::string& text) {
    RawDocument doc = tokenize_config(text);
    ParsedDocument out;
    ScenarioConfig& cfg = out.scenario;
    SimParams& p = cfg.params;

    auto take = [&](const char* key) -> std::optional<std::pair<std::string, int>> {
        auto it = doc.flat.find(key);
        if (it == doc.flat.end()) return std::nullopt;
        auto v = it->second;
        doc.flat.erase(it);
        return v;
    };
    auto take_double = [&](const char* key, double& dst) -> bool {
        if (auto v = take(key)) {
            dst = parse_double(v->first, v->second);
            return true;
        }
        return false;
    };

    int mass_line = 0, gamma_line = 0;
    if (auto v = take("mass")) {
        p.m_tilde = parse_double(v->first, v->second);
        out.mass_given = true;
        mass_line = v->second;
    }
    if (auto v = take("gamma")) {
        p.gamma_tilde = parse_double(v->first, v->second);
        gamma_line = v->second;
    }
    take_double("theta", p.theta);
    take_double("epsilon", p.epsilon);
    take_double("delta", p.delta);
    take_double("dt", p.dt);
    take_double("t_max", p.t_max);
    take_double("z_max", cfg.z_max);
    take_double("dz", cfg.dz);
    take_double("min_prominence", p.min_prominence);
    take_double("separation_threshold", p.separation_threshold);
    if (auto v = take("nonlinear_iters")) p.nonlinear_iters = parse_int(v->first, v->second);
    if (auto v = take("snapshot_stride")) p.snapshot_stride = parse_int(v->first, v->second);
    if (auto v = take("self_gravity")) p.self_gravity = parse_bool(v->first, v->second);
    if (auto v = take("fast_convolution")) p.fast_convolution = parse_bool(v->first, v->second);
    if (auto v = take("snapshots")) cfg.write_snapshots = parse_bool(v->first, v->second);
    if (auto v = take("out_dir")) cfg.out_dir = v->first;
    if (auto v = take("label")) cfg.label = v->first;

    if (auto v = take("sweep_parameter")) {
        if (v->first != "mass" && v->first != "theta")
            throw parse_error("sweep_parameter must be 'mass' or 'theta'", v->second);
        out.sweep_parameter = v->first;
    }
    if (auto v = take("sweep_values")) {
        std::istringstream vs(v->first);
        std::string tok;
        while (std::getline(vs, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) throw parse_error("empty entry in sweep_values", v->second);
            out.sweep_values.push_back(parse_double(tok, v->second));
        }
        if (out.sweep_values.empty()) throw parse_error("sweep_values is empty", v->second);
        for (std::size_t i = 1; i < out.sweep_values.size(); ++i)
            if (!(out.sweep_values[i] > out.sweep_values[i - 1]))
                throw parse_error("sweep_values must be strictly increasing", v->second);
    }
    if (auto v = take("concurrency")) {
        out.sweep_concurrency = parse_int(v->first, v->second);
        if (out.sweep_concurrency < 1) throw parse_error("concurrency must be >= 1", v->second);
    }

    if (!doc.flat.empty()) {
        const auto& [key, val] = *doc.flat.begin();
        throw parse_error("unknown key '" + key + "'", val.second);
    }

    if (!doc.physical.empty()) {
        if (out.mass_given)
            throw parse_error("mass conflicts with the [physical] block; set one or the other",
                              mass_line);
        if (gamma_line > 0)
            throw parse_error("gamma conflicts with the [physical] block; set one or the other",
                              gamma_line);
        auto need = [&](const char* key) {
            auto it = doc.physical.find(key);
            if (it == doc.physical.end())
                throw parse_error(std::string("[physical] block is missing key '") + key + "'");
            auto v = it->second;
            doc.physical.erase(it);
            return parse_double(v.first, v.second);
        };
        const double sigma_r = need("sigma_r");
        const double mass_u = need("mass_u");
        const double b0 = need("b0");
        if (!doc.physical.empty()) {
            const auto& [key, val] = *doc.physical.begin();
            throw parse_error("unknown key '" + key + "' in [physical]", val.second);
        }
        const ScaleSet scales = scales_from_sigma(sigma_r);
        p.m_tilde = mass_to_dimensionless(mass_u * constants::atomic_mass_unit, scales);
        p.gamma_tilde = gamma_dimensionless(b0, scales);
        cfg.used_physical_block = true;
        cfg.sigma_r = sigma_r;
        out.mass_given = true;
    }
    return out;
}

inline void validate_scenario(const ScenarioConfig& cfg, bool mass_given) {
    if (!mass_given) throw parse_error("mass is required (or a [physical] block)");
    try {
        cfg.params.validate(cfg.make_run_grid());
    } catch (const parameter_error& e) {
        throw parse_error(e.what());
    }
}

} // namespace detail

inline ScenarioConfig parse_config(const std::string& text) {
    detail::ParsedDocument doc = detail::interpret_config(text);
    if (doc.sweep_parameter || !doc.sweep_values.empty())
        throw parse_error("sweep keys are not allowed in a run config; use the sweep command");
    detail::validate_scenario(doc.scenario, doc.mass_given);
    return doc.scenario;
}

inline SweepConfig parse_sweep_config(const std::string& text) {
    detail::ParsedDocument doc = detail::interpret_config(text);
    if (!doc.sweep_parameter) throw parse_error("sweep config requires sweep_parameter");
    if (doc.sweep_values.empty()) throw parse_error("sweep config requires sweep_values");
    SweepConfig sweep;
    sweep.parameter = *doc.sweep_parameter;
    sweep.values = doc.sweep_values;
    sweep.concurrency = doc.sweep_concurrency;
    // The swept parameter supplies mass; theta sweeps still need a base mass.
    const bool mass_ok = doc.mass_given || sweep.parameter == "mass";
    sweep.base = doc.scenario;
    if (sweep.parameter == "mass") sweep.base.params.m_tilde = sweep.values.front();
    detail::validate_scenario(sweep.base, mass_ok);
    return sweep;
}

} // namespace sgsn
