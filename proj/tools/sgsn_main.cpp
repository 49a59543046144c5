// Command-line front end: run, sweep, verify, units.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <sgsn/sgsn.hpp>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_parse = 2;
constexpr int exit_instability = 3;

struct Overrides {
    std::optional<double> mass, theta, epsilon, gamma, dz, dt, tmax, zmax, delta;
    std::optional<std::string> out;

    void apply(sgsn::ScenarioConfig& cfg) const {
        if (mass) cfg.params.m_tilde = *mass;
        if (theta) cfg.params.theta = *theta;
        if (epsilon) cfg.params.epsilon = *epsilon;
        if (gamma) cfg.params.gamma_tilde = *gamma;
        if (dz) cfg.dz = *dz;
        if (dt) cfg.params.dt = *dt;
        if (tmax) cfg.params.t_max = *tmax;
        if (zmax) cfg.z_max = *zmax;
        if (delta) cfg.params.delta = *delta;
        if (out) cfg.out_dir = *out;
        try {
            cfg.params.validate(cfg.make_run_grid());
        } catch (const sgsn::parameter_error& e) {
            throw sgsn::parse_error(e.what());
        }
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--mass", ov.mass, "dimensionless mass m");
    cmd->add_option("--theta", ov.theta, "initial spin angle (radians)");
    cmd->add_option("--epsilon", ov.epsilon, "initial packet width");
    cmd->add_option("--gamma", ov.gamma, "dimensionless magnetic force");
    cmd->add_option("--dz", ov.dz, "grid spacing");
    cmd->add_option("--dt", ov.dt, "time step");
    cmd->add_option("--tmax", ov.tmax, "final time");
    cmd->add_option("--zmax", ov.zmax, "grid half-extent");
    cmd->add_option("--delta", ov.delta, "gravity regularization length");
    cmd->add_option("--out", ov.out, "output directory");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sgsn::parse_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int do_run(const std::string& config_path, const Overrides& ov) {
    sgsn::ScenarioConfig cfg = sgsn::parse_config(read_file(config_path));
    ov.apply(cfg);
    const sgsn::ScenarioResult res = sgsn::run_scenario(cfg);
    const sgsn::TrajectoryRecord& rec = res.record;
    std::printf("run '%s': %s (%d peaks, separation %.6g), <z>=%.6g, t=%.6g, %.2fs -> %s\n",
                cfg.label.c_str(), sgsn::to_string(rec.classification.kind),
                rec.classification.n_peaks, rec.classification.peak_separation,
                rec.z_expect.back(), rec.times.back(), res.runtime_seconds,
                res.out_dir.string().c_str());
    if (rec.failed) {
        std::fprintf(stderr, "run failed: %s\n", rec.failure_reason.c_str());
        return exit_instability;
    }
    return exit_ok;
}

int do_sweep(const std::string& config_path, const Overrides& ov) {
    sgsn::SweepConfig cfg = sgsn::parse_sweep_config(read_file(config_path));
    ov.apply(cfg.base);
    const sgsn::SweepReport report = sgsn::sweep(cfg);
    bool any_failed = false;
    for (const sgsn::SweepEntry& e : report.entries) {
        if (e.failed) {
            any_failed = true;
            std::printf("%s=%-8g FAILED  %s\n", report.parameter.c_str(), e.value,
                        e.failure_reason.c_str());
            continue;
        }
        std::printf("%s=%-8g %-9s n_peaks=%d separation=%.6g <z>=%.6g\n",
                    report.parameter.c_str(), e.value,
                    sgsn::to_string(e.classification.kind), e.classification.n_peaks,
                    e.classification.peak_separation, e.final_z_expect);
    }
    if (report.largest_split_value)
        std::printf("largest SPLIT %s: %g\n", report.parameter.c_str(),
                    *report.largest_split_value);
    if (report.smallest_single_value)
        std::printf("smallest SINGLE %s: %g\n", report.parameter.c_str(),
                    *report.smallest_single_value);
    return any_failed ? exit_instability : exit_ok;
}

int do_verify() {
    const std::vector<sgsn::OracleReport> reports = sgsn::run_verification();
    bool all_ok = true;
    for (const sgsn::OracleReport& r : reports) {
        std::printf("[%s] %-24s max_abs=%.3e max_rel=%.3e  %s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.max_abs_error, r.max_rel_error, r.details.c_str());
        all_ok = all_ok && r.passed;
    }
    return all_ok ? exit_ok : exit_failure;
}

int do_units(double sigma_r) {
    const sgsn::ScaleSet s = sgsn::scales_from_sigma(sigma_r);
    const double u = sgsn::constants::atomic_mass_unit;
    std::printf("sigma_r     = %.17g m\n", s.sigma_r);
    std::printf("m_r         = %.17g kg = %.17g u\n", s.m_r, s.m_r / u);
    std::printf("t_r         = %.17g s\n", s.t_r);
    std::printf("force scale = %.17g N\n", s.force_scale());
    std::printf("gamma(28 mT/m) = %.17g\n", sgsn::gamma_dimensionless(0.028, s));
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D Stern-Gerlach simulator with gravitational self-interaction"};
    app.require_subcommand(1);

    std::string run_config, sweep_config;
    Overrides run_ov, sweep_ov;
    double sigma_r = 0.0;

    CLI::App* run_cmd = app.add_subcommand("run", "evolve one configured scenario");
    run_cmd->add_option("config", run_config, "config file")->required();
    add_override_flags(run_cmd, run_ov);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_cmd->add_option("config", sweep_config, "sweep config file")->required();
    add_override_flags(sweep_cmd, sweep_ov);

    app.add_subcommand("verify", "run the oracle battery");

    CLI::App* units_cmd = app.add_subcommand("units", "print scales for a reference length");
    units_cmd->add_option("--sigma", sigma_r, "reference length sigma_r in meters")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_parse;
    }

    try {
        if (run_cmd->parsed()) return do_run(run_config, run_ov);
        if (sweep_cmd->parsed()) return do_sweep(sweep_config, sweep_ov);
        if (app.get_subcommand("verify")->parsed()) return do_verify();
        if (units_cmd->parsed()) return do_units(sigma_r);
    } catch (const sgsn::parse_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_parse;
    } catch (const sgsn::parameter_error& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return exit_parse;
    } catch (const sgsn::instability_error& e) {
        std::fprintf(stderr, "instability: %s\n", e.what());
        return exit_instability;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_failure;
    }
    return exit_ok;
}
