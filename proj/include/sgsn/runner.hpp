#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "observables.hpp"
#include "spinor.hpp"

namespace sgsn {

namespace detail {

// 17 significant digits: enough for exact double round-trips, so repeated
// runs of one config produce bit-identical CSV files.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Indices of the up-to-two most prominent peaks, returned in ascending
// position order for stable branch identity across CSV rows.
inline std::vector<std::size_t> top_two_peaks(const std::vector<Peak>& peaks) {
    std::vector<std::size_t> idx(peaks.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return peaks[a].prominence > peaks[b].prominence;
    });
    if (idx.size() > 2) idx.resize(2);
    std::sort(idx.begin(), idx.end());
    return idx;
}

inline void write_observables_csv(const std::filesystem::path& path,
                                  const TrajectoryRecord& rec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "time,norm,pop_plus,pop_minus,z_expect,energy,peak1_z,peak1_h,peak2_z,peak2_h\n";
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        out << fmt17(rec.times[i]) << ',' << fmt17(rec.norms[i]) << ','
            << fmt17(rec.populations[i].first) << ',' << fmt17(rec.populations[i].second) << ','
            << fmt17(rec.z_expect[i]) << ',' << fmt17(rec.energies[i]);
        const std::vector<Peak>& pk = rec.peaks[i];
        const std::vector<std::size_t> sel = top_two_peaks(pk);
        for (std::size_t s = 0; s < 2; ++s) {
            if (s < sel.size())
                out << ',' << fmt17(pk[sel[s]].z) << ',' << fmt17(pk[sel[s]].height);
            else
                out << ",,";
        }
        out << '\n';
    }
}

inline void write_snapshots_csv(const std::filesystem::path& path, const Grid& grid,
                                const TrajectoryRecord& rec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "z";
    for (double t : rec.times) out << ",t=" << fmt17(t);
    out << '\n';
    for (std::size_t j = 0; j < grid.n; ++j) {
        out << fmt17(grid.z_values[j]);
        for (const std::vector<double>& rho : rec.snapshots) out << ',' << fmt17(rho[j]);
        out << '\n';
    }
}

inline nlohmann::json params_json(const ScenarioConfig& cfg) {
    const SimParams& p = cfg.params;
    nlohmann::json j{{"mass", p.m_tilde},
                     {"gamma", p.gamma_tilde},
                     {"theta", p.theta},
                     {"epsilon", p.epsilon},
                     {"delta", p.delta},
                     {"dz", cfg.dz},
                     {"dt", p.dt},
                     {"z_max", cfg.z_max},
                     {"t_max", p.t_max},
                     {"nonlinear_iters", p.nonlinear_iters},
                     {"snapshot_stride", p.snapshot_stride},
                     {"self_gravity", p.self_gravity},
                     {"fast_convolution", p.fast_convolution},
                     {"min_prominence", p.min_prominence},
                     {"separation_threshold", p.separation_threshold_value()},
                     {"label", cfg.label}};
    if (cfg.used_physical_block) j["sigma_r"] = cfg.sigma_r;
    return j;
}

} // namespace detail

struct ScenarioResult {
    TrajectoryRecord record;
    std::filesystem::path out_dir;
    double runtime_seconds = 0.0;
};

// Evolve one configured scenario and serialize observables.csv,
// snapshots.csv, and summary.json into its output directory.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    const Grid grid = cfg.make_run_grid();
    cfg.params.validate(grid);
    SpinorField field = init_gaussian_spinor(grid, cfg.params.epsilon, cfg.params.theta);
    if (!boundary_amplitude_negligible(field))
        std::cerr << "warning: initial amplitude at the grid edge exceeds 1e-12; "
                     "enlarge z_max or shrink epsilon\n";

    const auto t0 = std::chrono::steady_clock::now();
    TrajectoryRecord rec = evolve(std::move(field), cfg.params, {}, cfg.write_snapshots);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    detail::write_observables_csv(dir / "observables.csv", rec);
    if (cfg.write_snapshots) detail::write_snapshots_csv(dir / "snapshots.csv", grid, rec);

    const SimParams& p = cfg.params;
    const double t_final = rec.times.back();
    double max_dev = 0.0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        const double zc = classical_trajectory(p.gamma_tilde, p.m_tilde, p.theta, rec.times[i]);
        max_dev = std::max(max_dev, std::abs(rec.z_expect[i] - zc));
    }
    nlohmann::json summary{
        {"params", detail::params_json(cfg)},
        {"classification",
         {{"kind", to_string(rec.classification.kind)},
          {"n_peaks", rec.classification.n_peaks},
          {"peak_separation", rec.classification.peak_separation}}},
        {"final_z_expect", rec.z_expect.back()},
        {"classical_final_z",
         classical_trajectory(p.gamma_tilde, p.m_tilde, p.theta, t_final)},
        {"max_classical_deviation", max_dev},
        {"runtime_seconds", runtime},
        {"failed", rec.failed}};
    if (rec.failed) summary["failure_reason"] = rec.failure_reason;
    std::ofstream js(dir / "summary.json");
    if (!js) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
    js << summary.dump(2) << '\n';

    return ScenarioResult{std::move(rec), dir, runtime};
}

struct SweepEntryPeak {
    double z = 0.0, height = 0.0, prominence = 0.0;
    double dev_branch_plus = 0.0;   // z minus +(gamma/2m) t^2 at t_max
    double dev_branch_minus = 0.0;  // z minus -(gamma/2m) t^2
    double dev_classical = 0.0;     // z minus (gamma cos(theta)/2m) t^2
};

struct SweepEntry {
    double value = 0.0;
    bool failed = false;
    std::string failure_reason;
    SplitClass classification;
    std::vector<SweepEntryPeak> peaks;
    double final_z_expect = 0.0;
};

struct SweepReport {
    std::string parameter;
    std::vector<SweepEntry> entries;
    std::optional<double> smallest_single_value;
    std::optional<double> largest_split_value;
};

// Run every swept value (up to `concurrency` workers, one scenario per
// worker, disjoint output directories) and report the SPLIT/SINGLE layout.
inline SweepReport sweep(const SweepConfig& sweep_cfg) {
    const std::size_t count = sweep_cfg.values.size();
    std::vector<SweepEntry> entries(count);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            const double value = sweep_cfg.values[i];
            SweepEntry& e = entries[i];
            e.value = value;
            ScenarioConfig cfg = sweep_cfg.base;
            if (sweep_cfg.parameter == "mass")
                cfg.params.m_tilde = value;
            else
                cfg.params.theta = value;
            std::ostringstream tag;
            tag << sweep_cfg.parameter << '_' << value;
            cfg.out_dir = (std::filesystem::path(sweep_cfg.base.out_dir) / tag.str()).string();
            cfg.label = tag.str();
            try {
                const ScenarioResult res = run_scenario(cfg);
                const TrajectoryRecord& rec = res.record;
                e.failed = rec.failed;
                e.failure_reason = rec.failure_reason;
                e.classification = rec.classification;
                e.final_z_expect = rec.z_expect.back();
                const SimParams& p = cfg.params;
                const double t = rec.times.back();
                const double branch = p.gamma_tilde / (2.0 * p.m_tilde) * t * t;
                const double zc = classical_trajectory(p.gamma_tilde, p.m_tilde, p.theta, t);
                for (const Peak& pk : rec.peaks.back())
                    e.peaks.push_back(SweepEntryPeak{pk.z, pk.height, pk.prominence,
                                                     pk.z - branch, pk.z + branch, pk.z - zc});
            } catch (const std::exception& ex) {
                e.failed = true;
                e.failure_reason = ex.what();
            }
        }
    };
    const std::size_t nthreads =
        std::min<std::size_t>(std::max(1, sweep_cfg.concurrency), count);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    SweepReport report;
    report.parameter = sweep_cfg.parameter;
    report.entries = std::move(entries);
    for (const SweepEntry& e : report.entries) {
        if (e.failed) continue;
        if (e.classification.kind == SplitKind::SINGLE && !report.smallest_single_value)
            report.smallest_single_value = e.value;  // values are sorted ascending
        if (e.classification.kind == SplitKind::SPLIT) report.largest_split_value = e.value;
    }

    nlohmann::json jentries = nlohmann::json::array();
    for (const SweepEntry& e : report.entries) {
        nlohmann::json jpeaks = nlohmann::json::array();
        for (const SweepEntryPeak& pk : e.peaks)
            jpeaks.push_back({{"z", pk.z},
                              {"height", pk.height},
                              {"prominence", pk.prominence},
                              {"dev_branch_plus", pk.dev_branch_plus},
                              {"dev_branch_minus", pk.dev_branch_minus},
                              {"dev_classical", pk.dev_classical}});
        nlohmann::json je{{"value", e.value},
                          {"failed", e.failed},
                          {"classification",
                           {{"kind", to_string(e.classification.kind)},
                            {"n_peaks", e.classification.n_peaks},
                            {"peak_separation", e.classification.peak_separation}}},
                          {"final_z_expect", e.final_z_expect},
                          {"peaks", jpeaks}};
        if (e.failed) je["failure_reason"] = e.failure_reason;
        jentries.push_back(je);
    }
    nlohmann::json jreport{{"parameter", report.parameter}, {"entries", jentries}};
    jreport["smallest_single_value"] =
        report.smallest_single_value ? nlohmann::json(*report.smallest_single_value)
                                     : nlohmann::json(nullptr);
    jreport["largest_split_value"] =
        report.largest_split_value ? nlohmann::json(*report.largest_split_value)
                                   : nlohmann::json(nullptr);
    std::filesystem::create_directories(sweep_cfg.base.out_dir);
    const std::filesystem::path path =
        std::filesystem::path(sweep_cfg.base.out_dir) / "sweep_report.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << jreport.dump(2) << '\n';
    return report;
}

} // namespace sgsn
