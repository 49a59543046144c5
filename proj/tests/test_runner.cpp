#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sgsn/runner.hpp>

using namespace sgsn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / "sgsn_runner_tests" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

ScenarioConfig small_scenario(const fs::path& out) {
    ScenarioConfig cfg;
    cfg.params.m_tilde = 0.5;
    cfg.params.theta = M_PI / 3;
    cfg.params.epsilon = 1.0;
    cfg.params.t_max = 0.5;
    cfg.params.fast_convolution = true;
    cfg.params.snapshot_stride = 25;
    cfg.z_max = 15.0;
    cfg.out_dir = out.string();
    return cfg;
}

} // namespace

TEST_CASE("scenario outputs land in the requested directory") {
    const fs::path dir = fresh_dir("basic");
    const ScenarioConfig cfg = small_scenario(dir);
    const ScenarioResult res = run_scenario(cfg);

    REQUIRE_FALSE(res.record.failed);
    REQUIRE(res.runtime_seconds >= 0.0);
    REQUIRE(fs::exists(dir / "observables.csv"));
    REQUIRE(fs::exists(dir / "snapshots.csv"));
    REQUIRE(fs::exists(dir / "summary.json"));

    const std::string obs = slurp(dir / "observables.csv");
    REQUIRE(obs.rfind("time,norm,pop_plus,pop_minus,z_expect,energy,"
                      "peak1_z,peak1_h,peak2_z,peak2_h\n", 0) == 0);
    // stride 25 over 50 steps: rows at steps 0, 25, 50
    REQUIRE(line_count(obs) == 1 + 3);
    REQUIRE(res.record.times.size() == 3);

    const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    REQUIRE(summary["params"]["mass"] == 0.5);
    REQUIRE(summary["params"]["z_max"] == 15.0);
    REQUIRE(summary["params"]["label"] == "run");
    REQUIRE(summary["failed"] == false);
    REQUIRE(summary["classification"]["kind"].is_string());
    REQUIRE(summary["classification"]["n_peaks"].get<int>() >= 1);
    REQUIRE(summary["max_classical_deviation"].get<double>() >= 0.0);
    REQUIRE(summary.contains("runtime_seconds"));
    REQUIRE_FALSE(summary.contains("failure_reason"));
}

TEST_CASE("zero duration writes the initial row only") {
    const fs::path dir = fresh_dir("frozen");
    ScenarioConfig cfg = small_scenario(dir);
    cfg.params.t_max = 0.0;
    cfg.params.theta = 0.0;
    const ScenarioResult res = run_scenario(cfg);

    const std::string obs = slurp(dir / "observables.csv");
    REQUIRE(line_count(obs) == 2);  // header + t=0
    const std::string snaps = slurp(dir / "snapshots.csv");
    REQUIRE(snaps.rfind("z,t=0\n", 0) == 0);

    // a single packet has one peak, so the second peak columns stay empty
    const std::size_t row_start = obs.find('\n') + 1;
    const std::string row = obs.substr(row_start, obs.find('\n', row_start) - row_start);
    REQUIRE(row.size() >= 2);
    REQUIRE(row.substr(row.size() - 2) == ",,");

    const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    REQUIRE(summary["classification"]["kind"] == "SINGLE");
    REQUIRE(summary["classical_final_z"] == 0.0);
    REQUIRE(res.record.times.size() == 1);
}

TEST_CASE("snapshots can be disabled") {
    const fs::path dir = fresh_dir("nosnaps");
    ScenarioConfig cfg = small_scenario(dir);
    cfg.write_snapshots = false;
    run_scenario(cfg);
    REQUIRE(fs::exists(dir / "observables.csv"));
    REQUIRE_FALSE(fs::exists(dir / "snapshots.csv"));
}

TEST_CASE("repeated runs are byte-identical") {
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    run_scenario(small_scenario(d1));
    run_scenario(small_scenario(d2));
    REQUIRE(slurp(d1 / "observables.csv") == slurp(d2 / "observables.csv"));
    REQUIRE(slurp(d1 / "snapshots.csv") == slurp(d2 / "snapshots.csv"));
}

TEST_CASE("single-value sweep matches the plain run") {
    const fs::path run_dir = fresh_dir("sweep_single_run");
    const ScenarioResult direct = run_scenario(small_scenario(run_dir));

    const fs::path sweep_dir = fresh_dir("sweep_single");
    SweepConfig sw;
    sw.base = small_scenario(sweep_dir);
    sw.parameter = "mass";
    sw.values = {0.5};
    const SweepReport rep = sweep(sw);

    REQUIRE(rep.entries.size() == 1);
    REQUIRE_FALSE(rep.entries[0].failed);
    REQUIRE(rep.entries[0].classification.kind == direct.record.classification.kind);
    REQUIRE(rep.entries[0].final_z_expect ==
            Catch::Approx(direct.record.z_expect.back()).margin(1e-15));
    REQUIRE(fs::exists(sweep_dir / "mass_0.5" / "observables.csv"));
    REQUIRE(fs::exists(sweep_dir / "sweep_report.json"));
    REQUIRE(slurp(sweep_dir / "mass_0.5" / "observables.csv") ==
            slurp(run_dir / "observables.csv"));
}

TEST_CASE("sweep results do not depend on concurrency") {
    SweepConfig sw;
    sw.parameter = "mass";
    sw.values = {0.4, 0.5, 0.6};

    const fs::path serial = fresh_dir("sweep_serial");
    sw.base = small_scenario(serial);
    sw.concurrency = 1;
    const SweepReport r1 = sweep(sw);

    const fs::path parallel = fresh_dir("sweep_parallel");
    sw.base = small_scenario(parallel);
    sw.concurrency = 3;
    const SweepReport r2 = sweep(sw);

    REQUIRE(r1.entries.size() == 3);
    REQUIRE(r2.entries.size() == 3);
    for (const std::string leaf : {"mass_0.4", "mass_0.5", "mass_0.6"}) {
        REQUIRE(slurp(serial / leaf / "observables.csv") ==
                slurp(parallel / leaf / "observables.csv"));
    }
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(r1.entries[i].value == sw.values[i]);
        REQUIRE(r1.entries[i].classification.kind == r2.entries[i].classification.kind);
    }

    const nlohmann::json rep = nlohmann::json::parse(slurp(serial / "sweep_report.json"));
    REQUIRE(rep["parameter"] == "mass");
    REQUIRE(rep["entries"].size() == 3);
    REQUIRE(rep["entries"][1]["value"] == 0.5);
    REQUIRE(rep["entries"][1]["peaks"].is_array());
    REQUIRE(rep.contains("smallest_single_value"));
    REQUIRE(rep.contains("largest_split_value"));
}
