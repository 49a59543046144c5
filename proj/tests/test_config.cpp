#include <catch2/catch_amalgamated.hpp>

#include <string>

#include <sgsn/config.hpp>

using namespace sgsn;

TEST_CASE("minimal run document keeps the defaults") {
    const ScenarioConfig cfg = parse_config("mass = 0.5\n");
    REQUIRE(cfg.params.m_tilde == 0.5);
    REQUIRE(cfg.params.gamma_tilde == Catch::Approx(defaults::gamma_tilde));
    REQUIRE(cfg.params.epsilon == 2.0);
    REQUIRE(cfg.params.delta == 0.01);
    REQUIRE(cfg.params.dt == 0.01);
    REQUIRE(cfg.params.t_max == 10.0);
    REQUIRE(cfg.dz == 0.05);
    REQUIRE(cfg.z_max == 100.0);
    REQUIRE(cfg.out_dir == "out");
    REQUIRE(cfg.label == "run");
    REQUIRE(cfg.write_snapshots);
    REQUIRE_FALSE(cfg.used_physical_block);
    REQUIRE(cfg.make_run_grid().n == 4001);
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
    const std::string doc =
        "# a scenario\n"
        "\n"
        "mass=0.7   # inline note\n"
        "  theta =  0.0\n"
        "label = narrow packet\n"
        "t_max = 0\n"
        "snapshots = off\n";
    const ScenarioConfig cfg = parse_config(doc);
    REQUIRE(cfg.params.m_tilde == 0.7);
    REQUIRE(cfg.params.theta == 0.0);
    REQUIRE(cfg.params.t_max == 0.0);
    REQUIRE(cfg.label == "narrow packet");
    REQUIRE_FALSE(cfg.write_snapshots);
}

TEST_CASE("stability guard rejects a large time step") {
    try {
        parse_config("mass = 0.5\ndt = 0.1\ndz = 0.05\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        REQUIRE(std::string(e.what()).find("CFL") != std::string::npos);
    }
}

TEST_CASE("physical block fixes mass and coupling through the scales") {
    const std::string doc =
        "t_max = 10\n"
        "[physical]\n"
        "sigma_r = 0.371e-9\n"
        "mass_u = 27.63e9\n"
        "b0 = 0.028\n";
    const ScenarioConfig cfg = parse_config(doc);
    REQUIRE(cfg.used_physical_block);
    REQUIRE(cfg.sigma_r == 0.371e-9);
    REQUIRE(cfg.params.m_tilde == Catch::Approx(0.600).epsilon(1e-2));
    REQUIRE(cfg.params.gamma_tilde == Catch::Approx(0.0913).epsilon(1e-2));
}

TEST_CASE("physical block conflicts and omissions") {
    const std::string base = "[physical]\nsigma_r = 0.371e-9\nmass_u = 27.63e9\nb0 = 0.028\n";
    REQUIRE_THROWS_AS(parse_config("mass = 0.5\n" + base), parse_error);
    REQUIRE_THROWS_AS(parse_config("gamma = 0.09\n" + base), parse_error);
    try {
        parse_config("[physical]\nsigma_r = 0.371e-9\nmass_u = 27.63e9\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        REQUIRE(std::string(e.what()).find("b0") != std::string::npos);
    }
    REQUIRE_THROWS_AS(
        parse_config("[physical]\nsigma_r = 0.371e-9\nmass_u = 1e9\nb0 = 0.028\nspin = 1\n"),
        parse_error);
}

TEST_CASE("malformed documents carry line numbers") {
    try {
        parse_config("mass = 0.5\ntheta = 0.2\nwobble = 3\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        REQUIRE(e.line == 3);
        REQUIRE(std::string(e.what()).find("line 3") != std::string::npos);
        REQUIRE(std::string(e.what()).find("wobble") != std::string::npos);
    }
    REQUIRE_THROWS_AS(parse_config("mass = 0.5\nmass = 0.6\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("mass =\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("= 0.5\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("[lattice]\nmass = 0.5\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("[physical\nmass = 0.5\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("mass 0.5\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("mass = fast\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("mass = 0.5x\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("theta = 0.3\n"), parse_error);  // mass missing
}

TEST_CASE("run documents reject sweep keys") {
    REQUIRE_THROWS_AS(parse_config("mass = 0.5\nsweep_parameter = mass\n"), parse_error);
    REQUIRE_THROWS_AS(parse_config("mass = 0.5\nsweep_values = 0.1, 0.2\n"), parse_error);
}

TEST_CASE("sweep documents") {
    const SweepConfig sw = parse_sweep_config(
        "sweep_parameter = mass\n"
        "sweep_values = 0.1, 0.5, 0.6, 0.7\n"
        "gamma = 0.1826203737208850\n"
        "t_max = 1\n"
        "concurrency = 3\n");
    REQUIRE(sw.parameter == "mass");
    REQUIRE(sw.values == std::vector<double>{0.1, 0.5, 0.6, 0.7});
    REQUIRE(sw.concurrency == 3);
    REQUIRE(sw.base.params.m_tilde == 0.1);  // seeded from the first value

    const SweepConfig th = parse_sweep_config(
        "sweep_parameter = theta\n"
        "sweep_values = 0.0, 1.0472, 2.0944\n"
        "mass = 0.7\n");
    REQUIRE(th.parameter == "theta");
    REQUIRE(th.base.params.m_tilde == 0.7);

    REQUIRE_THROWS_AS(parse_sweep_config("sweep_parameter = theta\nsweep_values = 0, 1\n"),
                      parse_error);  // theta sweep needs a mass
    REQUIRE_THROWS_AS(parse_sweep_config("sweep_parameter = epsilon\nsweep_values = 1, 2\n"),
                      parse_error);
    REQUIRE_THROWS_AS(
        parse_sweep_config("sweep_parameter = mass\nsweep_values = 0.5, 0.5\n"),
        parse_error);  // strictly increasing
    REQUIRE_THROWS_AS(
        parse_sweep_config("sweep_parameter = mass\nsweep_values = 0.5, 0.2\n"),
        parse_error);
    REQUIRE_THROWS_AS(parse_sweep_config("sweep_parameter = mass\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sweep_config("sweep_values = 0.1, 0.2\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sweep_config("sweep_parameter = mass\nsweep_values = 0.1, 0.2\n"
                                         "concurrency = 0\n"),
                      parse_error);
}

TEST_CASE("boolean spellings") {
    REQUIRE(parse_config("mass = 0.5\nself_gravity = on\n").params.self_gravity);
    REQUIRE(parse_config("mass = 0.5\nself_gravity = 1\n").params.self_gravity);
    REQUIRE_FALSE(parse_config("mass = 0.5\nself_gravity = 0\n").params.self_gravity);
    REQUIRE_FALSE(parse_config("mass = 0.5\nfast_convolution = false\n").params.fast_convolution);
    REQUIRE(parse_config("mass = 0.5\nfast_convolution = true\n").params.fast_convolution);
    REQUIRE_THROWS_AS(parse_config("mass = 0.5\nself_gravity = yes\n"), parse_error);
}
