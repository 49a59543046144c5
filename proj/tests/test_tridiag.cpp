#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <sgsn/tridiag.hpp>

using namespace sgsn;

TEST_CASE("identity system returns the rhs") {
    TridiagonalSystem sys;
    sys.diag.assign(5, 1.0);
    sys.lower.assign(4, 0.0);
    sys.upper.assign(4, 0.0);
    sys.rhs = {cplx(1, 2), cplx(3, -1), cplx(0, 0), cplx(-2, 5), cplx(4, 4)};
    const std::vector<cplx> x = thomas_solve(sys);
    for (std::size_t j = 0; j < 5; ++j) REQUIRE(x[j] == sys.rhs[j]);
}

TEST_CASE("3x3 elimination by hand") {
    // [2 1 0; 1 2 1; 0 1 2] x = (1,0,1): symmetry gives x1=x3, then
    // 2x1+x2=1 and 2x1+2x2=0, so x = (1,-1,1).
    TridiagonalSystem sys;
    sys.diag = {2.0, 2.0, 2.0};
    sys.lower = {1.0, 1.0};
    sys.upper = {1.0, 1.0};
    sys.rhs = {1.0, 0.0, 1.0};
    const std::vector<cplx> x = thomas_solve(sys);
    REQUIRE(std::abs(x[0] - cplx(1.0)) < 1e-14);
    REQUIRE(std::abs(x[1] - cplx(-1.0)) < 1e-14);
    REQUIRE(std::abs(x[2] - cplx(1.0)) < 1e-14);
    REQUIRE(tridiag_residual(sys, x) < 1e-12);
}

TEST_CASE("random diagonally dominant systems solve to 1e-12 residuals") {
    std::mt19937 rng(20240901);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
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
            sys.diag[j] = cplx(3.0 + u(rng), 3.0 + u(rng));
            sys.rhs[j] = cplx(u(rng), u(rng));
        }
        REQUIRE(sys.diagonally_dominant());
        REQUIRE(tridiag_residual(sys, thomas_solve(sys)) < 1e-12);
    }
}

TEST_CASE("zero pivots raise singular_error") {
    TridiagonalSystem head;
    head.diag = {0.0, 1.0};
    head.lower = {0.0};
    head.upper = {0.0};
    head.rhs = {1.0, 1.0};
    REQUIRE_THROWS_AS(thomas_solve(head), singular_error);

    // second pivot vanishes after elimination: 1 - 1*1 = 0
    TridiagonalSystem cascade;
    cascade.diag = {1.0, 1.0};
    cascade.lower = {1.0};
    cascade.upper = {1.0};
    cascade.rhs = {1.0, 1.0};
    REQUIRE_THROWS_AS(thomas_solve(cascade), singular_error);
}

TEST_CASE("shape consistency is enforced") {
    TridiagonalSystem sys;
    sys.diag.assign(4, 1.0);
    sys.lower.assign(2, 0.0);  // should be 3
    sys.upper.assign(3, 0.0);
    sys.rhs.assign(4, 1.0);
    REQUIRE_FALSE(sys.shape_consistent());
    REQUIRE_THROWS_AS(thomas_solve(sys), parameter_error);
}

TEST_CASE("dominance is a query, not a precondition") {
    TridiagonalSystem sys;
    sys.diag = {1.0, 0.5, 1.0};
    sys.lower.assign(2, 1.0);
    sys.upper.assign(2, 1.0);
    sys.rhs.assign(3, 1.0);
    REQUIRE_FALSE(sys.diagonally_dominant());
    REQUIRE(tridiag_residual(sys, thomas_solve(sys)) < 1e-12);
}
