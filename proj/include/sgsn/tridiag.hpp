#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "spinor.hpp"

namespace sgsn {

// Complex tridiagonal system A x = rhs. The Crank-Nicolson matrices built
// here are shifted identities 1 + i*(dt/2)*H with H real symmetric, hence
// normal with |eig| >= 1: the solve is well-posed even where strict diagonal
// dominance fails marginally (strongly negative potentials at the box edge),
// so dominance is a query rather than a construction-time assertion.
struct TridiagonalSystem {
    std::vector<cplx> lower;  // n-1
    std::vector<cplx> diag;   // n
    std::vector<cplx> upper;  // n-1
    std::vector<cplx> rhs;    // n

    std::size_t size() const { return diag.size(); }

    bool shape_consistent() const {
        const std::size_t n = diag.size();
        return n >= 1 && lower.size() == n - 1 && upper.size() == n - 1 && rhs.size() == n;
    }

    bool diagonally_dominant() const {
        const std::size_t n = size();
        for (std::size_t j = 0; j < n; ++j) {
            double off = 0.0;
            if (j > 0) off += std::abs(lower[j - 1]);
            if (j + 1 < n) off += std::abs(upper[j]);
            if (!(std::abs(diag[j]) > off)) return false;
        }
        return true;
    }
};

// Thomas elimination; destroys nothing, returns x with residual ~1e-15.
inline std::vector<cplx> thomas_solve(const TridiagonalSystem& sys) {
    if (!sys.shape_consistent()) throw parameter_error("thomas_solve: inconsistent array lengths");
    const std::size_t n = sys.size();
    std::vector<cplx> cp(n - 1), dp(n), x(n);
    cplx piv = sys.diag[0];
    if (piv == cplx(0.0, 0.0)) throw singular_error("thomas_solve: zero pivot at row 0");
    if (n > 1) cp[0] = sys.upper[0] / piv;
    dp[0] = sys.rhs[0] / piv;
    for (std::size_t j = 1; j < n; ++j) {
        piv = sys.diag[j] - sys.lower[j - 1] * cp[j - 1];
        if (piv == cplx(0.0, 0.0))
            throw singular_error("thomas_solve: zero pivot at row " + std::to_string(j));
        if (j + 1 < n) cp[j] = sys.upper[j] / piv;
        dp[j] = (sys.rhs[j] - sys.lower[j - 1] * dp[j - 1]) / piv;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) x[j] = dp[j] - cp[j] * x[j + 1];
    return x;
}

// Max-abs residual |A x - rhs|, for oracle comparisons.
inline double tridiag_residual(const TridiagonalSystem& sys, const std::vector<cplx>& x) {
    const std::size_t n = sys.size();
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        cplx ax = sys.diag[j] * x[j];
        if (j > 0) ax += sys.lower[j - 1] * x[j - 1];
        if (j + 1 < n) ax += sys.upper[j] * x[j + 1];
        r = std::max(r, std::abs(ax - sys.rhs[j]));
    }
    return r;
}

} // namespace sgsn
