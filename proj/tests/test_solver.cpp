#include <cmath>

#include "dln/one_leg.hpp"
#include "dln/solver.hpp"
#include "doctest.h"

using namespace dln;

TEST_CASE("fixed point on an affine contraction") {
    SolverConfig cfg;
    cfg.abs_tol = 1e-13;
    auto g = [](const Vec& x) { return Vec{0.5 * x[0] + 1.0}; };
    const SolveResult res = solve_fixed_point(g, {0.0}, cfg);
    CHECK(res.root[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fixed point on an expansion fails with diagnostics") {
    SolverConfig cfg;
    cfg.max_iter = 60;
    auto g = [](const Vec& x) { return Vec{2.0 * x[0] + 1.0}; };
    CHECK_THROWS_AS(solve_fixed_point(g, {1.0}, cfg), SolverFailure);
    try {
        solve_fixed_point(g, {1.0}, cfg);
    } catch (const SolverFailure& f) {
        CHECK(f.iterations >= 1);
        CHECK(f.last_iterate.size() == 1);
    }
}

TEST_CASE("newton solves x^2 = 4") {
    SolverConfig cfg;
    auto r = [](const Vec& x) { return Vec{x[0] * x[0] - 4.0}; };
    auto j = [](const Vec& x) {
        Mat J(1);
        J(0, 0) = 2.0 * x[0];
        return J;
    };
    CHECK(solve_newton(r, j, {3.0}, cfg).root[0] == doctest::Approx(2.0).epsilon(1e-12));
    // finite-difference fallback
    CHECK(solve_newton(r, {}, {3.0}, cfg).root[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("newton on a linear residual converges immediately") {
    SolverConfig cfg;
    auto r = [](const Vec& x) { return Vec{x[0]}; };
    const SolveResult res = solve_newton(r, {}, {0.0}, cfg);
    CHECK(res.root[0] == doctest::Approx(0.0));
    CHECK(res.iterations <= 1);
}

TEST_CASE("stiff step: newton converges where fixed point diverges") {
    // y' = -1000 (y - cos t)
    FunctionSystem sys(
        1, [](double t, const Vec& y, Vec& f) { f[0] = -1000.0 * (y[0] - std::cos(t)); },
        [](double, const Vec&, Mat& J) { J(0, 0) = -1000.0; });
    SolutionWindow w;
    w.t_prev = 0.0;
    w.t_curr = 0.01;
    w.k_prev = 0.01;
    w.y_prev = {1.0};
    w.y_curr = {std::cos(0.01)};

    SolverConfig newton_cfg;
    newton_cfg.method = SolverConfig::Method::newton;
    auto [y, stats] = dln_step(sys, w, 0.01, 0.5, newton_cfg);
    CHECK(stats.iterations <= 8);
    CHECK(y[0] == doctest::Approx(std::cos(0.02)).epsilon(1e-3));

    SolverConfig picard_cfg;
    picard_cfg.method = SolverConfig::Method::fixed_point;
    picard_cfg.max_iter = 100;
    CHECK_THROWS_AS(dln_step(sys, w, 0.01, 0.5, picard_cfg), SolverFailure);
}

TEST_CASE("both solvers accept the same root on a smooth problem") {
    FunctionSystem sys(2, [](double, const Vec& y, Vec& f) {
        f[0] = -y[0] + 0.1 * y[1];
        f[1] = -y[1] + 0.1 * std::sin(y[0]);
    });
    SolutionWindow w;
    w.t_prev = 0.0;
    w.t_curr = 0.05;
    w.k_prev = 0.05;
    w.y_prev = {1.0, -0.5};
    w.y_curr = {0.95, -0.47};
    SolverConfig fp;
    fp.method = SolverConfig::Method::fixed_point;
    fp.abs_tol = 1e-13;
    SolverConfig nw;
    nw.method = SolverConfig::Method::newton;
    nw.abs_tol = 1e-13;
    auto [yf, sf] = dln_step(sys, w, 0.05, 0.5, fp);
    auto [yn, sn] = dln_step(sys, w, 0.05, 0.5, nw);
    CHECK(std::fabs(yf[0] - yn[0]) <= 2e-13);
    CHECK(std::fabs(yf[1] - yn[1]) <= 2e-13);
}
