#include <cmath>
#include <random>

#include "dln/one_leg.hpp"
#include "doctest.h"

using namespace dln;

namespace {

SolverConfig tight_newton() {
    SolverConfig cfg;
    cfg.method = SolverConfig::Method::newton;
    cfg.abs_tol = 1e-13;
    cfg.rel_tol = 1e-13;  // rounding floor scales with the state magnitude
    return cfg;
}

}  // namespace

TEST_CASE("y'=0 keeps the state exactly") {
    FunctionSystem sys(1, [](double, const Vec&, Vec& f) { f[0] = 0.0; });
    SolutionWindow w;
    w.t_prev = 0.0;
    w.t_curr = 0.1;
    w.k_prev = 0.1;
    w.y_prev = {1.0};
    w.y_curr = {1.0};
    auto [y, stats] = dln_step(sys, w, 0.07, 0.37, tight_newton());
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("residual of y=t^2 on the window t=(0,1,3)") {
    // y' = 2t evaluated at t_* makes the order-2 exactness condition exact.
    FunctionSystem sys(1, [](double t, const Vec&, Vec& f) { f[0] = 2.0 * t; });
    const SchemeCoefficients c = scheme_coefficients(0.5, 1.0, 2.0);
    SolutionWindow w;
    w.t_prev = 0.0;
    w.t_curr = 1.0;
    w.k_prev = 1.0;
    w.y_prev = {0.0};
    w.y_curr = {1.0};
    const Vec r = one_leg_residual(c, w, 2.0, {9.0}, sys);
    CHECK(std::fabs(r[0]) <= 1e-12);
    // the two sides individually
    const double sum_alpha = c.alpha[0] * 0.0 + c.alpha[1] * 1.0 + c.alpha[2] * 9.0;
    CHECK(sum_alpha == doctest::Approx(6.25));
    const double t_star = c.beta[0] * 0.0 + c.beta[1] * 1.0 + c.beta[2] * 3.0;
    CHECK(c.k_hat * 2.0 * t_star == doctest::Approx(6.25));
}

TEST_CASE("polynomial exactness over random step sequences") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> step_d(0.01, 0.4);
    std::uniform_real_distribution<double> theta_d(0.0, 1.0);
    for (int trial = 0; trial < 20; trial++) {
        const double theta = theta_d(rng);
        for (int poly = 0; poly <= 2; poly++) {
            auto u = [poly](double t) { return std::pow(t, poly); };
            auto du = [poly](double t) { return poly == 0 ? 0.0 : poly * std::pow(t, poly - 1); };
            FunctionSystem sys(1, [&](double t, const Vec&, Vec& f) { f[0] = du(t); });
            SolutionWindow w;
            w.t_prev = 0.0;
            w.k_prev = step_d(rng);
            w.t_curr = w.k_prev;
            w.y_prev = {u(0.0)};
            w.y_curr = {u(w.t_curr)};
            for (int n = 0; n < 50; n++) {
                const double k = step_d(rng);
                auto [y, stats] = dln_step(sys, w, k, theta, tight_newton());
                const double exact = u(w.t_curr + k);
                CHECK(std::fabs(y[0] - exact) <= 1e-10 * std::max(1.0, std::fabs(exact)));
                w.advance(k, {exact});  // keep the window on the exact trajectory
            }
        }
    }
}

TEST_CASE("y'=-y matches the scalar recurrence oracle") {
    FunctionSystem sys(1, [](double, const Vec& y, Vec& f) { f[0] = -y[0]; });
    const double k = 0.1, theta = 0.5;
    const SchemeCoefficients c = scheme_coefficients(theta, k, k);
    SolutionWindow w;
    w.t_prev = 0.0;
    w.t_curr = k;
    w.k_prev = k;
    w.y_prev = {1.0};
    w.y_curr = {std::exp(-k)};
    double o_prev = 1.0, o_curr = std::exp(-k);
    for (int n = 0; n < 10; n++) {
        auto [y, stats] = dln_step(sys, w, k, theta, tight_newton());
        // recurrence: (alpha2 + k_hat beta2) y+ = -(alpha1 + k_hat beta1) y0 - (alpha0 + k_hat beta0) y-
        const double o_next = (-(c.alpha[1] + c.k_hat * c.beta[1]) * o_curr -
                               (c.alpha[0] + c.k_hat * c.beta[0]) * o_prev) /
                              (c.alpha[2] + c.k_hat * c.beta[2]);
        CHECK(std::fabs(y[0] - o_next) <= 1e-12);
        w.advance(k, y);
        o_prev = o_curr;
        o_curr = o_next;
    }
}

TEST_CASE("bootstrap builds a consistent window with a midpoint step") {
    FunctionSystem sys(1, [](double, const Vec& y, Vec& f) { f[0] = -y[0]; });
    const double k = 0.05;
    const SolutionWindow w = bootstrap_window(sys, 0.0, {1.0}, k, tight_newton());
    CHECK(w.t_prev == doctest::Approx(0.0));
    CHECK(w.t_curr == doctest::Approx(k));
    // one-leg midpoint: y1 = y0 (1 - k/2 lam...) => (1 - k/2)/(1 + k/2) for lam=-1
    CHECK(w.y_curr[0] == doctest::Approx((1.0 - 0.5 * k) / (1.0 + 0.5 * k)).epsilon(1e-12));
}

TEST_CASE("theta=1 reproduces the one-leg midpoint rule") {
    FunctionSystem sys(1, [](double, const Vec& y, Vec& f) { f[0] = -2.0 * y[0]; });
    const double k = 0.1;
    SolutionWindow w;
    w.t_prev = 0.0;
    w.t_curr = k;
    w.k_prev = k;
    w.y_prev = {3.0};  // must be ignored by theta=1
    w.y_curr = {1.0};
    auto [y, stats] = dln_step(sys, w, k, 1.0, tight_newton());
    CHECK(y[0] == doctest::Approx((1.0 - k) / (1.0 + k)).epsilon(1e-12));
}

TEST_CASE("invalid step arguments") {
    FunctionSystem sys(1, [](double, const Vec&, Vec& f) { f[0] = 0.0; });
    SolutionWindow w;
    w.t_prev = 0.0;
    w.t_curr = 0.1;
    w.k_prev = 0.1;
    w.y_prev = {1.0};
    w.y_curr = {1.0};
    CHECK_THROWS_AS(dln_step(sys, w, -0.1, 0.5, tight_newton()), std::invalid_argument);
    w.k_prev = 0.0;
    CHECK_THROWS_AS(dln_step(sys, w, 0.1, 0.5, tight_newton()), std::invalid_argument);
}
