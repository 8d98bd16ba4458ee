#pragma once

// The one-leg DLN step for abstract first-order systems:
//   sum_l alpha_l y_l = k_hat * f( sum_l beta_l t_l , sum_l beta_l y_l ).

#include <cmath>
#include <utility>

#include "dln/ode.hpp"
#include "dln/scheme.hpp"
#include "dln/solver.hpp"
#include "dln/vec.hpp"

namespace dln {

struct StepStats {
    int iterations = 0;
    double residual_norm = 0.0;
};

// r(y_next) = sum_l alpha_l y_l - k_hat f(t_*, y_*); y_next solves the step
// iff r = 0.
inline Vec one_leg_residual(const SchemeCoefficients& c, const SolutionWindow& w,
                            double k_next, const Vec& y_next, const OdeSystem& system) {
    const double t_next = w.t_curr + k_next;
    const double t_star = c.beta[0] * w.t_prev + c.beta[1] * w.t_curr + c.beta[2] * t_next;
    const Vec y_star = combine3(c.beta[0], w.y_prev, c.beta[1], w.y_curr, c.beta[2], y_next);
    const Vec f = system.rhs(t_star, y_star);
    Vec r = combine3(c.alpha[0], w.y_prev, c.alpha[1], w.y_curr, c.alpha[2], y_next);
    for (std::size_t i = 0; i < r.size(); i++) r[i] -= c.k_hat * f[i];
    return r;
}

// Advances the window by one DLN step of size k_next (does not mutate the
// window; callers advance it on acceptance).
inline std::pair<Vec, StepStats> dln_step(const OdeSystem& system, const SolutionWindow& w,
                                          double k_next, double theta,
                                          const SolverConfig& config) {
    w.validate();
    if (!(k_next > 0.0)) throw std::invalid_argument("dln_step: k_next must be positive");
    const SchemeCoefficients c = scheme_coefficients(theta, w.k_prev, k_next);
    const double t_next = w.t_curr + k_next;
    const double t_star = c.beta[0] * w.t_prev + c.beta[1] * w.t_curr + c.beta[2] * t_next;

    auto residual = [&](const Vec& y) { return one_leg_residual(c, w, k_next, y, system); };
    // Extrapolated predictor
    Vec guess = combine3(-1.0, w.y_prev, 2.0, w.y_curr, 0.0, w.y_curr);

    SolveResult res;
    if (config.method == SolverConfig::Method::fixed_point) {
        // y = ( k_hat f(t_*, y_*) - alpha1 y_n - alpha0 y_{n-1} ) / alpha2
        auto g = [&](const Vec& y) {
            const Vec y_star = combine3(c.beta[0], w.y_prev, c.beta[1], w.y_curr, c.beta[2], y);
            Vec f = system.rhs(t_star, y_star);
            Vec out(y.size());
            for (std::size_t i = 0; i < y.size(); i++)
                out[i] = (c.k_hat * f[i] - c.alpha[1] * w.y_curr[i] - c.alpha[0] * w.y_prev[i]) /
                         c.alpha[2];
            return out;
        };
        res = solve_fixed_point(g, guess, config);
        res.residual_norm *= c.alpha[2];  // map residual back to equation scale
    } else {
        std::function<Mat(const Vec&)> jac;
        if (system.has_jacobian()) {
            jac = [&](const Vec& y) {
                const Vec y_star = combine3(c.beta[0], w.y_prev, c.beta[1], w.y_curr, c.beta[2], y);
                Mat Jf(system.dimension());
                system.jacobian(t_star, y_star, Jf);
                Mat J(system.dimension());
                for (int i = 0; i < J.n; i++)
                    for (int j = 0; j < J.n; j++)
                        J(i, j) = (i == j ? c.alpha[2] : 0.0) - c.k_hat * c.beta[2] * Jf(i, j);
                return J;
            };
        }
        res = solve_newton(residual, jac, guess, config);
    }
    return {std::move(res.root), StepStats{res.iterations, res.residual_norm}};
}

// Startup: one theta=1 (one-leg midpoint) step from a single state builds the
// two-state window the method needs.
inline SolutionWindow bootstrap_window(const OdeSystem& system, double t0, const Vec& y0, double k0,
                                       const SolverConfig& config) {
    SolutionWindow seed;
    seed.t_prev = t0 - k0;
    seed.t_curr = t0;
    seed.y_prev = y0;  // theta=1 coefficients never touch the oldest state
    seed.y_curr = y0;
    seed.k_prev = k0;
    auto [y1, stats] = dln_step(system, seed, k0, 1.0, config);
    (void)stats;
    SolutionWindow w;
    w.t_prev = t0;
    w.t_curr = t0 + k0;
    w.y_prev = y0;
    w.y_curr = std::move(y1);
    w.k_prev = k0;
    return w;
}

}  // namespace dln
