#pragma once

// Variable-step BDF2, the comparison integrator.  Fully implicit: f is
// evaluated at the new time level.

#include <utility>

#include "dln/ode.hpp"
#include "dln/one_leg.hpp"
#include "dln/solver.hpp"
#include "dln/vec.hpp"

namespace dln {

struct Bdf2Coefficients {
    double ratio = 1.0;  // r = k_curr / k_prev
    double leading = 1.5;
    double mid = -2.0;
    double trailing = 0.5;
};

inline Bdf2Coefficients bdf2_coefficients(double k_prev, double k_curr) {
    if (!(k_prev > 0.0) || !(k_curr > 0.0))
        throw std::invalid_argument("bdf2_coefficients: steps must be positive");
    const double r = k_curr / k_prev;
    return {r, (1.0 + 2.0 * r) / (1.0 + r), -(1.0 + r), r * r / (1.0 + r)};
}

// Modulus of the non-principal root of the homogeneous recurrence; exceeds 1
// iff r > 1 + sqrt(2).
inline double bdf2_parasitic_root(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("bdf2_parasitic_root: ratio must be positive");
    return r * r / (1.0 + 2.0 * r);
}

// leading y_{n+1} + mid y_n + trailing y_{n-1} = k_curr f(t_{n+1}, y_{n+1})
inline std::pair<Vec, StepStats> bdf2_step(const OdeSystem& system, const SolutionWindow& w,
                                           double k_next, const SolverConfig& config) {
    w.validate();
    if (!(k_next > 0.0)) throw std::invalid_argument("bdf2_step: k_next must be positive");
    const Bdf2Coefficients c = bdf2_coefficients(w.k_prev, k_next);
    const double t_next = w.t_curr + k_next;

    auto residual = [&](const Vec& y) {
        Vec f = system.rhs(t_next, y);
        Vec r = combine3(c.trailing, w.y_prev, c.mid, w.y_curr, c.leading, y);
        for (std::size_t i = 0; i < r.size(); i++) r[i] -= k_next * f[i];
        return r;
    };
    Vec guess = combine3(-1.0, w.y_prev, 2.0, w.y_curr, 0.0, w.y_curr);

    SolveResult res;
    if (config.method == SolverConfig::Method::fixed_point) {
        auto g = [&](const Vec& y) {
            Vec f = system.rhs(t_next, y);
            Vec out(y.size());
            for (std::size_t i = 0; i < y.size(); i++)
                out[i] = (k_next * f[i] - c.mid * w.y_curr[i] - c.trailing * w.y_prev[i]) / c.leading;
            return out;
        };
        res = solve_fixed_point(g, guess, config);
        res.residual_norm *= c.leading;
    } else {
        std::function<Mat(const Vec&)> jac;
        if (system.has_jacobian()) {
            jac = [&](const Vec& y) {
                Mat Jf(system.dimension());
                system.jacobian(t_next, y, Jf);
                Mat J(system.dimension());
                for (int i = 0; i < J.n; i++)
                    for (int j = 0; j < J.n; j++)
                        J(i, j) = (i == j ? c.leading : 0.0) - k_next * Jf(i, j);
                return J;
            };
        }
        res = solve_newton(residual, jac, guess, config);
    }
    return {std::move(res.root), StepStats{res.iterations, res.residual_norm}};
}

}  // namespace dln
