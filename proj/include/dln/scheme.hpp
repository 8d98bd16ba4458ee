#pragma once

// Coefficients and energy functionals of the variable-step DLN family.
//
// The method is parametrized by theta in [0,1] and the two step sizes of the
// current window.  theta = 1 collapses to the one-leg trapezoid (midpoint)
// rule; smaller theta trades accuracy constants for numerical dissipation.

#include <array>
#include <cmath>
#include <stdexcept>

#include "dln/vec.hpp"

namespace dln {

// eps = (k_curr - k_prev) / (k_curr + k_prev), in (-1,1) for positive steps
inline double step_variability(double k_prev, double k_curr) {
    if (!(k_prev > 0.0) || !(k_curr > 0.0))
        throw std::invalid_argument("step_variability: steps must be positive");
    return (k_curr - k_prev) / (k_curr + k_prev);
}

// One step window of DLN coefficients.  Arrays are indexed by the window
// offset l = 0,1,2, i.e. alpha[2] multiplies the newest state.
struct SchemeCoefficients {
    double theta = 0.0;
    double eps = 0.0;    // step variability of the window
    double k_hat = 0.0;  // averaged step alpha2*k_curr - alpha0*k_prev
    std::array<double, 3> alpha{};
    std::array<double, 3> beta{};
    std::array<double, 3> a{};  // dissipation coefficients
};

inline SchemeCoefficients scheme_coefficients(double theta, double k_prev, double k_curr) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("scheme_coefficients: theta must lie in [0,1]");
    const double eps = step_variability(k_prev, k_curr);
    const double w = 1.0 + eps * theta;
    if (w < 1e-12)
        throw std::invalid_argument("scheme_coefficients: degenerate window, 1+eps*theta ~ 0");

    SchemeCoefficients c;
    c.theta = theta;
    c.eps = eps;
    c.alpha = {0.5 * (theta - 1.0), -theta, 0.5 * (theta + 1.0)};

    const double q = (1.0 - theta * theta) / (w * w);
    const double s = eps * eps * theta * q;
    c.beta = {0.25 * (1.0 + q - s - theta),
              0.5 * (1.0 - q),
              0.25 * (1.0 + q + s + theta)};

    const double a1 = -std::sqrt(theta * (1.0 - theta * theta)) / (std::sqrt(2.0) * w);
    c.a = {-0.5 * (1.0 + eps) * a1, a1, -0.5 * (1.0 - eps) * a1};

    c.k_hat = c.alpha[2] * k_curr - c.alpha[0] * k_prev;
    return c;
}

// |(u,v)|_G^2 = 1/4 (1+theta)|u|^2 + 1/4 (1-theta)|v|^2
inline double g_norm_sq(double theta, const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("g_norm_sq: dimension mismatch");
    return 0.25 * (1.0 + theta) * norm2_sq(u) + 0.25 * (1.0 - theta) * norm2_sq(v);
}

// D_n = |sum_l a_l y_l|^2 / k_hat, the method-induced energy removal rate
inline double numerical_dissipation(const SchemeCoefficients& c, const Vec& y_prev,
                                    const Vec& y_curr, const Vec& y_next) {
    const Vec d = combine3(c.a[0], y_prev, c.a[1], y_curr, c.a[2], y_next);
    return norm2_sq(d) / c.k_hat;
}

}  // namespace dln
