#pragma once

// Executable forms of the method's algebraic claims: the G-stability
// identity, the root-locus stability boundary, measured consistency orders,
// and non-autonomous linear test runs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "dln/bdf2.hpp"
#include "dln/scheme.hpp"
#include "dln/vec.hpp"

namespace dln {

// ---- G-stability identity ----------------------------------------------

// |(sum_a y, sum_b y) - [ |(y2,y1)|_G^2 - |(y1,y0)|_G^2 + |sum_a_l y|^2 ]|,
// evaluated with both sides formed independently.  Zero (to rounding) for
// every theta in [0,1] and eps in (-1,1).
inline double g_identity_gap(double theta, double eps, const Vec& y_prev, const Vec& y_curr,
                             const Vec& y_next) {
    // Any step pair with this variability; the identity never sees the steps.
    const double k_prev = 1.0;
    const double k_curr = (1.0 + eps) / (1.0 - eps);
    const SchemeCoefficients c = scheme_coefficients(theta, k_prev, k_curr);

    const Vec sum_alpha = combine3(c.alpha[0], y_prev, c.alpha[1], y_curr, c.alpha[2], y_next);
    const Vec sum_beta = combine3(c.beta[0], y_prev, c.beta[1], y_curr, c.beta[2], y_next);
    const double lhs = dot(sum_alpha, sum_beta);

    const Vec sum_a = combine3(c.a[0], y_prev, c.a[1], y_curr, c.a[2], y_next);
    const double rhs = g_norm_sq(theta, y_next, y_curr) - g_norm_sq(theta, y_curr, y_prev) +
                       norm2_sq(sum_a);
    return std::fabs(lhs - rhs);
}

// ---- root locus --------------------------------------------------------

struct BoundaryLocus {
    struct Sample {
        double phi = 0.0;
        std::complex<double> z;
        bool pole = false;  // sigma(e^{i phi}) vanished; z meaningless
    };
    double theta = 0.0;
    std::vector<Sample> samples;

    // Minimum real part over non-pole samples.
    double min_re() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& s : samples)
            if (!s.pole) m = std::min(m, s.z.real());
        return m;
    }
};

// z(phi) = rho(e^{i phi}) / sigma(e^{i phi}) with the constant-step (eps=0)
// coefficients.  Evaluated as rho * conj(sigma) / |sigma|^2 through cosine /
// sine expansions so that the algebraic cancellations survive rounding.
inline BoundaryLocus root_locus(double theta, int n_samples) {
    if (n_samples < 1) throw std::invalid_argument("root_locus: need at least one sample");
    const SchemeCoefficients c = scheme_coefficients(theta, 1.0, 1.0);

    BoundaryLocus locus;
    locus.theta = theta;
    locus.samples.resize(n_samples);
    const double two_pi = 2.0 * M_PI;
    for (int i = 0; i < n_samples; i++) {
        const double phi = two_pi * i / n_samples;
        const double cs[3] = {1.0, std::cos(phi), std::cos(2.0 * phi)};
        const double sn[3] = {0.0, std::sin(phi), std::sin(2.0 * phi)};
        double re_num = 0.0, im_num = 0.0, s2 = 0.0;
        for (int j = 0; j < 3; j++) {
            for (int l = 0; l < 3; l++) {
                const int d = j - l;
                const double cd = cs[std::abs(d)];
                const double sd = (d >= 0 ? sn[d] : -sn[-d]);
                re_num += c.alpha[j] * c.beta[l] * cd;
                im_num += c.alpha[j] * c.beta[l] * sd;
                s2 += c.beta[j] * c.beta[l] * cd;
            }
        }
        auto& s = locus.samples[i];
        s.phi = phi;
        if (s2 <= 1e-12) {
            s.pole = true;
        } else {
            s.z = {re_num / s2, im_num / s2};
        }
    }
    return locus;
}

// ---- measured consistency orders ---------------------------------------

enum class StepLaw { constant, alternating };

struct ConsistencyOrders {
    double order_state = 0.0;       // |sum_l beta_l u(t_l) - u(t_*)| vs k
    double order_derivative = 0.0;  // |sum_l alpha_l u(t_l)/k_hat - u'(t_*)| vs k
};

namespace detail {

// Least-squares slope of log(e) vs log(k).
inline double fitted_slope(const std::vector<double>& k, const std::vector<double>& e) {
    const int n = static_cast<int>(k.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; i++) {
        const double x = std::log(k[i]);
        const double y = std::log(e[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// Measures both consistency functionals against dyadic step refinement and
// fits the slopes on the finest four of six levels (the coarse levels are
// preasymptotic).
inline ConsistencyOrders consistency_order(const std::function<double(double)>& u,
                                           const std::function<double(double)>& du, double theta,
                                           StepLaw law) {
    const int n_levels = 6;
    std::vector<double> ks, e_state, e_deriv;
    for (int j = 0; j < n_levels; j++) {
        const double k = 0.1 * std::pow(2.0, -j);
        double worst_state = 0.0, worst_deriv = 0.0;
        // Sweep the window over [0.5, 1.5]; both phases of the alternating law.
        for (int phase = 0; phase < (law == StepLaw::alternating ? 2 : 1); phase++) {
            double k_prev = k, k_curr = k;
            if (law == StepLaw::alternating) {
                k_prev = (phase == 0) ? k : 2.0 * k;
                k_curr = (phase == 0) ? 2.0 * k : k;
            }
            const SchemeCoefficients c = scheme_coefficients(theta, k_prev, k_curr);
            for (int m = 0; m < 10; m++) {
                const double t1 = 0.5 + 0.1 * m;
                const double t0 = t1 - k_prev;
                const double t2 = t1 + k_curr;
                const double t_star = c.beta[0] * t0 + c.beta[1] * t1 + c.beta[2] * t2;
                const double state =
                    c.beta[0] * u(t0) + c.beta[1] * u(t1) + c.beta[2] * u(t2) - u(t_star);
                const double deriv =
                    (c.alpha[0] * u(t0) + c.alpha[1] * u(t1) + c.alpha[2] * u(t2)) / c.k_hat -
                    du(t_star);
                worst_state = std::max(worst_state, std::fabs(state));
                worst_deriv = std::max(worst_deriv, std::fabs(deriv));
            }
        }
        ks.push_back(k);
        e_state.push_back(worst_state);
        e_deriv.push_back(worst_deriv);
    }
    const std::vector<double> kf(ks.end() - 4, ks.end());
    ConsistencyOrders out;
    out.order_state = detail::fitted_slope(kf, {e_state.end() - 4, e_state.end()});
    out.order_derivative = detail::fitted_slope(kf, {e_deriv.end() - 4, e_deriv.end()});
    return out;
}

// ---- non-autonomous linear runs ----------------------------------------

struct LinearRun {
    std::vector<double> times;
    std::vector<std::complex<double>> trajectory;
    std::vector<double> g_norm_sq_series;  // |(y_{n+1}, y_n)|_G^2 after each step
};

namespace detail {

inline double cplx_g_norm_sq(double theta, std::complex<double> u, std::complex<double> v) {
    return 0.25 * (1.0 + theta) * std::norm(u) + 0.25 * (1.0 - theta) * std::norm(v);
}

}  // namespace detail

// y' = lambda(t) y stepped by DLN; the per-step linear solve is closed form.
// steps[0] builds the startup state with a theta=1 step.
inline LinearRun linear_test_run(const std::function<std::complex<double>(double)>& lambda_fn,
                                 const std::vector<double>& steps, double theta,
                                 std::complex<double> y0 = 1.0) {
    if (steps.size() < 2) throw std::invalid_argument("linear_test_run: need at least two steps");
    LinearRun run;
    run.times.push_back(0.0);
    run.trajectory.push_back(y0);

    auto advance = [&](double th, double k_prev, double k_curr) {
        const SchemeCoefficients c = scheme_coefficients(th, k_prev, k_curr);
        const std::size_t n = run.trajectory.size();
        const std::complex<double> yc = run.trajectory[n - 1];
        const std::complex<double> yp = (n >= 2) ? run.trajectory[n - 2] : yc;
        const double t_curr = run.times.back();
        const double t_prev = t_curr - k_prev;
        const double t_star =
            c.beta[0] * t_prev + c.beta[1] * t_curr + c.beta[2] * (t_curr + k_curr);
        const std::complex<double> lam = lambda_fn(t_star);
        const std::complex<double> yn =
            -((c.alpha[1] - c.k_hat * lam * c.beta[1]) * yc +
              (c.alpha[0] - c.k_hat * lam * c.beta[0]) * yp) /
            (c.alpha[2] - c.k_hat * lam * c.beta[2]);
        run.trajectory.push_back(yn);
        run.times.push_back(t_curr + k_curr);
    };

    advance(1.0, steps[0], steps[0]);  // midpoint startup
    for (std::size_t n = 1; n < steps.size(); n++) advance(theta, steps[n - 1], steps[n]);

    for (std::size_t n = 1; n < run.trajectory.size(); n++)
        run.g_norm_sq_series.push_back(
            detail::cplx_g_norm_sq(theta, run.trajectory[n], run.trajectory[n - 1]));
    return run;
}

// Matching BDF2 run for side-by-side comparisons.
inline LinearRun bdf2_linear_run(const std::function<std::complex<double>(double)>& lambda_fn,
                                 const std::vector<double>& steps,
                                 std::complex<double> y0 = 1.0) {
    if (steps.size() < 2) throw std::invalid_argument("bdf2_linear_run: need at least two steps");
    LinearRun run;
    run.times.push_back(0.0);
    run.trajectory.push_back(y0);
    {
        // trapezoid startup step
        const double k = steps[0];
        const std::complex<double> lam = lambda_fn(0.5 * k);
        run.trajectory.push_back(y0 * (1.0 + 0.5 * k * lam) / (1.0 - 0.5 * k * lam));
        run.times.push_back(k);
    }
    for (std::size_t n = 1; n < steps.size(); n++) {
        const Bdf2Coefficients c = bdf2_coefficients(steps[n - 1], steps[n]);
        const std::size_t m = run.trajectory.size();
        const double t_next = run.times.back() + steps[n];
        const std::complex<double> lam = lambda_fn(t_next);
        const std::complex<double> yn =
            -(c.mid * run.trajectory[m - 1] + c.trailing * run.trajectory[m - 2]) /
            (c.leading - steps[n] * lam);
        run.trajectory.push_back(yn);
        run.times.push_back(t_next);
    }
    for (std::size_t n = 1; n < run.trajectory.size(); n++)
        run.g_norm_sq_series.push_back(
            detail::cplx_g_norm_sq(1.0, run.trajectory[n], run.trajectory[n - 1]));
    return run;
}

}  // namespace dln
