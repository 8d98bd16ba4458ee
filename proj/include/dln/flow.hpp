#pragma once

// 2D incompressible Navier-Stokes on the periodic torus, dealiased
// pseudo-spectral in space, stepped by the one-leg DLN scheme (or BDF2 for
// comparison).  Pressure is eliminated by the Leray projection, which is
// diagonal per Fourier mode here, so velocity stays divergence-free to
// rounding at every step.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "dln/grid.hpp"
#include "dln/scheme.hpp"
#include "dln/solver.hpp"

namespace dln {

struct FlowState {
    double time = 0.0;
    CVec u1, u2;  // spectral velocity components
};

// ---- norms on the torus (Parseval) -------------------------------------

inline double field_l2_sq(const SpectralGrid& g, const CVec& u1, const CVec& u2) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); i++) s += std::norm(u1[i]) + std::norm(u2[i]);
    return g.length() * g.length() * s;
}

inline double field_grad_sq(const SpectralGrid& g, const CVec& u1, const CVec& u2) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); i++) s += g.k2(i) * (std::norm(u1[i]) + std::norm(u2[i]));
    return g.length() * g.length() * s;
}

inline double kinetic_energy(const SpectralGrid& g, const FlowState& s) {
    return 0.5 * field_l2_sq(g, s.u1, s.u2);
}

// Dual norm ||f||_*^2 on the divergence-free space: project, weight by 1/|k|^2.
inline double field_dual_sq(const SpectralGrid& g, const CVec& f1, const CVec& f2);

// ---- Leray projection --------------------------------------------------

inline void leray_project(const SpectralGrid& g, CVec& u1, CVec& u2) {
    if (u1.size() != g.size() || u2.size() != g.size())
        throw std::invalid_argument("leray_project: field size mismatch");
    const int n = g.n();
    for (int i = 0; i < n; i++) {
        const double kx = g.kx(i);
        for (int j = 0; j < n; j++) {
            const double ky = g.ky(j);
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            const Cplx d = (kx * u1[idx] + ky * u2[idx]) / k2;
            u1[idx] -= kx * d;
            u2[idx] -= ky * d;
        }
    }
}

inline double field_dual_sq(const SpectralGrid& g, const CVec& f1, const CVec& f2) {
    CVec p1 = f1, p2 = f2;
    leray_project(g, p1, p2);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); i++) {
        if (g.k2(i) == 0.0) continue;
        s += (std::norm(p1[i]) + std::norm(p2[i])) / g.k2(i);
    }
    return g.length() * g.length() * s;
}

inline double max_divergence(const SpectralGrid& g, const CVec& u1, const CVec& u2) {
    const int n = g.n();
    double m = 0.0;
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            m = std::max(m, std::abs(g.kx(i) * u1[idx] + g.ky(j) * u2[idx]));
        }
    return m;
}

// ---- convection --------------------------------------------------------

namespace flow_detail {

// Physical-space field of a spectral input, optionally differentiated.
inline std::vector<double> physical_deriv(const SpectralGrid& g, const CVec& f, int dx, int dy) {
    CVec tmp(g.size());
    const int n = g.n();
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            Cplx c = f[idx];
            if (dx) c *= Cplx(0.0, g.kx(i));
            if (dy) c *= Cplx(0.0, g.ky(j));
            tmp[idx] = c;
        }
    return g.to_physical(tmp);
}

}  // namespace flow_detail

// Spectral coefficients of w . grad v, dealiased.  With div-free w this is
// the skew form b*(w, v, .) up to the Leray projection applied by callers.
inline std::pair<CVec, CVec> convection(const SpectralGrid& g, const CVec& w1, const CVec& w2,
                                        const CVec& v1, const CVec& v2) {
    CVec cw1 = w1, cw2 = w2, cv1 = v1, cv2 = v2;
    g.apply_dealias(cw1);
    g.apply_dealias(cw2);
    g.apply_dealias(cv1);
    g.apply_dealias(cv2);
    const auto wp1 = g.to_physical(cw1);
    const auto wp2 = g.to_physical(cw2);
    const auto v1x = flow_detail::physical_deriv(g, cv1, 1, 0);
    const auto v1y = flow_detail::physical_deriv(g, cv1, 0, 1);
    const auto v2x = flow_detail::physical_deriv(g, cv2, 1, 0);
    const auto v2y = flow_detail::physical_deriv(g, cv2, 0, 1);
    std::vector<double> n1(g.size()), n2(g.size());
    for (std::size_t i = 0; i < g.size(); i++) {
        n1[i] = wp1[i] * v1x[i] + wp2[i] * v1y[i];
        n2[i] = wp1[i] * v2x[i] + wp2[i] * v2y[i];
    }
    CVec s1 = g.to_spectral(n1);
    CVec s2 = g.to_spectral(n2);
    g.apply_dealias(s1);
    g.apply_dealias(s2);
    return {std::move(s1), std::move(s2)};
}

// Explicitly skew-symmetrized trilinear form
//   b*(u,v,w) = 1/2 (u.grad v, w) - 1/2 (u.grad w, v),
// evaluated by grid quadrature of dealiased fields (exact for the retained
// band).  Vanishes when the last two arguments coincide.
inline double trilinear_form(const SpectralGrid& g, const CVec& u1, const CVec& u2, const CVec& v1,
                             const CVec& v2, const CVec& w1, const CVec& w2) {
    if (u1.size() != g.size() || v1.size() != g.size() || w1.size() != g.size())
        throw std::invalid_argument("trilinear_form: grid mismatch");
    CVec du1 = u1, du2 = u2, dv1 = v1, dv2 = v2, dw1 = w1, dw2 = w2;
    for (CVec* f : {&du1, &du2, &dv1, &dv2, &dw1, &dw2}) g.apply_dealias(*f);
    const auto up1 = g.to_physical(du1);
    const auto up2 = g.to_physical(du2);
    const auto vp1 = g.to_physical(dv1);
    const auto vp2 = g.to_physical(dv2);
    const auto wp1 = g.to_physical(dw1);
    const auto wp2 = g.to_physical(dw2);
    const auto v1x = flow_detail::physical_deriv(g, dv1, 1, 0);
    const auto v1y = flow_detail::physical_deriv(g, dv1, 0, 1);
    const auto v2x = flow_detail::physical_deriv(g, dv2, 1, 0);
    const auto v2y = flow_detail::physical_deriv(g, dv2, 0, 1);
    const auto w1x = flow_detail::physical_deriv(g, dw1, 1, 0);
    const auto w1y = flow_detail::physical_deriv(g, dw1, 0, 1);
    const auto w2x = flow_detail::physical_deriv(g, dw2, 1, 0);
    const auto w2y = flow_detail::physical_deriv(g, dw2, 0, 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); i++) {
        const double ugradv_w = (up1[i] * v1x[i] + up2[i] * v1y[i]) * wp1[i] +
                                (up1[i] * v2x[i] + up2[i] * v2y[i]) * wp2[i];
        const double ugradw_v = (up1[i] * w1x[i] + up2[i] * w1y[i]) * vp1[i] +
                                (up1[i] * w2x[i] + up2[i] * w2y[i]) * vp2[i];
        acc += 0.5 * (ugradv_w - ugradw_v);
    }
    const double h = g.length() / g.n();
    return acc * h * h;
}

// ---- problems and analytic fields --------------------------------------

struct FlowProblem {
    SpectralGrid grid;
    double nu = 1.0;
    // Body force at time t as spectral fields; empty function means f = 0.
    std::function<std::pair<CVec, CVec>(double)> force;

    FlowProblem(SpectralGrid g, double nu_) : grid(std::move(g)), nu(nu_) {
        if (!(nu > 0.0)) throw std::invalid_argument("FlowProblem: nu must be positive");
    }

    std::pair<CVec, CVec> force_at(double t) const {
        if (!force) return {CVec(grid.size(), 0.0), CVec(grid.size(), 0.0)};
        return force(t);
    }
};

namespace flow_detail {

inline std::size_t mode_index(const SpectralGrid& g, int mx, int my) {
    const int n = g.n();
    const int i = (mx >= 0) ? mx : n + mx;
    const int j = (my >= 0) ? my : n + my;
    return static_cast<std::size_t>(i) * n + j;
}

}  // namespace flow_detail

// Taylor-Green vortex on [0, 2pi]^2:
//   u1 = -cos(w x) sin(w y) exp(-2 w^2 nu t),
//   u2 =  sin(w x) cos(w y) exp(-2 w^2 nu t),  f = 0.
// Its self-advection is a pure gradient, so it solves the projected NSE
// exactly; the four modes are set analytically.
inline FlowState taylor_green_exact(const SpectralGrid& g, double t, int w, double nu) {
    if (w < 1 || w > g.n() / 3) throw std::invalid_argument("taylor_green_exact: bad wavenumber");
    const double amp = 0.25 * std::exp(-2.0 * w * w * nu * t);
    FlowState s;
    s.time = t;
    s.u1.assign(g.size(), 0.0);
    s.u2.assign(g.size(), 0.0);
    const Cplx ia(0.0, amp);
    using flow_detail::mode_index;
    s.u1[mode_index(g, w, w)] = ia;
    s.u1[mode_index(g, -w, w)] = ia;
    s.u1[mode_index(g, w, -w)] = -ia;
    s.u1[mode_index(g, -w, -w)] = -ia;
    s.u2[mode_index(g, w, w)] = -ia;
    s.u2[mode_index(g, w, -w)] = -ia;
    s.u2[mode_index(g, -w, w)] = ia;
    s.u2[mode_index(g, -w, -w)] = ia;
    return s;
}

// Kolmogorov-type stirring f = (A sin(m y), 0): divergence-free,
// time-independent, supported on modes (0, +-m) of the first component.
inline std::pair<CVec, CVec> periodic_stirring_force(const SpectralGrid& g, double amplitude,
                                                     int mode) {
    if (!std::isfinite(amplitude)) throw std::invalid_argument("stirring force: bad amplitude");
    CVec f1(g.size(), 0.0), f2(g.size(), 0.0);
    if (amplitude != 0.0) {
        f1[flow_detail::mode_index(g, 0, mode)] = Cplx(0.0, -0.5 * amplitude);
        f1[flow_detail::mode_index(g, 0, -mode)] = Cplx(0.0, 0.5 * amplitude);
    }
    return {std::move(f1), std::move(f2)};
}

// ---- time stepping -----------------------------------------------------

enum class ConvectionMode { fully_implicit, linearly_implicit };

struct FlowStepStats {
    int iterations = 0;
    double residual_norm = 0.0;
};

// One one-leg DLN step of the projected NSE.  fully_implicit iterates
// Picard on the convecting field; linearly_implicit freezes it at the
// extrapolant beta2 (2u_n - u_{n-1}) + beta1 u_n + beta0 u_{n-1} and the
// sweeps only resolve the (linear) transported slot.
inline std::pair<FlowState, FlowStepStats> nse_dln_step(const FlowProblem& p,
                                                        const FlowState& prev,
                                                        const FlowState& curr, double k_next,
                                                        double theta, ConvectionMode mode,
                                                        const SolverConfig& config) {
    const SpectralGrid& g = p.grid;
    const double k_prev = curr.time - prev.time;
    const SchemeCoefficients c = scheme_coefficients(theta, k_prev, k_next);
    const double t_star =
        c.beta[0] * prev.time + c.beta[1] * curr.time + c.beta[2] * (curr.time + k_next);

    auto [f1, f2] = p.force_at(t_star);
    leray_project(g, f1, f2);

    // Step-independent part of the right-hand side, per mode.
    CVec rhs1(g.size()), rhs2(g.size());
    std::vector<double> diag(g.size());
    for (std::size_t i = 0; i < g.size(); i++) {
        const double visc = p.nu * g.k2(i);
        diag[i] = c.alpha[2] / c.k_hat + visc * c.beta[2];
        const Cplx m1 = (c.alpha[1] / c.k_hat + visc * c.beta[1]) * curr.u1[i] +
                        (c.alpha[0] / c.k_hat + visc * c.beta[0]) * prev.u1[i];
        const Cplx m2 = (c.alpha[1] / c.k_hat + visc * c.beta[1]) * curr.u2[i] +
                        (c.alpha[0] / c.k_hat + visc * c.beta[0]) * prev.u2[i];
        rhs1[i] = f1[i] - m1;
        rhs2[i] = f2[i] - m2;
    }

    // Frozen convecting field for the linearly implicit option.
    CVec frozen1, frozen2;
    if (mode == ConvectionMode::linearly_implicit) {
        frozen1.resize(g.size());
        frozen2.resize(g.size());
        for (std::size_t i = 0; i < g.size(); i++) {
            frozen1[i] = c.beta[2] * (2.0 * curr.u1[i] - prev.u1[i]) + c.beta[1] * curr.u1[i] +
                         c.beta[0] * prev.u1[i];
            frozen2[i] = c.beta[2] * (2.0 * curr.u2[i] - prev.u2[i]) + c.beta[1] * curr.u2[i] +
                         c.beta[0] * prev.u2[i];
        }
    }

    FlowState next;
    next.time = curr.time + k_next;
    next.u1.resize(g.size());
    next.u2.resize(g.size());
    for (std::size_t i = 0; i < g.size(); i++) {
        next.u1[i] = 2.0 * curr.u1[i] - prev.u1[i];
        next.u2[i] = 2.0 * curr.u2[i] - prev.u2[i];
    }

    const double scale = std::max(1.0, std::sqrt(field_l2_sq(g, curr.u1, curr.u2)));
    CVec star1(g.size()), star2(g.size());
    int it = 0;
    double diff = 0.0;
    CVec n1, n2;
    for (it = 1; it <= config.max_iter; it++) {
        for (std::size_t i = 0; i < g.size(); i++) {
            star1[i] = c.beta[2] * next.u1[i] + c.beta[1] * curr.u1[i] + c.beta[0] * prev.u1[i];
            star2[i] = c.beta[2] * next.u2[i] + c.beta[1] * curr.u2[i] + c.beta[0] * prev.u2[i];
        }
        const bool frozen = (mode == ConvectionMode::linearly_implicit);
        std::tie(n1, n2) = convection(g, frozen ? frozen1 : star1, frozen ? frozen2 : star2, star1,
                                      star2);
        leray_project(g, n1, n2);
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); i++) {
            const Cplx new1 = (rhs1[i] - n1[i]) / diag[i];
            const Cplx new2 = (rhs2[i] - n2[i]) / diag[i];
            acc += std::norm(new1 - next.u1[i]) + std::norm(new2 - next.u2[i]);
            next.u1[i] = new1;
            next.u2[i] = new2;
        }
        diff = g.length() * std::sqrt(acc);
        if (!std::isfinite(diff))
            throw SolverFailure("nse_dln_step: Picard sweep diverged", Vec{}, diff, it);
        if (diff <= config.abs_tol * scale) break;
    }
    if (diff > config.abs_tol * scale)
        throw SolverFailure("nse_dln_step: Picard did not converge", Vec{}, diff, config.max_iter);

    leray_project(g, next.u1, next.u2);
    g.apply_dealias(next.u1);
    g.apply_dealias(next.u2);

    // True equation residual at the accepted state.
    double res = 0.0;
    {
        for (std::size_t i = 0; i < g.size(); i++) {
            star1[i] = c.beta[2] * next.u1[i] + c.beta[1] * curr.u1[i] + c.beta[0] * prev.u1[i];
            star2[i] = c.beta[2] * next.u2[i] + c.beta[1] * curr.u2[i] + c.beta[0] * prev.u2[i];
        }
        const bool frozen = (mode == ConvectionMode::linearly_implicit);
        auto [r1, r2] = convection(g, frozen ? frozen1 : star1, frozen ? frozen2 : star2, star1,
                                   star2);
        leray_project(g, r1, r2);
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); i++) {
            const Cplx e1 = diag[i] * next.u1[i] + r1[i] - rhs1[i];
            const Cplx e2 = diag[i] * next.u2[i] + r2[i] - rhs2[i];
            acc += std::norm(e1) + std::norm(e2);
        }
        res = g.length() * std::sqrt(acc);
    }
    return {std::move(next), FlowStepStats{it, res}};
}

// Fully implicit variable-step BDF2 for the same system (comparison runs).
inline std::pair<FlowState, FlowStepStats> nse_bdf2_step(const FlowProblem& p,
                                                         const FlowState& prev,
                                                         const FlowState& curr, double k_next,
                                                         const SolverConfig& config) {
    const SpectralGrid& g = p.grid;
    const double k_prev = curr.time - prev.time;
    const double r = k_next / k_prev;
    const double lead = (1.0 + 2.0 * r) / (1.0 + r);
    const double mid = -(1.0 + r);
    const double trail = r * r / (1.0 + r);
    const double t_next = curr.time + k_next;

    auto [f1, f2] = p.force_at(t_next);
    leray_project(g, f1, f2);

    CVec rhs1(g.size()), rhs2(g.size());
    std::vector<double> diag(g.size());
    for (std::size_t i = 0; i < g.size(); i++) {
        diag[i] = lead / k_next + p.nu * g.k2(i);
        rhs1[i] = f1[i] - (mid / k_next) * curr.u1[i] - (trail / k_next) * prev.u1[i];
        rhs2[i] = f2[i] - (mid / k_next) * curr.u2[i] - (trail / k_next) * prev.u2[i];
    }

    FlowState next;
    next.time = t_next;
    next.u1.resize(g.size());
    next.u2.resize(g.size());
    for (std::size_t i = 0; i < g.size(); i++) {
        next.u1[i] = 2.0 * curr.u1[i] - prev.u1[i];
        next.u2[i] = 2.0 * curr.u2[i] - prev.u2[i];
    }
    const double scale = std::max(1.0, std::sqrt(field_l2_sq(g, curr.u1, curr.u2)));
    int it = 0;
    double diff = 0.0;
    for (it = 1; it <= config.max_iter; it++) {
        auto [n1, n2] = convection(g, next.u1, next.u2, next.u1, next.u2);
        leray_project(g, n1, n2);
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); i++) {
            const Cplx new1 = (rhs1[i] - n1[i]) / diag[i];
            const Cplx new2 = (rhs2[i] - n2[i]) / diag[i];
            acc += std::norm(new1 - next.u1[i]) + std::norm(new2 - next.u2[i]);
            next.u1[i] = new1;
            next.u2[i] = new2;
        }
        diff = g.length() * std::sqrt(acc);
        if (!std::isfinite(diff))
            throw SolverFailure("nse_bdf2_step: Picard sweep diverged", Vec{}, diff, it);
        if (diff <= config.abs_tol * scale) break;
    }
    if (diff > config.abs_tol * scale)
        throw SolverFailure("nse_bdf2_step: Picard did not converge", Vec{}, diff, config.max_iter);
    leray_project(g, next.u1, next.u2);
    g.apply_dealias(next.u1);
    g.apply_dealias(next.u2);
    return {std::move(next), FlowStepStats{it, diff}};
}

// ---- energy ledger -----------------------------------------------------

struct EnergyLedgerRow {
    double energy = 0.0;       // E_n: G-weighted kinetic energy of (u_next, u_curr)
    double energy_prev = 0.0;  // same functional one step back
    double kinetic = 0.0;      // 0.5 ||u_next||^2
    double dissipation = 0.0;  // D_n = ||sum a_l u_l||^2 / k_hat
    double a_combo_sq = 0.0;   // ||sum a_l u_l||^2
    double eps_nu = 0.0;       // nu ||grad u_*||^2
    double chi = 0.0;          // |eps_DLN / eps_nu|
    double k_hat = 0.0;
};

inline EnergyLedgerRow energy_ledger_update(double theta, const SchemeCoefficients& c,
                                            const FlowState& prev, const FlowState& curr,
                                            const FlowState& next, double nu,
                                            const SpectralGrid& g) {
    EnergyLedgerRow row;
    row.k_hat = c.k_hat;
    const double np = field_l2_sq(g, prev.u1, prev.u2);
    const double nc = field_l2_sq(g, curr.u1, curr.u2);
    const double nn = field_l2_sq(g, next.u1, next.u2);
    row.energy = 0.25 * (1.0 + theta) * nn + 0.25 * (1.0 - theta) * nc;
    row.energy_prev = 0.25 * (1.0 + theta) * nc + 0.25 * (1.0 - theta) * np;
    row.kinetic = 0.5 * nn;

    CVec a1(g.size()), a2(g.size()), s1(g.size()), s2(g.size());
    for (std::size_t i = 0; i < g.size(); i++) {
        a1[i] = c.a[0] * prev.u1[i] + c.a[1] * curr.u1[i] + c.a[2] * next.u1[i];
        a2[i] = c.a[0] * prev.u2[i] + c.a[1] * curr.u2[i] + c.a[2] * next.u2[i];
        s1[i] = c.beta[0] * prev.u1[i] + c.beta[1] * curr.u1[i] + c.beta[2] * next.u1[i];
        s2[i] = c.beta[0] * prev.u2[i] + c.beta[1] * curr.u2[i] + c.beta[2] * next.u2[i];
    }
    row.a_combo_sq = field_l2_sq(g, a1, a2);
    row.dissipation = row.a_combo_sq / c.k_hat;
    row.eps_nu = nu * field_grad_sq(g, s1, s2);
    if (row.eps_nu > 0.0)
        row.chi = row.dissipation / row.eps_nu;
    else
        row.chi = (row.dissipation > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
    return row;
}

// ---- snapshots ---------------------------------------------------------

// Text header (n, L, t, nu) followed by the two physical velocity grids as
// raw doubles.
inline void write_snapshot(const std::string& path, const SpectralGrid& g, const FlowState& s,
                           double nu) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    out.precision(17);
    out << "dln-flow-snapshot " << g.n() << " " << g.length() << " " << s.time << " " << nu << "\n";
    const auto p1 = g.to_physical(s.u1);
    const auto p2 = g.to_physical(s.u2);
    out.write(reinterpret_cast<const char*>(p1.data()), p1.size() * sizeof(double));
    out.write(reinterpret_cast<const char*>(p2.data()), p2.size() * sizeof(double));
}

struct SnapshotHeader {
    int n = 0;
    double length = 0.0, time = 0.0, nu = 0.0;
};

inline std::pair<SnapshotHeader, FlowState> read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    std::string magic;
    SnapshotHeader h;
    in >> magic >> h.n >> h.length >> h.time >> h.nu;
    if (magic != "dln-flow-snapshot") throw std::runtime_error("read_snapshot: bad header");
    in.ignore(1);  // newline
    SpectralGrid g(h.n, h.length);
    std::vector<double> p1(g.size()), p2(g.size());
    in.read(reinterpret_cast<char*>(p1.data()), p1.size() * sizeof(double));
    in.read(reinterpret_cast<char*>(p2.data()), p2.size() * sizeof(double));
    if (!in) throw std::runtime_error("read_snapshot: truncated file");
    FlowState s;
    s.time = h.time;
    s.u1 = g.to_spectral(p1);
    s.u2 = g.to_spectral(p2);
    return {h, std::move(s)};
}

}  // namespace dln
