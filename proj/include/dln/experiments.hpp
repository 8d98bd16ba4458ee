#pragma once

// Experiment runners shared by the CLI and the acceptance suite: Taylor-
// Green temporal convergence, DLN-vs-BDF2 energy ledgers over preset
// schedules, the forced adaptive run, and the G-identity fuzzer.

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dln/adaptive.hpp"
#include "dln/flow.hpp"
#include "dln/norms.hpp"
#include "dln/scheme.hpp"
#include "dln/schedules.hpp"
#include "dln/stability.hpp"

namespace dln {

// ---- Taylor-Green temporal convergence ---------------------------------

struct ConvergenceRow {
    double k = 0.0;
    double err_inf = 0.0;      // ell_inf in time of the velocity L2 error
    double err_l2 = 0.0;       // left-Riemann ell_2 in time
    double order_inf = 0.0;    // R against the previous (coarser) row; 0 on the first
    double order_l2 = 0.0;
};

// Velocity L2 distance between a state and the exact Taylor-Green field.
inline double tg_error(const SpectralGrid& g, const FlowState& s, int w, double nu) {
    const FlowState exact = taylor_green_exact(g, s.time, w, nu);
    CVec d1(g.size()), d2(g.size());
    for (std::size_t i = 0; i < g.size(); i++) {
        d1[i] = s.u1[i] - exact.u1[i];
        d2[i] = s.u2[i] - exact.u2[i];
    }
    return std::sqrt(field_l2_sq(g, d1, d2));
}

// Constant-step DLN run against the exact Taylor-Green solution; both
// startup states are seeded from the exact solution.
inline std::pair<ErrorSeries, FlowState> run_tg_dln(const FlowProblem& p, double theta, double k,
                                                    double T, int w, ConvectionMode mode,
                                                    const SolverConfig& solver) {
    FlowState prev = taylor_green_exact(p.grid, 0.0, w, p.nu);
    FlowState curr = taylor_green_exact(p.grid, k, w, p.nu);
    ErrorSeries series;
    series.push(curr.time, k, tg_error(p.grid, curr, w, p.nu));
    while (curr.time < T - 1e-12) {
        const double step = std::min(k, T - curr.time);
        auto [next, stats] = nse_dln_step(p, prev, curr, step, theta, mode, solver);
        prev = std::move(curr);
        curr = std::move(next);
        series.push(curr.time, step, tg_error(p.grid, curr, w, p.nu));
    }
    return {std::move(series), std::move(curr)};
}

inline std::vector<ConvergenceRow> run_tg_convergence(double theta, const std::vector<double>& ks,
                                                      int n, double nu, double T, int w,
                                                      ConvectionMode mode,
                                                      const SolverConfig& solver) {
    FlowProblem p{SpectralGrid(n), nu};
    std::vector<ConvergenceRow> rows;
    for (double k : ks) {
        auto [series, final_state] = run_tg_dln(p, theta, k, T, w, mode, solver);
        ConvergenceRow row;
        row.k = k;
        row.err_inf = discrete_norm(series, NormKind::ell_inf);
        row.err_l2 = discrete_norm(series, NormKind::ell_2_left_riemann);
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            row.order_inf = convergence_order(prev.err_inf, row.err_inf, prev.k, row.k);
            row.order_l2 = convergence_order(prev.err_l2, row.err_l2, prev.k, row.k);
        }
        rows.push_back(row);
    }
    return rows;
}

// ---- DLN vs BDF2 energy ledgers over a preset schedule ------------------

struct LedgerSample {
    int step = 0;
    double t = 0.0;
    double k = 0.0;
    double energy = 0.0;       // G-weighted energy E_n
    double kinetic = 0.0;      // 0.5 ||u||^2 at t_n
    double dissipation = 0.0;  // D_n (0 for BDF2 rows)
    double eps_nu = 0.0;
    double chi = 0.0;
};

struct ForcedSetup {
    int n = 32;
    double nu = 0.1;
    double amplitude = 0.1;
    int force_mode = 2;
};

inline FlowProblem make_forced_problem(const ForcedSetup& s) {
    FlowProblem p{SpectralGrid(s.n), s.nu};
    auto force = periodic_stirring_force(p.grid, s.amplitude, s.force_mode);
    p.force = [force](double) { return force; };
    return p;
}

inline FlowState rest_state(const SpectralGrid& g, double t) {
    FlowState s;
    s.time = t;
    s.u1.assign(g.size(), 0.0);
    s.u2.assign(g.size(), 0.0);
    return s;
}

struct EnergyCompareResult {
    std::vector<LedgerSample> dln, bdf2;
};

// Runs both integrators from rest over the same step sequence and records
// their ledgers.
inline EnergyCompareResult run_energy_compare(const ForcedSetup& setup, double theta,
                                              const std::vector<double>& steps,
                                              ConvectionMode mode, const SolverConfig& solver) {
    const FlowProblem p = make_forced_problem(setup);
    EnergyCompareResult out;
    if (steps.size() < 2) return out;

    {
        FlowState prev = rest_state(p.grid, -steps[0]);
        FlowState curr = rest_state(p.grid, 0.0);
        for (std::size_t n = 0; n < steps.size(); n++) {
            const double k_prev = curr.time - prev.time;
            auto [next, stats] = nse_dln_step(p, prev, curr, steps[n], theta, mode, solver);
            const SchemeCoefficients c = scheme_coefficients(theta, k_prev, steps[n]);
            const EnergyLedgerRow row =
                energy_ledger_update(theta, c, prev, curr, next, p.nu, p.grid);
            out.dln.push_back({static_cast<int>(n) + 1, next.time, steps[n], row.energy,
                               row.kinetic, row.dissipation, row.eps_nu, row.chi});
            prev = std::move(curr);
            curr = std::move(next);
        }
    }
    {
        FlowState prev = rest_state(p.grid, -steps[0]);
        FlowState curr = rest_state(p.grid, 0.0);
        for (std::size_t n = 0; n < steps.size(); n++) {
            auto [next, stats] = nse_bdf2_step(p, prev, curr, steps[n], solver);
            LedgerSample s;
            s.step = static_cast<int>(n) + 1;
            s.t = next.time;
            s.k = steps[n];
            s.kinetic = kinetic_energy(p.grid, next);
            s.energy = s.kinetic;  // no G weighting for the reference method
            s.eps_nu = p.nu * field_grad_sq(p.grid, next.u1, next.u2);
            out.bdf2.push_back(s);
            prev = std::move(curr);
            curr = std::move(next);
        }
    }
    return out;
}

// ---- forced adaptive run ------------------------------------------------

inline AdaptiveRun run_forced_adaptive(const ForcedSetup& setup, double theta,
                                       const ControllerConfig& cfg, double T_final, double k0,
                                       ConvectionMode mode, const SolverConfig& solver) {
    const FlowProblem p = make_forced_problem(setup);
    FlowState prev = rest_state(p.grid, -k0);
    FlowState curr = rest_state(p.grid, 0.0);
    return run_adaptive(p, std::move(prev), std::move(curr), theta, cfg, T_final, mode, solver);
}

// ---- G-identity fuzzer --------------------------------------------------

struct FuzzSample {
    double theta = 0.0, eps = 0.0, gap = 0.0, scale = 0.0;
};

struct FuzzReport {
    double max_relative_gap = 0.0;
    std::vector<FuzzSample> samples;  // one per trial, relative gap in .gap
};

// Randomized check of the G-stability identity; gap is normalized by the
// magnitude of the quadratic terms involved.
inline FuzzReport g_identity_fuzz(unsigned seed, int trials, int max_dim = 8,
                                  bool keep_samples = false) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> theta_d(0.0, 1.0);
    std::uniform_real_distribution<double> eps_d(-0.999, 0.999);
    std::uniform_real_distribution<double> val_d(-1.0, 1.0);
    std::uniform_int_distribution<int> dim_d(1, max_dim);
    FuzzReport report;
    for (int t = 0; t < trials; t++) {
        const double theta = theta_d(rng);
        const double eps = eps_d(rng);
        const int dim = dim_d(rng);
        Vec y0(dim), y1(dim), y2(dim);
        for (int i = 0; i < dim; i++) {
            y0[i] = val_d(rng);
            y1[i] = val_d(rng);
            y2[i] = val_d(rng);
        }
        const double gap = g_identity_gap(theta, eps, y0, y1, y2);
        const double scale =
            std::max({1e-300, g_norm_sq(theta, y2, y1), g_norm_sq(theta, y1, y0)});
        const double rel = gap / scale;
        report.max_relative_gap = std::max(report.max_relative_gap, rel);
        if (keep_samples) report.samples.push_back({theta, eps, rel, scale});
    }
    return report;
}

}  // namespace dln
