#pragma once

// Minimum-dissipation step adaptivity: keep chi = |eps_DLN / eps_nu| below a
// tolerance by halving (reject-and-redo) or doubling, with a floor and a cap.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dln/flow.hpp"
#include "dln/scheme.hpp"

namespace dln {

struct ControllerConfig {
    double delta = 0.002;  // dissipation-ratio tolerance
    double k_min = 0.01;
    double k_max = 1.6;
    double growth = 2.0;
    double shrink = 0.5;
    int max_rejections = 8;  // cascade cap before a floor-accept

    void validate() const {
        if (!(k_min > 0.0) || !(k_min <= k_max))
            throw std::invalid_argument("ControllerConfig: need 0 < k_min <= k_max");
        if (!(shrink > 0.0 && shrink < 1.0 && growth > 1.0))
            throw std::invalid_argument("ControllerConfig: need 0 < shrink < 1 < growth");
        if (!(delta > 0.0)) throw std::invalid_argument("ControllerConfig: delta must be positive");
        if (max_rejections < 0) throw std::invalid_argument("ControllerConfig: bad rejection cap");
    }
};

enum class Verdict { accept_and_grow, accept_and_hold, reject_and_shrink };

struct StepDecision {
    Verdict verdict = Verdict::accept_and_hold;
    double k_next = 0.0;
};

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::accept_and_grow: return "accept_and_grow";
        case Verdict::accept_and_hold: return "accept_and_hold";
        default: return "reject_and_shrink";
    }
}

// chi = D / eps_nu, with 0/0 -> 0 and D > 0 = eps_nu -> +inf.
inline double dissipation_ratio(double dissipation, double eps_nu) {
    if (dissipation < 0.0 || eps_nu < 0.0)
        throw std::invalid_argument("dissipation_ratio: rates must be nonnegative");
    if (eps_nu > 0.0) return dissipation / eps_nu;
    return dissipation > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline StepDecision decide(double chi, double k_current, const ControllerConfig& cfg) {
    cfg.validate();
    if (chi < cfg.delta)
        return {Verdict::accept_and_grow, std::min(cfg.growth * k_current, cfg.k_max)};
    if (k_current > cfg.k_min)
        return {Verdict::reject_and_shrink, std::max(cfg.shrink * k_current, cfg.k_min)};
    return {Verdict::accept_and_hold, cfg.k_min};  // cannot shrink further
}

struct AdaptiveRecord {
    int step = 0;           // index of the accepted step
    double t = 0.0;         // time after the step
    double k = 0.0;         // accepted step size
    double chi = 0.0;
    Verdict verdict = Verdict::accept_and_hold;
    int rejections = 0;     // retries burnt before acceptance
    bool at_floor = false;  // accepted at k_min with chi >= delta
    EnergyLedgerRow ledger;
};

struct AdaptiveRun {
    std::vector<AdaptiveRecord> records;
    std::vector<double> step_sizes;  // accepted k_n in order
    FlowState final_prev, final_curr;
    int total_attempts = 0;  // accepted + rejected solves
};

// Advances the flow from (prev, curr) to T_final under the controller.  A
// rejected step never advances time; the last step is clipped to land on
// T_final exactly.
inline AdaptiveRun run_adaptive(const FlowProblem& problem, FlowState prev, FlowState curr,
                                double theta, const ControllerConfig& cfg, double T_final,
                                ConvectionMode mode = ConvectionMode::fully_implicit,
                                SolverConfig solver = {}) {
    cfg.validate();
    if (!(T_final > curr.time)) throw std::invalid_argument("run_adaptive: T_final not ahead");
    solver.abs_tol = std::max(solver.abs_tol, 1e-10);

    AdaptiveRun run;
    double k = std::clamp(curr.time - prev.time, cfg.k_min, cfg.k_max);
    int step = 0;
    while (curr.time < T_final - 1e-12) {
        const bool clipped = curr.time + k > T_final;
        const double k_try0 = clipped ? (T_final - curr.time) : k;
        double k_try = k_try0;
        int rejections = 0;
        for (;;) {
            auto [next, stats] = nse_dln_step(problem, prev, curr, k_try, theta, mode, solver);
            const SchemeCoefficients c =
                scheme_coefficients(theta, curr.time - prev.time, k_try);
            const EnergyLedgerRow row =
                energy_ledger_update(theta, c, prev, curr, next, problem.nu, problem.grid);
            const double chi = dissipation_ratio(row.dissipation, row.eps_nu);
            const StepDecision d = decide(chi, k_try, cfg);
            run.total_attempts++;

            const bool cascade_capped = rejections >= cfg.max_rejections;
            if (d.verdict != Verdict::reject_and_shrink || cascade_capped) {
                AdaptiveRecord rec;
                rec.step = ++step;
                rec.t = next.time;
                rec.k = k_try;
                rec.chi = chi;
                rec.verdict = cascade_capped && d.verdict == Verdict::reject_and_shrink
                                  ? Verdict::accept_and_hold
                                  : d.verdict;
                rec.rejections = rejections;
                rec.at_floor = (rec.verdict == Verdict::accept_and_hold);
                rec.ledger = row;
                run.records.push_back(rec);
                run.step_sizes.push_back(k_try);
                prev = std::move(curr);
                curr = std::move(next);
                // next attempt: grow from the accepted size unless we held
                k = (rec.verdict == Verdict::accept_and_grow && !clipped)
                        ? d.k_next
                        : std::min(std::max(k_try, cfg.k_min), cfg.k_max);
                break;
            }
            rejections++;
            k_try = d.k_next;
        }
    }
    run.final_prev = std::move(prev);
    run.final_curr = std::move(curr);
    return run;
}

}  // namespace dln
