#pragma once

// Discrete time norms over per-step error samples, and the observed
// convergence order between two refinement levels.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dln {

enum class NormKind { ell_inf, ell_2_left_riemann };

struct ErrorSeries {
    std::vector<double> times;   // t_n at which each sample lives
    std::vector<double> steps;   // k_n: weight of the left-Riemann sum
    std::vector<double> values;  // ||e_n||

    void push(double t, double k, double value) {
        times.push_back(t);
        steps.push_back(k);
        values.push_back(value);
    }

    void validate() const {
        if (values.empty()) throw std::invalid_argument("ErrorSeries: empty series");
        if (times.size() != values.size() || steps.size() != values.size())
            throw std::invalid_argument("ErrorSeries: ragged series");
        for (std::size_t i = 0; i < values.size(); i++)
            if (values[i] < 0.0 || !(steps[i] > 0.0))
                throw std::invalid_argument("ErrorSeries: bad sample");
    }
};

// ell_inf: max over samples.  ell_2_left_riemann: (sum k_n ||v_n||^2)^{1/2},
// the left-endpoint Riemann sum of ||v||^2.
inline double discrete_norm(const ErrorSeries& series, NormKind kind) {
    series.validate();
    if (kind == NormKind::ell_inf)
        return *std::max_element(series.values.begin(), series.values.end());
    double s = 0.0;
    for (std::size_t i = 0; i < series.values.size(); i++)
        s += series.steps[i] * series.values[i] * series.values[i];
    return std::sqrt(s);
}

// R = ln(e1/e2) / ln(dt1/dt2)
inline double convergence_order(double e1, double e2, double dt1, double dt2) {
    if (!(e1 > 0.0) || !(e2 > 0.0) || !(dt1 > 0.0) || !(dt2 > 0.0))
        throw std::invalid_argument("convergence_order: inputs must be positive");
    if (dt1 == dt2) throw std::invalid_argument("convergence_order: equal steps");
    return std::log(e1 / e2) / std::log(dt1 / dt2);
}

}  // namespace dln
