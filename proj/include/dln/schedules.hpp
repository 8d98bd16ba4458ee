#pragma once

// Preset step-size schedules used by the comparison experiments.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dln {

// Constant step k until t passes T (count = ceil(T/k); the harness clips).
inline std::vector<double> constant_schedule(double k, double T) {
    if (!(k > 0.0) || !(T > 0.0)) throw std::invalid_argument("constant_schedule: bad arguments");
    std::vector<double> out;
    double t = 0.0;
    while (t < T - 1e-12) {
        const double step = std::min(k, T - t);
        out.push_back(step);
        t += step;
    }
    return out;
}

// k_n = 0.05 for the first 10 steps, then 0.05 + 0.002 sin(10 t_n), until
// time passes T.
inline std::vector<double> sinusoidal_schedule(double T) {
    if (!(T > 0.0)) throw std::invalid_argument("sinusoidal_schedule: bad horizon");
    std::vector<double> out;
    double t = 0.0;
    int n = 0;
    while (t < T - 1e-12) {
        const double k = (n < 10) ? 0.05 : 0.05 + 0.002 * std::sin(10.0 * t);
        out.push_back(k);
        t += k;
        n++;
    }
    return out;
}

// k_0 = 0.05, k_n = k_{n-1} + 0.001, until time passes T.
inline std::vector<double> increasing_schedule(double T) {
    if (!(T > 0.0)) throw std::invalid_argument("increasing_schedule: bad horizon");
    std::vector<double> out;
    double t = 0.0, k = 0.05;
    while (t < T - 1e-12) {
        out.push_back(k);
        t += k;
        k += 0.001;
    }
    return out;
}

}  // namespace dln
