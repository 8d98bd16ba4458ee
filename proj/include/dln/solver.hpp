#pragma once

// Root-finders for the per-step implicit system: damped-free fixed-point
// (Picard) iteration and Newton with dense LU.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "dln/ode.hpp"
#include "dln/vec.hpp"

namespace dln {

struct SolverConfig {
    enum class Method { fixed_point, newton };
    Method method = Method::newton;
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    int max_iter = 100;
    double fd_epsilon = 1e-7;  // forward-difference Jacobian scale

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::invalid_argument("SolverConfig: abs_tol must be positive");
        if (rel_tol < 0.0) throw std::invalid_argument("SolverConfig: rel_tol must be nonnegative");
        if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    }
};

struct SolveResult {
    Vec root;
    int iterations = 0;
    double residual_norm = 0.0;
};

// Thrown when an implicit solve fails; carries the last iterate for diagnostics.
class SolverFailure : public std::runtime_error {
  public:
    SolverFailure(std::string what, Vec last_iterate, double residual_norm, int iterations)
        : std::runtime_error(std::move(what)),
          last_iterate(std::move(last_iterate)),
          residual_norm(residual_norm),
          iterations(iterations) {}

    Vec last_iterate;
    double residual_norm;
    int iterations;
};

// ---- dense LU with partial pivoting ------------------------------------

namespace detail {

inline void lu_factor(Mat& A, std::vector<int>& piv) {
    const int n = A.n;
    piv.resize(n);
    for (int i = 0; i < n; i++) piv[i] = i;
    for (int col = 0; col < n; col++) {
        int p = col;
        double best = std::fabs(A(col, col));
        for (int i = col + 1; i < n; i++) {
            if (std::fabs(A(i, col)) > best) {
                best = std::fabs(A(i, col));
                p = i;
            }
        }
        if (best == 0.0) throw std::runtime_error("lu_factor: singular matrix");
        if (p != col) {
            for (int j = 0; j < n; j++) std::swap(A(p, j), A(col, j));
            std::swap(piv[p], piv[col]);
        }
        for (int i = col + 1; i < n; i++) {
            A(i, col) /= A(col, col);
            const double m = A(i, col);
            for (int j = col + 1; j < n; j++) A(i, j) -= m * A(col, j);
        }
    }
}

inline Vec lu_solve(const Mat& A, const std::vector<int>& piv, const Vec& b) {
    const int n = A.n;
    Vec x(n);
    for (int i = 0; i < n; i++) x[i] = b[piv[i]];
    for (int i = 1; i < n; i++)
        for (int j = 0; j < i; j++) x[i] -= A(i, j) * x[j];
    for (int i = n - 1; i >= 0; i--) {
        for (int j = i + 1; j < n; j++) x[i] -= A(i, j) * x[j];
        x[i] /= A(i, i);
    }
    return x;
}

}  // namespace detail

// ---- fixed point -------------------------------------------------------

// Solves x = g(x).  The residual is g(x) - x; convergence when
// |g(x) - x| <= abs_tol + rel_tol*|x|.
inline SolveResult solve_fixed_point(const std::function<Vec(const Vec&)>& g, const Vec& guess,
                                     const SolverConfig& config) {
    config.validate();
    Vec x = guess;
    double rnorm = 0.0;
    for (int it = 1; it <= config.max_iter; it++) {
        Vec gx = g(x);
        if (!all_finite(gx))
            throw SolverFailure("fixed-point iteration diverged (non-finite iterate)", std::move(x),
                                rnorm, it);
        Vec r = axpy(-1.0, x, gx);
        rnorm = norm2(r);
        x = std::move(gx);
        if (rnorm <= config.abs_tol + config.rel_tol * norm2(x))
            return {std::move(x), it, rnorm};
    }
    throw SolverFailure("fixed-point iteration did not converge in max_iter", std::move(x), rnorm,
                        config.max_iter);
}

// ---- Newton ------------------------------------------------------------

inline Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& residual, const Vec& x,
                                      const Vec& rx, double fd_epsilon) {
    const int n = static_cast<int>(x.size());
    Mat J(n);
    Vec xp = x;
    for (int j = 0; j < n; j++) {
        const double h = fd_epsilon * std::max(1.0, std::fabs(x[j]));
        xp[j] = x[j] + h;
        Vec rp = residual(xp);
        xp[j] = x[j];
        for (int i = 0; i < n; i++) J(i, j) = (rp[i] - rx[i]) / h;
    }
    return J;
}

// Solves residual(x) = 0.  Pass an empty jacobian function to use forward
// differences.
inline SolveResult solve_newton(const std::function<Vec(const Vec&)>& residual,
                                const std::function<Mat(const Vec&)>& jacobian, const Vec& guess,
                                const SolverConfig& config) {
    config.validate();
    Vec x = guess;
    Vec r = residual(x);
    double rnorm = norm2(r);
    for (int it = 1; it <= config.max_iter; it++) {
        if (rnorm <= config.abs_tol + config.rel_tol * norm2(x)) return {std::move(x), it - 1, rnorm};
        Mat J = jacobian ? jacobian(x) : finite_difference_jacobian(residual, x, r, config.fd_epsilon);
        std::vector<int> piv;
        try {
            detail::lu_factor(J, piv);
        } catch (const std::runtime_error&) {
            throw SolverFailure("newton: singular Jacobian", std::move(x), rnorm, it);
        }
        Vec dx = detail::lu_solve(J, piv, r);
        for (std::size_t i = 0; i < x.size(); i++) x[i] -= dx[i];
        if (!all_finite(x))
            throw SolverFailure("newton diverged (non-finite iterate)", std::move(x), rnorm, it);
        r = residual(x);
        rnorm = norm2(r);
    }
    if (rnorm <= config.abs_tol + config.rel_tol * norm2(x))
        return {std::move(x), config.max_iter, rnorm};
    throw SolverFailure("newton did not converge in max_iter", std::move(x), rnorm, config.max_iter);
}

}  // namespace dln
