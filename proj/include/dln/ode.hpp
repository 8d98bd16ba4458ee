#pragma once

#include <functional>
#include <stdexcept>

#include "dln/vec.hpp"

namespace dln {

// Dense row-major matrix, only as large as an ODE Jacobian needs to be.
struct Mat {
    int n = 0;
    Vec data;
    explicit Mat(int n_ = 0) : n(n_), data(static_cast<std::size_t>(n_) * n_, 0.0) {}
    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
};

// First-order system y' = f(t,y).  Implementations may supply an analytic
// Jacobian; the solvers fall back to finite differences otherwise.
class OdeSystem {
  public:
    virtual ~OdeSystem() = default;
    virtual int dimension() const = 0;
    virtual void rhs(double t, const Vec& y, Vec& f) const = 0;
    virtual bool has_jacobian() const { return false; }
    virtual void jacobian(double /*t*/, const Vec& /*y*/, Mat& /*J*/) const {
        throw std::logic_error("OdeSystem: no analytic Jacobian provided");
    }

    Vec rhs(double t, const Vec& y) const {
        Vec f(y.size());
        rhs(t, y, f);
        return f;
    }
};

// Convenience adapter for lambda-defined systems.
class FunctionSystem final : public OdeSystem {
  public:
    using Rhs = std::function<void(double, const Vec&, Vec&)>;
    using Jac = std::function<void(double, const Vec&, Mat&)>;

    FunctionSystem(int dim, Rhs rhs) : dim_(dim), rhs_(std::move(rhs)) {}
    FunctionSystem(int dim, Rhs rhs, Jac jac)
        : dim_(dim), rhs_(std::move(rhs)), jac_(std::move(jac)) {}

    int dimension() const override { return dim_; }
    void rhs(double t, const Vec& y, Vec& f) const override { rhs_(t, y, f); }
    bool has_jacobian() const override { return static_cast<bool>(jac_); }
    void jacobian(double t, const Vec& y, Mat& J) const override {
        if (!jac_) throw std::logic_error("FunctionSystem: no Jacobian");
        jac_(t, y, J);
    }

  private:
    int dim_;
    Rhs rhs_;
    Jac jac_;
};

// The two retained states of a two-step method; its entire memory.
struct SolutionWindow {
    double t_prev = 0.0;
    double t_curr = 0.0;
    Vec y_prev;
    Vec y_curr;
    double k_prev = 0.0;  // == t_curr - t_prev

    void validate() const {
        if (!(k_prev > 0.0)) throw std::invalid_argument("SolutionWindow: k_prev must be positive");
        if (y_prev.size() != y_curr.size())
            throw std::invalid_argument("SolutionWindow: state dimension mismatch");
    }

    // Slide the window forward after an accepted step.
    void advance(double k_next, Vec y_next) {
        t_prev = t_curr;
        t_curr += k_next;
        y_prev = std::move(y_curr);
        y_curr = std::move(y_next);
        k_prev = k_next;
    }
};

}  // namespace dln
