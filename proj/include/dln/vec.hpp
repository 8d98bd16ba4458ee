#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dln {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
    return s;
}

inline double norm2_sq(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(norm2_sq(a)); }

// z = x + c*y
inline Vec axpy(double c, const Vec& y, const Vec& x) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: dimension mismatch");
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); i++) z[i] = x[i] + c * y[i];
    return z;
}

// c0*a + c1*b + c2*c, the three-term combinations the two-step window needs
inline Vec combine3(double c0, const Vec& a, double c1, const Vec& b, double c2, const Vec& c) {
    if (a.size() != b.size() || b.size() != c.size())
        throw std::invalid_argument("combine3: dimension mismatch");
    Vec z(a.size());
    for (std::size_t i = 0; i < a.size(); i++) z[i] = c0 * a[i] + c1 * b[i] + c2 * c[i];
    return z;
}

inline bool all_finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace dln
