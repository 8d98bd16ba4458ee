#include <cmath>
#include <random>

#include "dln/grid.hpp"
#include "doctest.h"

using namespace dln;

TEST_CASE("1D FFT roundtrip and Parseval") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const int n = 64;
    CVec x(n);
    for (auto& c : x) c = {d(rng), d(rng)};
    CVec y = x;
    fft_detail::transform(y.data(), n, false);
    double phys = 0.0, spec = 0.0;
    for (int i = 0; i < n; i++) {
        phys += std::norm(x[i]);
        spec += std::norm(y[i]);
    }
    CHECK(spec == doctest::Approx(n * phys).epsilon(1e-12));
    fft_detail::transform(y.data(), n, true);
    for (int i = 0; i < n; i++) CHECK(std::abs(y[i] - x[i]) <= 1e-13);
}

TEST_CASE("2D roundtrip through the grid transforms") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SpectralGrid g(32);
    std::vector<double> f(g.size());
    for (auto& v : f) v = d(rng);
    const CVec spec = g.to_spectral(f);
    const auto back = g.to_physical(spec);
    for (std::size_t i = 0; i < f.size(); i++) CHECK(std::fabs(back[i] - f[i]) <= 1e-12);
}

TEST_CASE("cos(x) lands on modes +-1 with coefficient 1/2") {
    SpectralGrid g(32);
    std::vector<double> f(g.size());
    for (int i = 0; i < g.n(); i++)
        for (int j = 0; j < g.n(); j++) f[static_cast<std::size_t>(i) * g.n() + j] = std::cos(g.x(i));
    const CVec spec = g.to_spectral(f);
    for (int i = 0; i < g.n(); i++)
        for (int j = 0; j < g.n(); j++) {
            const std::size_t idx = static_cast<std::size_t>(i) * g.n() + j;
            const bool hit = (i == 1 || i == g.n() - 1) && j == 0;
            CHECK(std::abs(spec[idx] - (hit ? Cplx(0.5) : Cplx(0.0))) <= 1e-13);
        }
}

TEST_CASE("spectral derivative of sin is exact") {
    SpectralGrid g(32);
    std::vector<double> f(g.size());
    for (int i = 0; i < g.n(); i++)
        for (int j = 0; j < g.n(); j++)
            f[static_cast<std::size_t>(i) * g.n() + j] = std::sin(2.0 * g.x(i));
    CVec spec = g.to_spectral(f);
    for (int i = 0; i < g.n(); i++)
        for (int j = 0; j < g.n(); j++) {
            const std::size_t idx = static_cast<std::size_t>(i) * g.n() + j;
            spec[idx] *= Cplx(0.0, g.kx(i));
        }
    const auto df = g.to_physical(spec);
    for (int i = 0; i < g.n(); i++)
        CHECK(df[static_cast<std::size_t>(i) * g.n()] ==
              doctest::Approx(2.0 * std::cos(2.0 * g.x(i))).epsilon(1e-10));
}

TEST_CASE("dealias mask keeps |m| <= n/3") {
    SpectralGrid g(32);  // cut = 10
    CHECK(g.dealias_keep(0));
    // mode (10, 0) kept, (11, 0) dropped
    CHECK(g.dealias_keep(static_cast<std::size_t>(10) * 32));
    CHECK_FALSE(g.dealias_keep(static_cast<std::size_t>(11) * 32));
    // negative side: row 32-10 kept, 32-11 dropped
    CHECK(g.dealias_keep(static_cast<std::size_t>(22) * 32));
    CHECK_FALSE(g.dealias_keep(static_cast<std::size_t>(21) * 32));
}

TEST_CASE("L2 scaling: ||cos x||^2 over the torus") {
    SpectralGrid g(32);
    std::vector<double> f(g.size());
    for (int i = 0; i < g.n(); i++)
        for (int j = 0; j < g.n(); j++) f[static_cast<std::size_t>(i) * g.n() + j] = std::cos(g.x(i));
    const CVec spec = g.to_spectral(f);
    double s = 0.0;
    for (const auto& c : spec) s += std::norm(c);
    // integral of cos^2 over [0,2pi]^2 = 2 pi^2
    CHECK(g.length() * g.length() * s == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
}

TEST_CASE("grid constructor validation") {
    CHECK_THROWS_AS(SpectralGrid(12), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid(4), std::invalid_argument);
    CHECK_THROWS_AS(SpectralGrid(32, -1.0), std::invalid_argument);
}
