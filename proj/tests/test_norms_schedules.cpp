#include <cmath>

#include "dln/norms.hpp"
#include "dln/schedules.hpp"
#include "doctest.h"

using namespace dln;

TEST_CASE("discrete norms") {
    ErrorSeries constant;
    for (int i = 0; i < 40; i++) constant.push(0.25 * (i + 1), 0.25, 3.0);
    CHECK(discrete_norm(constant, NormKind::ell_2_left_riemann) ==
          doctest::Approx(3.0 * std::sqrt(10.0)).epsilon(1e-12));
    CHECK(discrete_norm(constant, NormKind::ell_inf) == doctest::Approx(3.0));

    ErrorSeries single;
    single.push(1.0, 1.0, 0.7);
    CHECK(discrete_norm(single, NormKind::ell_inf) == doctest::Approx(0.7));

    ErrorSeries s;
    s.push(1.0, 1.0, 1.0);
    s.push(2.0, 1.0, 2.0);
    s.push(3.0, 1.0, 3.0);
    CHECK(discrete_norm(s, NormKind::ell_2_left_riemann) ==
          doctest::Approx(std::sqrt(14.0)).epsilon(1e-12));

    ErrorSeries empty;
    CHECK_THROWS_AS(discrete_norm(empty, NormKind::ell_inf), std::invalid_argument);
}

TEST_CASE("convergence order") {
    CHECK(convergence_order(0.000740428, 0.000228828, 1.0 / 16, 1.0 / 24) ==
          doctest::Approx(2.89).epsilon(1e-2));
    CHECK(convergence_order(0.0610604, 0.0271831, 1.0 / 16, 1.0 / 24) ==
          doctest::Approx(1.99).epsilon(1e-2));
    CHECK(convergence_order(4.0e-3, 1.0e-3, 0.2, 0.1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(convergence_order(-1.0, 1.0, 0.2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(convergence_order(1.0, 1.0, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("schedules") {
    const auto c = constant_schedule(0.25, 2.0);
    double total = 0.0;
    for (double k : c) total += k;
    CHECK(total == doctest::Approx(2.0));
    CHECK(c.size() == 8);

    const auto s = sinusoidal_schedule(3.0);
    double t = 0.0;
    for (int i = 0; i < 10; i++) {
        CHECK(s[i] == doctest::Approx(0.05));
        t += s[i];
    }
    CHECK(s[10] == doctest::Approx(0.05 + 0.002 * std::sin(10.0 * t)));

    const auto inc = increasing_schedule(1.0);
    CHECK(inc[0] == doctest::Approx(0.05));
    for (std::size_t i = 1; i < inc.size(); i++)
        CHECK(inc[i] - inc[i - 1] == doctest::Approx(0.001));
}
