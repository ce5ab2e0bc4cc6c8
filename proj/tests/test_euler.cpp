#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "visclimit/errors.hpp"
#include "visclimit/euler.hpp"
#include "visclimit/grids.hpp"

using namespace visclimit;

namespace {
constexpr double kPi = std::numbers::pi;
const Coeffs kSec7 = coeffs_from_monomial(8.0 / 9.0, -8.0 / 3.0, 2.0);
}

TEST_CASE("euler profile values") {
    CHECK(euler_value(Coeffs{1, 1, 0}, EulerSpec::plus(), 0.0) ==
          doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(euler_value(kSec7, EulerSpec::plus(), 2.0 / 3.0)) < 1e-7);
    CHECK(euler_value(Coeffs{0, 0, 1}, EulerSpec::minus(), 0.0) ==
          doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(
        euler_profile(Coeffs{1, 1, -3}, EulerSpec::plus(),
                      chebyshev_lobatto(11)),
        region_error);
}

TEST_CASE("profile squares back to the polynomial") {
    const std::vector<double> grid = chebyshev_lobatto(401);
    for (const Coeffs& c :
         {Coeffs{1, 1, 0}, Coeffs{0, 1, 0}, kSec7, Coeffs{2, 0.3, -0.9}}) {
        const EulerProfile p = euler_profile(c, EulerSpec::plus(), grid);
        for (std::size_t i = 0; i < p.grid.size(); ++i)
            CHECK(std::abs(0.5 * p.values[i] * p.values[i] -
                           eval_poly(c, p.grid[i])) <=
                  1e-12 * (1.0 + c.norm()));
    }
}

TEST_CASE("glued profile has one jump of the right size") {
    const Coeffs c{1, 1, 0};
    const double x0 = 0.25;
    const EulerProfile p =
        euler_profile(c, EulerSpec::glued_at(x0), chebyshev_lobatto(801));
    int jumps = 0;
    double jump_at = 0, jump_size = 0;
    for (std::size_t i = 1; i < p.grid.size(); ++i) {
        const double d = std::abs(p.values[i] - p.values[i - 1]);
        const double cont = 0.2; // grid-resolution drift of a smooth branch
        if (d > cont) {
            ++jumps;
            jump_at = 0.5 * (p.grid[i] + p.grid[i - 1]);
            jump_size = d;
        }
    }
    CHECK(jumps == 1);
    CHECK(std::abs(jump_at - x0) < 0.01);
    CHECK(jump_size ==
          doctest::Approx(2.0 * std::sqrt(2.0 * eval_poly(c, x0)))
              .epsilon(1e-2));
}

TEST_CASE("euler field point values") {
    const EulerFieldSample f =
        euler_field(Coeffs{1, 1, 0}, EulerSpec::plus(), kPi / 2, 1.0);
    CHECK(f.v_theta == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.v_r == doctest::Approx(0.0));
    CHECK(f.q == doctest::Approx(-2.0).epsilon(1e-14));

    const EulerFieldSample g =
        euler_field(Coeffs{0, 0, 1}, EulerSpec::plus(), kPi / 2, 2.0);
    CHECK(g.v_theta == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(g.v_r == doctest::Approx(0.0));
}

TEST_CASE("v_r consistency with the x-derivative chain rule") {
    // v_r at r=1 equals d/dx[sqrt(2P)] evaluated at x = cos(theta)
    const Coeffs c{2, 0.5, 0.2};
    for (double th = 0.4; th < 2.8; th += 0.1) {
        const double x = std::cos(th);
        const double h = 1e-6;
        const double d =
            (std::sqrt(2.0 * eval_poly(c, x + h)) -
             std::sqrt(2.0 * eval_poly(c, x - h))) /
            (2.0 * h);
        const EulerFieldSample f = euler_field(c, EulerSpec::plus(), th, 1.0);
        CHECK(f.v_r == doctest::Approx(d).epsilon(1e-6));
    }
}

TEST_CASE("double-root one-sided limit of v_r") {
    const double th_bar = std::acos(2.0 / 3.0);
    const EulerFieldSample f =
        euler_field(kSec7, EulerSpec::plus(), th_bar, 1.0);
    CHECK(f.at_double_root);
    CHECK(std::abs(f.v_r) == doctest::Approx(2.0).epsilon(1e-6));

    // the limit flips sign across the root
    const EulerFieldSample l =
        euler_field(kSec7, EulerSpec::plus(), th_bar + 1e-3, 1.0);
    const EulerFieldSample r =
        euler_field(kSec7, EulerSpec::plus(), th_bar - 1e-3, 1.0);
    CHECK(l.v_r < 0.0); // theta above the root means x below it
    CHECK(r.v_r > 0.0);
}

TEST_CASE("pressure from the first-order relation matches the closed form") {
    const Coeffs c{1, 1, 0};
    std::vector<double> thetas;
    for (double th = kPi / 6; th <= 5 * kPi / 6 + 1e-12; th += kPi / 60)
        thetas.push_back(th);
    const std::vector<double> q = euler_pressure_ode(c, EulerSpec::plus(), thetas);
    for (std::size_t i = 0; i < thetas.size(); ++i)
        CHECK(std::abs(q[i] - euler_pressure_closed(c, thetas[i], 1.0)) <=
              1e-6);

    CHECK(euler_pressure_closed(c, kPi / 2, 1.0) ==
          doctest::Approx(-2.0).epsilon(1e-14));

    // q carries no sign choice
    const std::vector<double> qm =
        euler_pressure_ode(c, EulerSpec::minus(), thetas);
    for (std::size_t i = 0; i < thetas.size(); ++i)
        CHECK(q[i] == doctest::Approx(qm[i]).epsilon(1e-12));
}
