#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "visclimit/errors.hpp"
#include "visclimit/params.hpp"

using namespace visclimit;

namespace {
const Coeffs kSec7 = coeffs_from_monomial(8.0 / 9.0, -8.0 / 3.0, 2.0);
}

TEST_CASE("eval_poly point values") {
    CHECK(eval_poly(Coeffs{1, 1, 0}, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(eval_poly(kSec7, 2.0 / 3.0)) < 1e-15);
    CHECK(eval_poly(Coeffs{0, 0, 1}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(eval_poly(Coeffs{1, 1, 0}, 1.5), region_error);
}

TEST_CASE("endpoint values are exact") {
    auto g = vtest::rng(11);
    std::uniform_real_distribution<double> d(-10, 10);
    for (int i = 0; i < 200; ++i) {
        const Coeffs c{d(g), d(g), d(g)};
        CHECK(eval_poly(c, -1.0) == 2.0 * c.c1);
        CHECK(eval_poly(c, 1.0) == 2.0 * c.c2);
    }
}

TEST_CASE("from_monomial solves the coefficient system") {
    // independent route: solve the 3x3 linear system for the illustration
    // polynomial: c1+c2+c3 = a0, c2-c1 = a1, -c3 = a2
    const double a0 = 8.0 / 9.0, a1 = -8.0 / 3.0, a2 = 2.0;
    const double c3 = -a2;
    const double c1 = 0.5 * ((a0 - c3) - a1);
    const double c2 = 0.5 * ((a0 - c3) + a1);
    const Coeffs c = coeffs_from_monomial(a0, a1, a2);
    CHECK(c.c1 == doctest::Approx(c1).epsilon(1e-14));
    CHECK(c.c2 == doctest::Approx(c2).epsilon(1e-14));
    CHECK(c.c3 == doctest::Approx(c3).epsilon(1e-14));
    CHECK(c.c1 == doctest::Approx(25.0 / 9.0).epsilon(1e-14));
    CHECK(c.c2 == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

    // cross-check by evaluating both forms on a grid
    for (int i = 0; i <= 50; ++i) {
        const double x = -1.0 + 2.0 * i / 50;
        CHECK(eval_poly(c, x) ==
              doctest::Approx(a0 + a1 * x + a2 * x * x).epsilon(1e-13));
    }

    const Coeffs u = coeffs_from_monomial(1, 0, -1);
    CHECK(u.c1 == 0.0);
    CHECK(u.c2 == 0.0);
    CHECK(u.c3 == 1.0);
    const Coeffs v = coeffs_from_monomial(2, 0, 0);
    CHECK(v.c1 == 1.0);
    CHECK(v.c2 == 1.0);
    CHECK(v.c3 == 0.0);
}

TEST_CASE("monomial round trip is the identity") {
    auto g = vtest::rng(12);
    std::uniform_real_distribution<double> d(-10, 10);
    for (int i = 0; i < 500; ++i) {
        const Coeffs c{d(g), d(g), d(g)};
        const Monomial m = monomial_from_coeffs(c);
        const Coeffs r = coeffs_from_monomial(m.a0, m.a1, m.a2);
        const double tol = 1e-12 * (1.0 + c.norm());
        CHECK(std::abs(r.c1 - c.c1) <= tol);
        CHECK(std::abs(r.c2 - c.c2) <= tol);
        CHECK(std::abs(r.c3 - c.c3) <= tol);
    }
}

TEST_CASE("c3_bar and c3_star") {
    CHECK(c3_bar(0, 0, 1.0) == doctest::Approx(-4.0).epsilon(1e-15));
    auto g = vtest::rng(13);
    std::uniform_real_distribution<double> d(0.01, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double nu = d(g);
        CHECK(c3_bar(0, 0, nu) ==
              doctest::Approx(-4.0 * nu * nu).epsilon(1e-14));
    }
    CHECK(c3_bar(1, 1, 1e-8) == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK_THROWS_AS(c3_bar(-1.0, 0.0, 0.5), region_error);

    CHECK(c3_star(1, 1) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(c3_star(25.0 / 9.0, 1.0 / 9.0) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(c3_star(0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK_THROWS_AS(c3_star(-0.1, 1.0), region_error);
}

TEST_CASE("region membership") {
    CHECK(in_J(0.0, Coeffs{1, 1, 0}));
    CHECK(!in_J(0.0, Coeffs{1, 1, -3}));
    CHECK(in_J(0.1, Coeffs{-0.005, 0.0, -0.02}));
    CHECK(in_interior_J0(Coeffs{1, 1, 0}));
    CHECK(!in_interior_J0(Coeffs{0, 1, 0}));
    CHECK(in_partial_prime_J0(Coeffs{0, 1, 0}));
    CHECK(in_partial_prime_J0(Coeffs{0, 0, 2}));
    CHECK(in_partial_prime_J0(Coeffs{3, 0, -1.5}));
    CHECK(!in_partial_prime_J0(Coeffs{3, 0, -1.6}));
}

TEST_CASE("region nesting: J_nu' inside J_nu") {
    auto g = vtest::rng(14);
    std::uniform_real_distribution<double> d(-5, 5), dv(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const Coeffs c{d(g), d(g), d(g)};
        const double nu1 = dv(g), nu2 = dv(g);
        const double lo = std::min(nu1, nu2), hi = std::max(nu1, nu2);
        if (in_J(lo, c)) CHECK(in_J(hi, c));
    }
}

TEST_CASE("region predicates agree with the grid-minimum oracle") {
    auto g = vtest::rng(15);
    std::uniform_real_distribution<double> d(-10, 10);
    const int ngrid = 2001;
    int checked = 0;
    for (int i = 0; i < 3000; ++i) {
        const Coeffs c{d(g), d(g), d(g)};
        const double margin = 1e-6 * (1.0 + c.norm());

        const double m_full = vtest::grid_min_poly(c, ngrid);
        if (std::abs(m_full) > margin) {
            CHECK(in_J(0.0, c) == (m_full > 0.0));
            // P > 0 on the closed interval <=> interior of J_0
            CHECK(in_interior_J0(c) == (m_full > margin));
            ++checked;
            // With both endpoint values decisively nonzero the open-interval
            // positivity collapses onto the closed-interval one, and the edge
            // set never applies.
            if (std::min(std::abs(c.c1), std::abs(c.c2)) > margin) {
                CHECK(!in_partial_prime_J0(c));
                CHECK((in_interior_J0(c) || in_partial_prime_J0(c)) ==
                      (m_full > 0.0));
            }
        }
    }
    CHECK(checked > 2000); // the guard must not silently skip everything
}

TEST_CASE("open-interval positivity on the edge families") {
    // P > 0 on (-1,1) <=> interior or the edge set; probed with shrinking
    // collars so the near-endpoint sign is captured.
    auto open_min = [](const Coeffs& c) {
        double m = 1e300;
        for (double delta : {1e-2, 1e-4, 1e-6})
            m = std::min(m, vtest::grid_min_poly(c, 4001, -1.0 + delta,
                                                 1.0 - delta));
        return m;
    };
    struct Case {
        Coeffs c;
        bool positive_open;
    };
    const Case cases[] = {
        {{0, 1, 0}, true},        // edge, concave-up tail
        {{0, 1, -0.5}, true},     // edge boundary c3 = -c2/2
        {{0, 1, -0.51}, false},   // below the edge boundary
        {{3, 0, -1.5}, true},     // mirrored edge boundary
        {{3, 0, -1.51}, false},   //
        {{0, 0, 2}, true},        // both endpoints zero
        {{0, 0, -1}, false},      //
        {{1, 1, 0}, true},        // interior
        {{1, 1, -2}, false},      // double root vanishes inside
    };
    for (const Case& k : cases) {
        CHECK((in_interior_J0(k.c) || in_partial_prime_J0(k.c)) ==
              k.positive_open);
        CHECK((open_min(k.c) > 0.0) == k.positive_open);
    }
}

TEST_CASE("poly_min") {
    const PolyMin m7 = poly_min(kSec7);
    CHECK(m7.x == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(m7.value) < 1e-14);
    const PolyMin mb = poly_min(Coeffs{0, 0, 1});
    CHECK(mb.x == -1.0);
    CHECK(mb.value == 0.0);
    const PolyMin mc = poly_min(Coeffs{1, 1, 0});
    CHECK(mc.x == -1.0);
    CHECK(mc.value == 2.0);

    auto g = vtest::rng(16);
    std::uniform_real_distribution<double> d(-8, 8);
    for (int i = 0; i < 500; ++i) {
        const Coeffs c{d(g), d(g), d(g)};
        const PolyMin m = poly_min(c);
        const double brute = vtest::grid_min_poly(c, 10001);
        CHECK(m.value <= brute + 1e-12 * (1.0 + c.norm()));
        CHECK(brute - m.value <= 1e-5 * (1.0 + c.norm()));
    }
}

TEST_CASE("classify") {
    const Regime r1 = classify(Coeffs{1, 1, 0});
    CHECK(r1.kind == RegimeKind::InteriorJ0);
    CHECK(*r1.alpha == 1.0);
    CHECK(*r1.kappa == 1);
    CHECK(!r1.xbar);

    const Regime r2 = classify(kSec7);
    CHECK(r2.kind == RegimeKind::DoubleRoot);
    CHECK(*r2.alpha == doctest::Approx(2.0 / 3.0));
    CHECK(*r2.kappa == 0);
    CHECK(*r2.xbar == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const Regime r3 = classify(Coeffs{0, 1, 0});
    CHECK(r3.kind == RegimeKind::EdgeC1Zero);
    CHECK(*r3.alpha == doctest::Approx(0.5));
    CHECK(*r3.kappa == 0);

    CHECK(classify(Coeffs{2, 0, 0}).kind == RegimeKind::EdgeC2Zero);
    CHECK(classify(Coeffs{0, 0, 3}).kind == RegimeKind::EdgeBothZero);
    CHECK(classify(Coeffs{1, 1, -3}).kind == RegimeKind::OutsideJ0);
    CHECK_THROWS_AS(classify(Coeffs{0, 0, 0}), region_error);

    // boundary band goes to DoubleRoot, not InteriorJ0
    const double cs = c3_star(1, 1);
    CHECK(classify(Coeffs{1, 1, cs + 1e-14}).kind == RegimeKind::DoubleRoot);
    CHECK(classify(Coeffs{1, 1, cs + 1e-3}).kind == RegimeKind::InteriorJ0);
}

TEST_CASE("classify invariants on random draws") {
    auto g = vtest::rng(17);
    std::uniform_real_distribution<double> d(-6, 6);
    for (int i = 0; i < 2000; ++i) {
        const Coeffs c{d(g), d(g), d(g)};
        if (c.is_zero()) continue;
        const Regime r = classify(c);
        CHECK(r.alpha.has_value() == (r.kind != RegimeKind::OutsideJ0));
        if (r.alpha) {
            CHECK((*r.alpha == 1.0) == (*r.kappa == 1));
        } else {
            CHECK(!r.kappa);
        }
        CHECK(r.xbar.has_value() == (r.kind == RegimeKind::DoubleRoot));
    }
}

TEST_CASE("tau values and identities") {
    const TauValues t1 = tau(1.0, Coeffs{0, 0, 1});
    CHECK(t1.tau1 == doctest::Approx(0.0));
    CHECK(t1.tau2 == doctest::Approx(4.0));

    const TauValues t2 = tau(1.0, Coeffs{0, 3, 0});
    CHECK(t2.tau2p == doctest::Approx(2.0));
    CHECK(t2.tau1p == doctest::Approx(-6.0));

    const TauValues t3 = tau(0.1, Coeffs{1, 1, 0});
    CHECK(t3.tau2 ==
          doctest::Approx(0.2 + 2.0 * std::sqrt(1.01)).epsilon(1e-14));
    CHECK(0.5 * t3.tau2 * t3.tau2 - 0.2 * t3.tau2 ==
          doctest::Approx(2.0).epsilon(1e-13));

    CHECK_THROWS_AS(tau(0.01, Coeffs{1, 1, -3}), region_error);

    auto g = vtest::rng(18);
    std::uniform_real_distribution<double> dc(0.0, 5.0), dv(0.01, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double nu = dv(g);
        const Coeffs c{dc(g), dc(g), 0.0};
        const TauValues t = tau(nu, c);
        const double tol = 1e-11 * (1.0 + c.norm());
        for (double ta : {t.tau1, t.tau2})
            CHECK(std::abs(0.5 * ta * ta - 2.0 * nu * ta - 2.0 * c.c1) <= tol);
        for (double tb : {t.tau1p, t.tau2p})
            CHECK(std::abs(0.5 * tb * tb + 2.0 * nu * tb - 2.0 * c.c2) <= tol);
    }
}
