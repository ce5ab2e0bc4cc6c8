#include "visclimit/params.hpp"

#include <cmath>

#include "visclimit/errors.hpp"

namespace visclimit {

double Coeffs::norm() const { return std::sqrt(c1 * c1 + c2 * c2 + c3 * c3); }

bool Coeffs::finite() const {
    return std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c3);
}

bool Coeffs::is_zero() const { return c1 == 0.0 && c2 == 0.0 && c3 == 0.0; }

double membership_tol(const Coeffs& c) { return 1e-12 * (1.0 + c.norm()); }

double eval_poly(const Coeffs& c, double x) {
    if (!(std::abs(x) <= 1.0 + 4e-16))
        throw region_error("eval_poly: x outside [-1,1]");
    x = std::clamp(x, -1.0, 1.0);
    // (1-x)(1+x) keeps the endpoint values exact: P(-1) = 2 c1, P(1) = 2 c2.
    const double m = 1.0 - x, p = 1.0 + x;
    return c.c1 * m + c.c2 * p + c.c3 * m * p;
}

double eval_poly_deriv(const Coeffs& c, double x) {
    return (c.c2 - c.c1) - 2.0 * c.c3 * x;
}

Coeffs coeffs_from_monomial(double a0, double a1, double a2) {
    // a0 = c1+c2+c3, a1 = c2-c1, a2 = -c3.
    return Coeffs{0.5 * (a0 + a2 - a1), 0.5 * (a0 + a2 + a1), -a2};
}

Monomial monomial_from_coeffs(const Coeffs& c) {
    return Monomial{c.c1 + c.c2 + c.c3, c.c2 - c.c1, -c.c3};
}

double c3_bar(double c1, double c2, double nu) {
    const double d1 = nu * nu + c1;
    const double d2 = nu * nu + c2;
    if (d1 < 0.0 || d2 < 0.0)
        throw region_error("c3_bar: nu^2 + c_i negative");
    const double s = std::sqrt(d1) + std::sqrt(d2);
    return -0.5 * s * (s + 2.0 * nu);
}

double c3_star(double c1, double c2) {
    if (c1 < 0.0 || c2 < 0.0)
        throw region_error("c3_star: negative input");
    const double s = std::sqrt(c1) + std::sqrt(c2);
    return -0.5 * s * s;
}

bool in_J(double nu, const Coeffs& c) {
    if (!c.finite()) return false;
    const double nu2 = nu * nu;
    if (c.c1 < -nu2 || c.c2 < -nu2) return false;
    return c.c3 >= c3_bar(c.c1, c.c2, nu);
}

bool in_interior_J0(const Coeffs& c) {
    return c.finite() && c.c1 > 0.0 && c.c2 > 0.0 &&
           c.c3 > c3_star(c.c1, c.c2);
}

bool in_partial_prime_J0(const Coeffs& c) {
    if (!c.finite()) return false;
    if (c.c1 == 0.0 && c.c2 == 0.0) return c.c3 > 0.0;
    if (c.c2 == 0.0 && c.c1 > 0.0) return c.c3 >= -0.5 * c.c1;
    if (c.c1 == 0.0 && c.c2 > 0.0) return c.c3 >= -0.5 * c.c2;
    return false;
}

PolyMin poly_min(const Coeffs& c) {
    const double left = 2.0 * c.c1, right = 2.0 * c.c2;
    PolyMin best = (right < left) ? PolyMin{1.0, right} : PolyMin{-1.0, left};
    if (c.c3 < 0.0) {
        const double xc = (c.c2 - c.c1) / (2.0 * c.c3);
        if (xc >= -1.0 && xc <= 1.0) {
            const double v = eval_poly(c, xc);
            if (v < best.value) best = PolyMin{xc, v};
        }
    }
    return best;
}

const char* regime_kind_name(RegimeKind k) {
    switch (k) {
        case RegimeKind::InteriorJ0: return "InteriorJ0";
        case RegimeKind::DoubleRoot: return "DoubleRoot";
        case RegimeKind::EdgeC1Zero: return "EdgeC1Zero";
        case RegimeKind::EdgeC2Zero: return "EdgeC2Zero";
        case RegimeKind::EdgeBothZero: return "EdgeBothZero";
        case RegimeKind::OutsideJ0: return "OutsideJ0";
    }
    return "?";
}

Regime classify(const Coeffs& c) {
    if (!c.finite() || c.is_zero())
        throw region_error("classify: zero or non-finite coefficient vector");
    const double tol = membership_tol(c);

    Regime r;
    const bool c1z = std::abs(c.c1) <= tol;
    const bool c2z = std::abs(c.c2) <= tol;
    const bool in_J0 = c.c1 >= -tol && c.c2 >= -tol &&
                       c.c3 >= c3_star(std::max(c.c1, 0.0),
                                       std::max(c.c2, 0.0)) -
                                   tol;
    if (!in_J0) {
        r.kind = RegimeKind::OutsideJ0;
        return r;
    }

    const double cs = c3_star(std::max(c.c1, 0.0), std::max(c.c2, 0.0));
    if (cs < -tol && std::abs(c.c3 - cs) <= tol) {
        // Boundary band goes to DoubleRoot: the nu^(2/3) rate is the
        // conservative prediction.
        r.kind = RegimeKind::DoubleRoot;
        r.alpha = 2.0 / 3.0;
        r.kappa = 0;
        const double s1 = std::sqrt(std::max(c.c1, 0.0));
        const double s2 = std::sqrt(std::max(c.c2, 0.0));
        r.xbar = (s1 - s2) / (s1 + s2);
        return r;
    }
    if (c1z || c2z) {
        r.kind = (c1z && c2z)  ? RegimeKind::EdgeBothZero
                 : c1z         ? RegimeKind::EdgeC1Zero
                               : RegimeKind::EdgeC2Zero;
        r.alpha = 0.5;
        r.kappa = 0;
        return r;
    }
    r.kind = RegimeKind::InteriorJ0;
    r.alpha = 1.0;
    r.kappa = 1;
    return r;
}

TauValues tau(double nu, const Coeffs& c) {
    if (!(nu > 0.0)) throw region_error("tau: nu must be positive");
    if (!in_J(nu, c)) throw region_error("tau: c outside J_nu");
    const double s1 = std::sqrt(nu * nu + c.c1);
    const double s2 = std::sqrt(nu * nu + c.c2);
    return TauValues{2.0 * nu - 2.0 * s1, 2.0 * nu + 2.0 * s1,
                     -2.0 * nu - 2.0 * s2, -2.0 * nu + 2.0 * s2};
}

} // namespace visclimit
