#pragma once

#include <optional>
#include <string>

namespace visclimit {

/// Parameter triple of the pressure polynomial
///   P_c(x) = c1(1-x) + c2(1+x) + c3(1-x^2),  x in [-1,1].
struct Coeffs {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    double norm() const;
    bool finite() const;
    bool is_zero() const;

    friend bool operator==(const Coeffs&, const Coeffs&) = default;
};

/// P_c(x). Exact 2*c1 at x=-1 and 2*c2 at x=+1. Throws region_error for x
/// outside [-1,1].
double eval_poly(const Coeffs& c, double x);

/// P_c'(x) = (c2-c1) - 2*c3*x.
double eval_poly_deriv(const Coeffs& c, double x);

/// Inverts P_c(x) = a0 + a1 x + a2 x^2 into the (c1,c2,c3) form.
Coeffs coeffs_from_monomial(double a0, double a1, double a2);

/// Expands P_c into monomial coefficients (a0, a1, a2).
struct Monomial {
    double a0, a1, a2;
};
Monomial monomial_from_coeffs(const Coeffs& c);

/// Lower boundary of the admissible region in c3 for viscosity nu:
///   cbar3 = -(1/2)(s1+s2)(s1+s2+2 nu),  s_i = sqrt(nu^2 + c_i).
/// Requires nu^2+c1 >= 0 and nu^2+c2 >= 0.
double c3_bar(double c1, double c2, double nu);

/// Inviscid limit of c3_bar: -(1/2)(sqrt(c1)+sqrt(c2))^2. Requires c1,c2 >= 0.
double c3_star(double c1, double c2);

/// Membership in J_nu = { c1 >= -nu^2, c2 >= -nu^2, c3 >= c3_bar }.
bool in_J(double nu, const Coeffs& c);

/// Strict interior of J_0: c1,c2 > 0 and c3 > c3_star(c1,c2).
bool in_interior_J0(const Coeffs& c);

/// The edge set where P_c > 0 on the open interval but vanishes at an
/// endpoint: {(0,0,c3): c3>0} u {(c1,0,c3): c1>0, c3>=-c1/2}
///                       u {(0,c2,c3): c2>0, c3>=-c2/2}.
bool in_partial_prime_J0(const Coeffs& c);

/// argmin / min of P_c over [-1,1]; ties between the endpoints resolve to
/// x=-1.
struct PolyMin {
    double x;
    double value;
};
PolyMin poly_min(const Coeffs& c);

/// Convergence-regime classification of c.
enum class RegimeKind {
    InteriorJ0,
    DoubleRoot,
    EdgeC1Zero,
    EdgeC2Zero,
    EdgeBothZero,
    OutsideJ0,
};

struct Regime {
    RegimeKind kind = RegimeKind::OutsideJ0;
    std::optional<double> alpha; // rate exponent: 1, 2/3 or 1/2
    std::optional<int> kappa;    // log-correction flag: 1 iff alpha == 1
    std::optional<double> xbar;  // double-root location, DoubleRoot only
};

const char* regime_kind_name(RegimeKind k);

/// Classifies c != 0. Equality c3 = c3_star is tested with relative tolerance
/// 1e-12*(1+|c|); within that band DoubleRoot wins over InteriorJ0.
Regime classify(const Coeffs& c);

/// Relative tolerance used for region-membership equality tests.
double membership_tol(const Coeffs& c);

/// The four attainable endpoint values of solutions for c in J_nu:
///   tau1/tau2 at x=-1, tau1p/tau2p at x=+1.
struct TauValues {
    double tau1, tau2, tau1p, tau2p;
};
TauValues tau(double nu, const Coeffs& c);

} // namespace visclimit
