#pragma once

#include <span>
#include <vector>

#include "visclimit/params.hpp"

namespace visclimit {

// ============================================================================
// Inviscid limit profiles: (1/2) V^2 = P_c(x), i.e. V = +-sqrt(2 P_c), and
// the discontinuous glued limits (-sqrt below x0, +sqrt above).
// ============================================================================

struct EulerSpec {
    enum class Kind { Plus, Minus, Glued } kind = Kind::Plus;
    double x0 = 0.0; // glue latitude, Glued only

    static EulerSpec plus() { return {Kind::Plus, 0.0}; }
    static EulerSpec minus() { return {Kind::Minus, 0.0}; }
    static EulerSpec glued_at(double x0) { return {Kind::Glued, x0}; }
};

struct EulerProfile {
    Coeffs c;
    EulerSpec sign;
    std::vector<double> grid;
    std::vector<double> values;
};

/// V at a single x; Glued switches sign at x0, right-inclusive.
double euler_value(const Coeffs& c, const EulerSpec& sign, double x);

/// Samples V on the given grid. Requires c in J_0 (P_c >= 0 on [-1,1]).
EulerProfile euler_profile(const Coeffs& c, const EulerSpec& sign,
                           std::span<const double> grid);

/// Point values of the inviscid velocity/pressure fields:
///   v_theta = +- sqrt(2P)/(r sin th),  v_r = +- P'/(r sqrt(2P)),
///   q = -(P'' + 2P/sin^2 th)/(2 r^2).
/// At a double root of P_c, v_r carries its one-sided limit
/// +-sqrt(2|c3|) sign(x - xbar) and at_double_root is set.
struct EulerFieldSample {
    double v_r;
    double v_theta;
    double q;
    bool at_double_root = false;
};
EulerFieldSample euler_field(const Coeffs& c, const EulerSpec& sign,
                             double theta, double r);

/// Closed-form Euler pressure q_c(theta, r).
double euler_pressure_closed(const Coeffs& c, double theta, double r);

/// q from the first-order relation 2q = v_theta dv_r/dtheta - v_r^2 -
/// v_theta^2 at r=1, via centered differences in theta (step 1e-4).
std::vector<double> euler_pressure_ode(const Coeffs& c, const EulerSpec& sign,
                                       std::span<const double> theta_grid);

} // namespace visclimit
