#include "visclimit/euler.hpp"

#include <cmath>

#include "visclimit/errors.hpp"

namespace visclimit {

namespace {

double sqrt2p(const Coeffs& c, double x) {
    // P_c >= 0 is a precondition; tiny negative rounding near roots clamps.
    return std::sqrt(std::max(eval_poly(c, x), 0.0));
}

int sign_of(const EulerSpec& s, double x) {
    switch (s.kind) {
        case EulerSpec::Kind::Plus: return +1;
        case EulerSpec::Kind::Minus: return -1;
        case EulerSpec::Kind::Glued: return x < s.x0 ? -1 : +1;
    }
    return +1;
}

void require_J0(const Coeffs& c) {
    if (!in_J(0.0, c))
        throw region_error("euler: P_c negative somewhere on [-1,1]");
}

} // namespace

double euler_value(const Coeffs& c, const EulerSpec& sign, double x) {
    return sign_of(sign, x) * std::sqrt(2.0) * sqrt2p(c, x);
}

EulerProfile euler_profile(const Coeffs& c, const EulerSpec& sign,
                           std::span<const double> grid) {
    require_J0(c);
    EulerProfile p;
    p.c = c;
    p.sign = sign;
    p.grid.assign(grid.begin(), grid.end());
    p.values.resize(p.grid.size());
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        p.values[i] = euler_value(c, sign, p.grid[i]);
    return p;
}

EulerFieldSample euler_field(const Coeffs& c, const EulerSpec& sign,
                             double theta, double r) {
    if (!(r > 0.0)) throw region_error("euler_field: r <= 0");
    if (!(theta > 0.0 && theta < M_PI))
        throw region_error("euler_field: theta outside (0,pi)");
    require_J0(c);
    const double x = std::cos(theta);
    const double st = std::sin(theta);
    const double P = std::max(eval_poly(c, x), 0.0);
    const double dP = eval_poly_deriv(c, x);
    const double sg = sign_of(sign, x);

    EulerFieldSample out{};
    out.v_theta = sg * std::sqrt(2.0 * P) / (r * st);
    out.q = -0.5 / (r * r) * (-2.0 * c.c3 + 2.0 * P / (st * st));

    const double ptol = 1e-14 * (1.0 + c.norm());
    if (P > ptol) {
        out.v_r = sg * dP / (r * std::sqrt(2.0 * P));
    } else if (std::abs(dP) <= 1e-7 * (1.0 + c.norm())) {
        // Double root of P_c: P = -c3 (x-xbar)^2 with c3 < 0, so
        // P'/sqrt(2P) has the one-sided limit sqrt(2|c3|) sign(x - xbar).
        const double s1 = std::sqrt(std::max(c.c1, 0.0));
        const double s2 = std::sqrt(std::max(c.c2, 0.0));
        const double xbar = (s1 - s2) / (s1 + s2);
        out.v_r = sg * std::sqrt(2.0 * std::abs(c.c3)) *
                  ((x >= xbar) ? 1.0 : -1.0) / r;
        out.at_double_root = true;
    } else {
        throw region_error("euler_field: v_r singular where P_c vanishes");
    }
    return out;
}

double euler_pressure_closed(const Coeffs& c, double theta, double r) {
    if (!(r > 0.0)) throw region_error("euler_pressure: r <= 0");
    const double x = std::cos(theta);
    const double st = std::sin(theta);
    const double P = eval_poly(c, x);
    return -0.5 / (r * r) * (-2.0 * c.c3 + 2.0 * P / (st * st));
}

std::vector<double> euler_pressure_ode(const Coeffs& c, const EulerSpec& sign,
                                       std::span<const double> theta_grid) {
    require_J0(c);
    const double h = 1e-4;
    std::vector<double> q(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const double th = theta_grid[i];
        const EulerFieldSample f0 = euler_field(c, sign, th, 1.0);
        const EulerFieldSample fp = euler_field(c, sign, th + h, 1.0);
        const EulerFieldSample fm = euler_field(c, sign, th - h, 1.0);
        const double dvr = (fp.v_r - fm.v_r) / (2.0 * h);
        q[i] = 0.5 * (f0.v_theta * dvr - f0.v_r * f0.v_r -
                      f0.v_theta * f0.v_theta);
    }
    return q;
}

} // namespace visclimit
