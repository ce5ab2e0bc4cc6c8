#include "visclimit/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "visclimit/errors.hpp"
#include "visclimit/grids.hpp"

namespace visclimit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double poly_at(const Coeffs& c, double x) {
    const double m = 1.0 - x, p = 1.0 + x;
    return c.c1 * m + c.c2 * p + c.c3 * m * p;
}

// Equation right-hand side U' = (P_c - 2 nu x U - U^2/2) / (nu (1-x)(1+x)).
struct Rhs {
    double nu;
    Coeffs c;
    double operator()(double x, double u) const {
        return (poly_at(c, x) - 2.0 * nu * x * u - 0.5 * u * u) /
               (nu * (1.0 - x) * (1.0 + x));
    }
};

double ode_residual_at(double nu, const Coeffs& c, double x, double u,
                       double du) {
    return std::abs(nu * (1.0 - x) * (1.0 + x) * du + 2.0 * nu * x * u +
                    0.5 * u * u - poly_at(c, x));
}

// --- cubic Hermite on [x0,x1] with values/slopes at both ends --------------

double hermite_value(double x0, double u0, double f0, double x1, double u1,
                     double f1, double x) {
    const double h = x1 - x0;
    if (h == 0.0) return u0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * h * f0 +
           (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * h * f1;
}

double hermite_deriv(double x0, double u0, double f0, double x1, double u1,
                     double f1, double x) {
    const double h = x1 - x0;
    if (h == 0.0) return f0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    return (6 * t2 - 6 * t) * u0 / h + (3 * t2 - 4 * t + 1) * f0 +
           (-6 * t2 + 6 * t) * u1 / h + (3 * t2 - 2 * t) * f1;
}

struct Pt {
    double x, u, f;
};

// --- Dormand-Prince 5(4) with FSAL ------------------------------------------

struct StepOut {
    double u5;   // 5th-order value at x+h
    double k7;   // slope at (x+h, u5)
    double err;  // embedded error estimate
};

StepOut dopri5_step(const Rhs& rhs, double x, double u, double k1, double h) {
    constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 4.0 / 5, a5 = 8.0 / 9;
    constexpr double b21 = 1.0 / 5;
    constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
    constexpr double b41 = 44.0 / 45, b42 = -56.0 / 15, b43 = 32.0 / 9;
    constexpr double b51 = 19372.0 / 6561, b52 = -25360.0 / 2187,
                     b53 = 64448.0 / 6561, b54 = -212.0 / 729;
    constexpr double b61 = 9017.0 / 3168, b62 = -355.0 / 33,
                     b63 = 46732.0 / 5247, b64 = 49.0 / 176,
                     b65 = -5103.0 / 18656;
    constexpr double w1 = 35.0 / 384, w3 = 500.0 / 1113, w4 = 125.0 / 192,
                     w5 = -2187.0 / 6784, w6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double k2 = rhs(x + a2 * h, u + h * (b21 * k1));
    const double k3 = rhs(x + a3 * h, u + h * (b31 * k1 + b32 * k2));
    const double k4 = rhs(x + a4 * h, u + h * (b41 * k1 + b42 * k2 + b43 * k3));
    const double k5 = rhs(x + a5 * h,
                          u + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    const double k6 =
        rhs(x + h,
            u + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    const double u5 =
        u + h * (w1 * k1 + w3 * k3 + w4 * k4 + w5 * k5 + w6 * k6);
    const double k7 = rhs(x + h, u5);
    const double err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return StepOut{u5, k7, err};
}

struct PieceConfig {
    bool stop_at_zero = false;
    bool has_window = false; // interior-layer step cap nu/4
    double wlo = 0.0, whi = 0.0;
    double blow_bound = 0.0; // |u| beyond this aborts the piece
    double res_cap = 0.0;    // Hermite-consistency residual cap
};

struct PieceResult {
    std::vector<Pt> pts; // in integration order
    bool stopped_at_zero = false;
    double x_zero = kNaN;
};

double hermite_zero(const Pt& a, const Pt& b) {
    double lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
    double ulo = hermite_value(a.x, a.u, a.f, b.x, b.u, b.f, lo);
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double um = hermite_value(a.x, a.u, a.f, b.x, b.u, b.f, mid);
        if (um == 0.0) return mid;
        if ((um > 0) == (ulo > 0)) {
            lo = mid;
            ulo = um;
        } else {
            hi = mid;
        }
        if (hi - lo <= 4e-16 * std::max(1.0, std::abs(lo))) break;
    }
    return 0.5 * (lo + hi);
}

PieceResult integrate_piece(const Rhs& rhs, double x0, double u0, double x_to,
                            const PieceConfig& cfg, const SolverOptions& opt) {
    PieceResult out;
    const double dir = (x_to >= x0) ? 1.0 : -1.0;
    double x = x0, u = u0;
    double k1 = rhs(x, u);
    out.pts.push_back({x, u, k1});

    auto hmax_at = [&](double xc) {
        double cap = 0.125 * (1.0 - std::abs(xc));
        if (cfg.has_window && xc >= cfg.wlo && xc <= cfg.whi)
            cap = std::min(cap, 0.25 * rhs.nu);
        return cap;
    };

    double h = std::min({hmax_at(x), std::abs(x_to - x), 1e-6});
    bool last_rejected = false;
    std::size_t steps = 0;

    while (dir * (x_to - x) > 0.0) {
        const double rem = std::abs(x_to - x);
        if (rem <= 1e-13 * (1.0 + std::abs(x_to))) break;
        if (++steps > opt.max_steps)
            throw numerical_error("riccati: step budget exhausted");
        h = std::min({h, hmax_at(x), rem});
        if (h < 1e-14) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "riccati: step size underflow at x=%.12f u=%.6e",
                          x, u);
            throw numerical_error(msg);
        }

        const StepOut s = dopri5_step(rhs, x, u, k1, dir * h);
        if (!std::isfinite(s.u5) || !std::isfinite(s.err)) {
            h *= 0.2;
            last_rejected = true;
            continue;
        }
        const double scale =
            opt.atol + opt.rtol * std::max(std::abs(u), std::abs(s.u5));
        const double errnorm = std::abs(s.err) / scale;
        if (errnorm > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(errnorm, -0.2));
            last_rejected = true;
            continue;
        }
        // Interpolant consistency: the stored profile must satisfy the
        // equation through the Hermite reconstruction, so reject steps whose
        // interpolant residual would exceed the acceptance cap. The cubic's
        // derivative error peaks near t = 0.21 and 0.79, the value error at
        // t = 0.5; large smooth steps need the denser probe set.
        const double x1 = x + dir * h;
        double rmax = 0.0;
        for (double t : {0.2, 0.35, 0.5, 0.65, 0.8}) {
            const double xm = x + dir * h * t;
            const double um = hermite_value(x, u, k1, x1, s.u5, s.k7, xm);
            const double dm = hermite_deriv(x, u, k1, x1, s.u5, s.k7, xm);
            rmax = std::max(rmax, ode_residual_at(rhs.nu, rhs.c, xm, um, dm));
        }
        if (rmax > cfg.res_cap) {
            h *= std::clamp(0.8 * std::cbrt(cfg.res_cap / rmax), 0.2, 0.9);
            last_rejected = true;
            continue;
        }

        if (std::abs(s.u5) > cfg.blow_bound)
            throw numerical_error(
                "riccati: trajectory left the a-priori bound");

        const Pt prev = out.pts.back();
        x = x1;
        u = s.u5;
        k1 = s.k7;
        out.pts.push_back({x, u, k1});

        if (cfg.stop_at_zero && (prev.u > 0) != (u > 0)) {
            const double xz =
                (u == 0.0) ? x : hermite_zero(prev, out.pts.back());
            out.pts.pop_back();
            out.pts.push_back({xz, 0.0, rhs(xz, 0.0)});
            out.stopped_at_zero = true;
            out.x_zero = xz;
            return out;
        }

        double fac = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
        fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
        last_rejected = false;
        h *= fac;
    }
    return out;
}

// --- profile assembly --------------------------------------------------------

struct EndPolicy {
    double required = kNaN; // tau value pinned at the endpoint
    double wrong = kNaN;    // the other attainable value (gross-miss check)
    double tau1 = kNaN, tau2 = kNaN; // both candidates (anchored policy)
};

double compute_residual_sup(double nu, const Coeffs& c,
                            const std::vector<double>& grid,
                            const std::vector<double>& values,
                            const std::vector<double>& deriv) {
    double r = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        r = std::max(r,
                     ode_residual_at(nu, c, grid[i], values[i], deriv[i]));
    return r;
}

double lhopital_slope_or_nan(double nu, const Coeffs& c, Side side,
                             double u_end) {
    if (std::abs(u_end) < 2.0 * nu * (1.0 - 1e-9)) return kNaN;
    const double xe = (side == Side::Left) ? -1.0 : 1.0;
    return (eval_poly_deriv(c, xe) - 2.0 * nu * u_end) / u_end;
}

SolutionProfile assemble_profile(double nu, const Coeffs& c,
                                 const Branch& branch, std::vector<Pt> pts,
                                 const EndPolicy& left, const EndPolicy& right,
                                 const SolverOptions& opt) {
    std::sort(pts.begin(), pts.end(),
              [](const Pt& a, const Pt& b) { return a.x < b.x; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Pt& a, const Pt& b) {
                              return std::abs(a.x - b.x) <= 1e-14;
                          }),
              pts.end());
    if (pts.size() < 2) throw numerical_error("riccati: empty integration");

    auto end_value = [&](const EndPolicy& pol, double u_near) {
        if (std::isfinite(pol.required)) {
            if (std::isfinite(pol.wrong) &&
                std::abs(u_near - pol.required) > std::abs(u_near - pol.wrong))
                throw numerical_error(
                    "riccati: endpoint value landed on the wrong branch");
            return pol.required;
        }
        // Anchored branches pick the nearer attainable value, falling back
        // to the computed value if neither is credibly close.
        const double d1 = std::abs(u_near - pol.tau1);
        const double d2 = std::abs(u_near - pol.tau2);
        const double best = (d1 <= d2) ? pol.tau1 : pol.tau2;
        const double sep = std::abs(pol.tau2 - pol.tau1);
        if (std::min(d1, d2) <= 0.25 * sep + 1e-3 * (1.0 + c.norm()))
            return best;
        return u_near;
    };

    const double uL = end_value(left, pts.front().u);
    const double uR = end_value(right, pts.back().u);
    const double xLo = pts.front().x, xHi = pts.back().x;
    double slopeL = lhopital_slope_or_nan(nu, c, Side::Left, uL);
    double slopeR = lhopital_slope_or_nan(nu, c, Side::Right, uR);
    if (!std::isfinite(slopeL)) slopeL = (pts.front().u - uL) / (xLo + 1.0);
    if (!std::isfinite(slopeR)) slopeR = (uR - pts.back().u) / (1.0 - xHi);

    // Target points: Chebyshev nodes plus collar points at +-(1 - 1e-8).
    std::vector<double> targets = chebyshev_lobatto(opt.cheb_points);
    targets.push_back(-1.0 + 1e-8);
    targets.push_back(1.0 - 1e-8);
    std::sort(targets.begin(), targets.end());

    std::vector<Pt> rows;
    rows.reserve(pts.size() + targets.size() + 2);
    rows.push_back({-1.0, uL, slopeL});
    std::size_t ip = 0; // next integration point to emit
    for (double xt : targets) {
        while (ip < pts.size() && pts[ip].x <= xt) {
            rows.push_back(pts[ip]);
            ++ip;
        }
        if (std::abs(xt) >= 1.0) continue; // endpoint rows handled explicitly
        if (!rows.empty() && std::abs(rows.back().x - xt) <= 1e-14) continue;
        if (xt < xLo) {
            rows.push_back({xt, uL + slopeL * (xt + 1.0), slopeL});
        } else if (xt > xHi) {
            rows.push_back({xt, uR - slopeR * (1.0 - xt), slopeR});
        } else {
            const Pt& b = pts[ip]; // first point with x > xt
            const Pt& a = pts[ip - 1];
            rows.push_back({xt,
                            hermite_value(a.x, a.u, a.f, b.x, b.u, b.f, xt),
                            hermite_deriv(a.x, a.u, a.f, b.x, b.u, b.f, xt)});
        }
    }
    while (ip < pts.size()) rows.push_back(pts[ip++]);
    rows.push_back({1.0, uR, slopeR});

    SolutionProfile p;
    p.nu = nu;
    p.c = c;
    p.branch = branch;
    p.grid.reserve(rows.size());
    p.values.reserve(rows.size());
    p.deriv.reserve(rows.size());
    for (const Pt& r : rows) {
        if (!p.grid.empty() && r.x <= p.grid.back()) continue;
        p.grid.push_back(r.x);
        p.values.push_back(r.u);
        p.deriv.push_back(r.f);
    }

    p.residual_sup = compute_residual_sup(nu, c, p.grid, p.values, p.deriv);
    if (p.residual_sup > residual_threshold(c)) {
        double worst_x = 0.0;
        for (std::size_t i = 0; i < p.grid.size(); ++i)
            if (ode_residual_at(nu, c, p.grid[i], p.values[i], p.deriv[i]) ==
                p.residual_sup)
                worst_x = p.grid[i];
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "riccati: residual %.3e above threshold %.3e at x=%.12f",
                      p.residual_sup, residual_threshold(c), worst_x);
        throw numerical_error(msg);
    }
    const double bound = 5.0 * std::sqrt(1.0 + c.norm());
    if (p.max_abs_value() > bound)
        throw numerical_error("riccati: profile exceeds the a-priori bound");
    return p;
}

void require_solvable(double nu, const Coeffs& c) {
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw region_error("riccati: nu must be positive and finite");
    if (!c.finite()) throw region_error("riccati: non-finite coefficients");
    if (!in_J(nu, c)) throw region_error("riccati: c outside J_nu");
}

PieceConfig base_config(const Coeffs& c) {
    PieceConfig cfg;
    cfg.blow_bound = 5.5 * std::sqrt(1.0 + c.norm());
    cfg.res_cap = 0.4 * residual_threshold(c);
    return cfg;
}

// Degenerate case c3 = c3_bar: upper and lower coincide with the affine
// solution. Integrate forward from -1 (value tau2) to the zero crossing and
// backward from +1 (value tau1'), then join at the matched zeros.
SolutionProfile solve_star_numeric(double nu, const Coeffs& c,
                                   BranchKind label,
                                   const SolverOptions& opt) {
    const TauValues t = tau(nu, c);
    const Rhs rhs{nu, c};
    const double eps0 = endpoint_offset(nu);
    PieceConfig cfg = base_config(c);
    cfg.stop_at_zero = true;

    const double slopeL = endpoint_derivative(nu, c, Side::Left, t.tau2);
    PieceResult fwd =
        integrate_piece(rhs, -1.0 + eps0, t.tau2 + slopeL * eps0,
                        1.0 - 1e-8, cfg, opt);
    const double slopeR = endpoint_derivative(nu, c, Side::Right, t.tau1p);
    PieceResult bwd =
        integrate_piece(rhs, 1.0 - eps0, t.tau1p - slopeR * eps0,
                        -1.0 + 1e-8, cfg, opt);
    if (!fwd.stopped_at_zero || !bwd.stopped_at_zero)
        throw numerical_error("riccati: degenerate solve found no crossing");
    if (std::abs(fwd.x_zero - bwd.x_zero) > 1e-6 * (1.0 + c.norm()))
        throw numerical_error("riccati: degenerate pieces failed to join");

    const double xm = 0.5 * (fwd.x_zero + bwd.x_zero);
    std::vector<Pt> pts;
    for (const Pt& q : fwd.pts)
        if (q.x < xm) pts.push_back(q);
    pts.push_back({xm, 0.0, rhs(xm, 0.0)});
    for (const Pt& q : bwd.pts)
        if (q.x > xm) pts.push_back(q);

    EndPolicy left{t.tau2, t.tau1, kNaN, kNaN};
    EndPolicy right{t.tau1p, t.tau2p, kNaN, kNaN};
    Branch b;
    b.kind = label;
    return assemble_profile(nu, c, b, std::move(pts), left, right, opt);
}

bool is_degenerate_c3(double nu, const Coeffs& c) {
    return c.c3 - c3_bar(c.c1, c.c2, nu) <= membership_tol(c);
}

void check_open_interval_sign(const SolutionProfile& p, int sign) {
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        if (std::abs(p.grid[i]) >= 1.0) continue;
        if (sign > 0 ? p.values[i] <= 0.0 : p.values[i] >= 0.0)
            throw numerical_error("riccati: extremal branch changed sign");
    }
}

} // namespace

// ============================================================================
// public surface
// ============================================================================

Branch Branch::interior(double xk) {
    Branch b;
    b.kind = BranchKind::Interior;
    b.x_k = xk;
    return b;
}

Branch Branch::anchored(double xa, double ua) {
    Branch b;
    b.kind = BranchKind::Anchored;
    b.x_a = xa;
    b.U_a = ua;
    return b;
}

const char* branch_kind_name(BranchKind k) {
    switch (k) {
        case BranchKind::Upper: return "upper";
        case BranchKind::Lower: return "lower";
        case BranchKind::Interior: return "interior";
        case BranchKind::Anchored: return "anchored";
        case BranchKind::ClosedFormStar: return "star";
    }
    return "?";
}

double residual_threshold(const Coeffs& c) { return 1e-6 * (1.0 + c.norm()); }

double endpoint_offset(double nu) { return std::max(1e-8, nu * nu * 1e-4); }

double endpoint_derivative(double nu, const Coeffs& c, Side side,
                           double U_end) {
    if (!(nu > 0.0)) throw region_error("endpoint_derivative: nu <= 0");
    if (std::abs(U_end) < 2.0 * nu * (1.0 - 1e-9))
        throw region_error(
            "endpoint_derivative: degenerate endpoint value (|U| < 2 nu)");
    const double xe = (side == Side::Left) ? -1.0 : 1.0;
    return (eval_poly_deriv(c, xe) - 2.0 * nu * U_end) / U_end;
}

double SolutionProfile::value_at(double x) const {
    if (!(x >= grid.front() && x <= grid.back()))
        throw region_error("profile: x outside the stored grid");
    auto it = std::lower_bound(grid.begin(), grid.end(), x);
    std::size_t i = static_cast<std::size_t>(it - grid.begin());
    if (i < grid.size() && grid[i] == x) return values[i];
    return hermite_value(grid[i - 1], values[i - 1], deriv[i - 1], grid[i],
                         values[i], deriv[i], x);
}

double SolutionProfile::deriv_at(double x) const {
    if (!(x >= grid.front() && x <= grid.back()))
        throw region_error("profile: x outside the stored grid");
    auto it = std::lower_bound(grid.begin(), grid.end(), x);
    std::size_t i = static_cast<std::size_t>(it - grid.begin());
    if (i < grid.size() && grid[i] == x) return deriv[i];
    return hermite_deriv(grid[i - 1], values[i - 1], deriv[i - 1], grid[i],
                         values[i], deriv[i], x);
}

double SolutionProfile::max_abs_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> SolutionProfile::zeros() const {
    std::vector<double> zs;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (values[i] == 0.0) {
            zs.push_back(grid[i]);
            continue;
        }
        if (values[i] * values[i + 1] < 0.0) {
            Pt a{grid[i], values[i], deriv[i]};
            Pt b{grid[i + 1], values[i + 1], deriv[i + 1]};
            zs.push_back(hermite_zero(a, b));
        }
    }
    if (!values.empty() && values.back() == 0.0) zs.push_back(grid.back());
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end(),
                         [](double a, double b) {
                             return std::abs(a - b) <= 1e-12;
                         }),
             zs.end());
    return zs;
}

int SolutionProfile::sign_changes(double drop) const {
    int flips = 0;
    int prev = 0;
    for (double v : values) {
        if (std::abs(v) <= drop) continue;
        const int s = (v > 0.0) ? 1 : -1;
        if (prev != 0 && s != prev) ++flips;
        prev = s;
    }
    return flips;
}

SolutionProfile closed_form_star(double nu, double c1, double c2,
                                 const SolverOptions& opt) {
    if (!(nu > 0.0)) throw region_error("closed_form_star: nu <= 0");
    if (nu * nu + c1 < 0.0 || nu * nu + c2 < 0.0)
        throw region_error("closed_form_star: nu^2 + c_i negative");
    const double a = nu + std::sqrt(nu * nu + c1);
    const double b = nu + std::sqrt(nu * nu + c2);
    const Coeffs c{c1, c2, c3_bar(c1, c2, nu)};

    std::vector<double> grid = chebyshev_lobatto(opt.cheb_points);
    grid.push_back(-1.0 + 1e-8);
    grid.push_back(1.0 - 1e-8);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SolutionProfile p;
    p.nu = nu;
    p.c = c;
    p.branch = Branch::star();
    p.grid = grid;
    p.values.resize(grid.size());
    p.deriv.assign(grid.size(), -(a + b));
    for (std::size_t i = 0; i < grid.size(); ++i)
        p.values[i] = a * (1.0 - grid[i]) - b * (1.0 + grid[i]);
    p.residual_sup = compute_residual_sup(nu, c, p.grid, p.values, p.deriv);
    return p;
}

SolutionProfile solve_upper(double nu, const Coeffs& c,
                            const SolverOptions& opt) {
    require_solvable(nu, c);
    if (is_degenerate_c3(nu, c))
        return solve_star_numeric(nu, c, BranchKind::Upper, opt);

    const TauValues t = tau(nu, c);
    const Rhs rhs{nu, c};
    const double eps0 = endpoint_offset(nu);
    const PieceConfig cfg = base_config(c);

    const double slopeL = endpoint_derivative(nu, c, Side::Left, t.tau2);
    PieceResult fwd = integrate_piece(rhs, -1.0 + eps0,
                                      t.tau2 + slopeL * eps0, 1.0 - 1e-8, cfg,
                                      opt);
    EndPolicy left{t.tau2, t.tau1, kNaN, kNaN};
    EndPolicy right{t.tau2p, t.tau1p, kNaN, kNaN};
    SolutionProfile p = assemble_profile(nu, c, Branch::upper(),
                                         std::move(fwd.pts), left, right, opt);
    if (in_J(0.0, c) && !c.is_zero()) check_open_interval_sign(p, +1);
    return p;
}

SolutionProfile solve_lower(double nu, const Coeffs& c,
                            const SolverOptions& opt) {
    require_solvable(nu, c);
    if (is_degenerate_c3(nu, c))
        return solve_star_numeric(nu, c, BranchKind::Lower, opt);

    const TauValues t = tau(nu, c);
    const Rhs rhs{nu, c};
    const double eps0 = endpoint_offset(nu);
    const PieceConfig cfg = base_config(c);

    const double slopeR = endpoint_derivative(nu, c, Side::Right, t.tau1p);
    PieceResult bwd = integrate_piece(rhs, 1.0 - eps0,
                                      t.tau1p - slopeR * eps0, -1.0 + 1e-8,
                                      cfg, opt);
    EndPolicy left{t.tau1, t.tau2, kNaN, kNaN};
    EndPolicy right{t.tau1p, t.tau2p, kNaN, kNaN};
    SolutionProfile p = assemble_profile(nu, c, Branch::lower(),
                                         std::move(bwd.pts), left, right, opt);
    if (in_J(0.0, c) && !c.is_zero()) check_open_interval_sign(p, -1);
    return p;
}

SolutionProfile solve_interior(double nu, const Coeffs& c, double x_k,
                               const SolverOptions& opt) {
    require_solvable(nu, c);
    if (!(x_k > -1.0 && x_k < 1.0))
        throw region_error("solve_interior: x_k outside (-1,1)");

    const TauValues t = tau(nu, c);
    const Rhs rhs{nu, c};
    PieceConfig cfg = base_config(c);
    cfg.has_window = true;
    const double w = 2.0 * opt.layer_K * nu *
                     std::max(std::abs(std::log(nu)), 1.0) *
                     (1.0 - x_k * x_k);
    cfg.wlo = x_k - w;
    cfg.whi = x_k + w;

    PieceResult rgt =
        integrate_piece(rhs, x_k, 0.0, 1.0 - 1e-8, cfg, opt);
    PieceResult lft =
        integrate_piece(rhs, x_k, 0.0, -1.0 + 1e-8, cfg, opt);

    std::vector<Pt> pts = std::move(lft.pts);
    pts.insert(pts.end(), rgt.pts.begin(), rgt.pts.end());

    EndPolicy left{t.tau1, t.tau2, kNaN, kNaN};
    EndPolicy right{t.tau2p, t.tau1p, kNaN, kNaN};
    SolutionProfile p = assemble_profile(nu, c, Branch::interior(x_k),
                                         std::move(pts), left, right, opt);
    if (p.sign_changes(1e-12 * (1.0 + c.norm())) > 1)
        throw numerical_error("solve_interior: more than one sign change");
    return p;
}

SolutionProfile solve_anchored(double nu, const Coeffs& c, double x_a,
                               double U_a, const SolverOptions& opt) {
    require_solvable(nu, c);
    if (!(x_a > -1.0 && x_a < 1.0))
        throw region_error("solve_anchored: x_a outside (-1,1)");

    const SolutionProfile up = solve_upper(nu, c, opt);
    const SolutionProfile lo = solve_lower(nu, c, opt);
    const double slack = 1e-9 * (1.0 + c.norm());
    if (U_a < lo.value_at(x_a) - slack || U_a > up.value_at(x_a) + slack)
        throw region_error("solve_anchored: U_a outside the extremal envelope");
    // Members within round-off of an extremal ARE that extremal: the envelope
    // values are reached only by the extremal branches, and integrating away
    // from them amplifies the gap like (1 -+ x)^(-sqrt(nu^2+c_i)/nu).
    if (std::abs(U_a - up.value_at(x_a)) <= slack) {
        SolutionProfile p = up;
        p.branch = Branch::anchored(x_a, U_a);
        return p;
    }
    if (std::abs(U_a - lo.value_at(x_a)) <= slack) {
        SolutionProfile p = lo;
        p.branch = Branch::anchored(x_a, U_a);
        return p;
    }

    const TauValues t = tau(nu, c);
    const Rhs rhs{nu, c};
    const PieceConfig cfg = base_config(c);

    PieceResult rgt = integrate_piece(rhs, x_a, U_a, 1.0 - 1e-8, cfg, opt);
    PieceResult lft = integrate_piece(rhs, x_a, U_a, -1.0 + 1e-8, cfg, opt);
    std::vector<Pt> pts = std::move(lft.pts);
    pts.insert(pts.end(), rgt.pts.begin(), rgt.pts.end());

    EndPolicy left{kNaN, kNaN, t.tau1, t.tau2};
    EndPolicy right{kNaN, kNaN, t.tau1p, t.tau2p};
    return assemble_profile(nu, c, Branch::anchored(x_a, U_a), std::move(pts),
                            left, right, opt);
}

double residual(const SolutionProfile& p) {
    return compute_residual_sup(p.nu, p.c, p.grid, p.values, p.deriv);
}

SolutionProfile rescale_by_norm(const SolutionProfile& p, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("rescale_by_norm: lambda must be > 0");
    const double s = std::sqrt(lambda);
    SolutionProfile q = p;
    q.nu = p.nu / s;
    q.c = Coeffs{p.c.c1 / lambda, p.c.c2 / lambda, p.c.c3 / lambda};
    for (double& v : q.values) v /= s;
    for (double& d : q.deriv) d /= s;
    if (q.branch.kind == BranchKind::Anchored) q.branch.U_a /= s;
    q.residual_sup = compute_residual_sup(q.nu, q.c, q.grid, q.values, q.deriv);
    return q;
}

} // namespace visclimit
