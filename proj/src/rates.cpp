#include "visclimit/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "visclimit/errors.hpp"
#include "visclimit/euler.hpp"

namespace visclimit {

namespace {

double reference_value(const Reference& ref, const Coeffs& c, double x) {
    switch (ref.kind) {
        case Reference::Kind::EulerPlus:
            return euler_value(c, EulerSpec::plus(), x);
        case Reference::Kind::EulerMinus:
            return euler_value(c, EulerSpec::minus(), x);
        case Reference::Kind::Glued:
            return euler_value(c, EulerSpec::glued_at(ref.x0), x);
        case Reference::Kind::Layer:
            return 0.0; // handled by the caller through a LayerSpec
    }
    return 0.0;
}

bool in_window(const Window& w, double x) {
    for (const auto& [a, b] : w)
        if (x >= a && x <= b) return true;
    return false;
}

SolutionProfile solve_branch(double nu, const Coeffs& c, const Branch& b,
                             const SolverOptions& opt) {
    switch (b.kind) {
        case BranchKind::Upper: return solve_upper(nu, c, opt);
        case BranchKind::Lower: return solve_lower(nu, c, opt);
        case BranchKind::Interior: return solve_interior(nu, c, b.x_k, opt);
        case BranchKind::Anchored:
            return solve_anchored(nu, c, b.x_a, b.U_a, opt);
        case BranchKind::ClosedFormStar:
            return closed_form_star(nu, c.c1, c.c2, opt);
    }
    throw std::invalid_argument("solve_branch: bad branch");
}

} // namespace

Window full_window() { return {{-1.0, 1.0}}; }

double sup_error(const SolutionProfile& p, const Reference& ref,
                 ErrorMetric metric, const Window& window) {
    if (window.empty())
        throw std::invalid_argument("sup_error: empty window");
    std::optional<LayerSpec> layer;
    if (ref.kind == Reference::Kind::Layer) {
        if (p.branch.kind != BranchKind::Interior)
            throw std::invalid_argument(
                "sup_error: layer reference needs an interior branch");
        layer = LayerSpec::make(p.nu, p.c, p.branch.x_k, ref.K);
    }
    double sup = -1.0;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        const double x = p.grid[i];
        if (!in_window(window, x)) continue;
        double e;
        if (metric == ErrorMetric::SupHalfUSqMinusP) {
            e = std::abs(0.5 * p.values[i] * p.values[i] - eval_poly(p.c, x));
        } else if (layer) {
            e = std::abs(p.values[i] - matched_profile(*layer, x));
        } else {
            e = std::abs(p.values[i] - reference_value(ref, p.c, x));
        }
        sup = std::max(sup, e);
    }
    if (sup < 0.0)
        throw std::invalid_argument("sup_error: window contains no grid point");
    return sup;
}

RateFit fit_rate(std::span<const std::pair<double, double>> nu_err) {
    if (nu_err.size() < 2)
        throw std::invalid_argument("fit_rate: need at least two points");
    RateFit fit;
    fit.points.assign(nu_err.begin(), nu_err.end());
    std::sort(fit.points.begin(), fit.points.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    const std::size_t n = fit.points.size();
    double sx = 0, sy = 0;
    for (const auto& [nu, err] : fit.points) {
        if (!(err > 0.0)) throw numerical_error("fit_rate: nonpositive error");
        sx += std::log(nu);
        sy += std::log(err);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [nu, err] : fit.points) {
        const double dx = std::log(nu) - mx, dy = std::log(err) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_rate: degenerate nu grid");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssres = 0.0;
    for (const auto& [nu, err] : fit.points) {
        const double r = std::log(err) - (fit.intercept + fit.slope * std::log(nu));
        ssres += r * r;
    }
    fit.r2 = (syy > 0.0) ? std::max(0.0, 1.0 - ssres / syy) : 1.0;
    return fit;
}

std::vector<double> sweep_errors(const SweepConfig& cfg) {
    const std::size_t n = cfg.nu_grid.size();
    std::vector<double> errs(n);
    if (cfg.exec == Exec::OpenMP) {
        const int nt = thread_cap();
        std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
        for (long i = 0; i < static_cast<long>(n); ++i) {
            try {
                const SolutionProfile p = solve_branch(
                    cfg.nu_grid[static_cast<std::size_t>(i)], cfg.c,
                    cfg.branch, cfg.solver);
                errs[static_cast<std::size_t>(i)] =
                    sup_error(p, cfg.ref, cfg.metric, cfg.window);
            } catch (...) {
#pragma omp critical(visclimit_sweep_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const SolutionProfile p =
                solve_branch(cfg.nu_grid[i], cfg.c, cfg.branch, cfg.solver);
            errs[i] = sup_error(p, cfg.ref, cfg.metric, cfg.window);
        }
    }
    return errs;
}

SweepReport rate_sweep(const SweepConfig& cfg) {
    if (cfg.nu_grid.size() < 4)
        throw std::invalid_argument("rate_sweep: need >= 4 nu points");
    const auto [lo, hi] =
        std::minmax_element(cfg.nu_grid.begin(), cfg.nu_grid.end());
    if (std::log10(*hi / *lo) < 1.5)
        throw std::invalid_argument("rate_sweep: nu grid spans < 1.5 decades");

    const std::vector<double> errs = sweep_errors(cfg);
    std::vector<std::pair<double, double>> pts(cfg.nu_grid.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        pts[i] = {cfg.nu_grid[i], errs[i]};

    SweepReport rep;
    rep.c = cfg.c;
    rep.branch = cfg.branch;
    rep.ref = cfg.ref;
    rep.metric = cfg.metric;
    rep.window = cfg.window;
    rep.fit = fit_rate(pts);
    if (cfg.predicted_alpha) {
        rep.predicted_alpha = *cfg.predicted_alpha;
    } else {
        const Regime reg = classify(cfg.c);
        if (!reg.alpha)
            throw region_error("rate_sweep: no predicted exponent for c outside J_0");
        rep.predicted_alpha = *reg.alpha;
    }
    rep.verdict = std::abs(rep.fit.slope - rep.predicted_alpha) <= 0.15;
    rep.paper_faithful = rep.fit.slope >= rep.predicted_alpha - 0.15;
    return rep;
}

std::map<std::string, bool> table1_check(const Coeffs& c,
                                         std::span<const double> nu_grid,
                                         const SolverOptions& opt) {
    if (c.is_zero() || !in_J(0.0, c))
        throw region_error("table1_check: c must lie in J_0 \\ {0}");
    if (nu_grid.size() < 2)
        throw std::invalid_argument("table1_check: need >= 2 nu points");
    std::vector<double> nus(nu_grid.begin(), nu_grid.end());
    std::sort(nus.begin(), nus.end(), std::greater<>());

    std::map<std::string, bool> out;
    for (const char* key : {"Uplus", "Uminus"}) {
        const bool upper = std::string(key) == "Uplus";
        std::vector<double> errs(nus.size());
        for (std::size_t i = 0; i < nus.size(); ++i) {
            const SolutionProfile p = upper ? solve_upper(nus[i], c, opt)
                                            : solve_lower(nus[i], c, opt);
            errs[i] = sup_error(p,
                                upper ? Reference::euler_plus()
                                      : Reference::euler_minus(),
                                ErrorMetric::SupU, full_window());
        }
        out[key] = errs.back() < 0.5 * errs.front() && errs.back() < 0.1;
    }
    return out;
}

std::vector<NonconvWitness> nonconv_search(double c1, double c2, double eps,
                                           std::span<const double> nu_grid,
                                           const SolverOptions& opt) {
    if (!(c1 >= 0.0) || !(c2 > 0.0))
        throw region_error("nonconv_search: needs c1 >= 0 and c2 > 0");
    if (!(eps > 0.0 && eps < 0.25))
        throw region_error("nonconv_search: eps outside (0, 1/4)");

    const double cs = c3_star(c1, c2);
    std::vector<NonconvWitness> out;
    out.reserve(nu_grid.size());
    for (double nu : nu_grid) {
        const double cbar = c3_bar(c1, c2, nu);
        const double delta_star = cs - cbar;
        // Outcome of a trial delta: the rightmost zero of the computed upper
        // solution. Zeros move left as delta grows; traversal failures (the
        // dip is too deep to cross) behave like a zero at x = 1.
        auto last_zero = [&](double delta) -> double {
            const Coeffs ck{c1, c2, cbar + delta};
            try {
                const SolutionProfile p = solve_upper(nu, ck, opt);
                const std::vector<double> zs = p.zeros();
                if (zs.empty()) return -2.0; // no zero: delta too large
                return zs.back();
            } catch (const numerical_error&) {
                return 1.0;
            }
        };

        double lo = 0.0, hi = delta_star;
        if (last_zero(hi) > -1.5)
            throw numerical_error(
                "nonconv_search: upper bracket endpoint still has a zero");
        bool found = false;
        for (int it = 0; it < 200 && !found; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double z = last_zero(mid);
            if (z > 1.0 - eps && z < 1.0) {
                const Coeffs ck{c1, c2, cbar + mid};
                const double gap = eval_poly(ck, z); // |U^2/2 - P| at U = 0
                NonconvWitness w;
                w.nu = nu;
                w.c3 = ck.c3;
                w.zero_location = z;
                w.gap = gap;
                w.pc_at_zero = eval_poly(Coeffs{c1, c2, cs}, z);
                out.push_back(w);
                found = true;
            } else if (z >= 1.0) {
                lo = mid; // traversal failure: grow delta
            } else {
                hi = mid; // zero too far left or absent: shrink delta
            }
        }
        if (!found)
            throw numerical_error(
                "nonconv_search: bisection failed to place a zero in (1-eps,1)");
    }
    return out;
}

} // namespace visclimit
