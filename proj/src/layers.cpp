#include "visclimit/layers.hpp"

#include <algorithm>
#include <cmath>

#include "visclimit/errors.hpp"
#include "visclimit/euler.hpp"

namespace visclimit {

double clamped_abs_log(double nu) {
    return std::max(std::abs(std::log(nu)), 1.0);
}

namespace {

// min of P_c over [a,b]: endpoint values plus the interior critical point.
double poly_min_on(const Coeffs& c, double a, double b) {
    double m = std::min(eval_poly(c, a), eval_poly(c, b));
    if (c.c3 != 0.0) {
        const double xc = (c.c2 - c.c1) / (2.0 * c.c3);
        if (xc > a && xc < b) m = std::min(m, eval_poly(c, xc));
    }
    return m;
}

} // namespace

double default_layer_K(double nu, const Coeffs& c, double x_k) {
    // Smallest K with K sqrt(2 min_window P_c) >= 2, floored at 4. The window
    // depends on K, so iterate the fixed point a few times.
    double K = 4.0;
    for (int it = 0; it < 8; ++it) {
        const double w =
            K * nu * clamped_abs_log(nu) * (1.0 - x_k * x_k);
        const double a = std::max(-1.0, x_k - w);
        const double b = std::min(1.0, x_k + w);
        const double minP = poly_min_on(c, a, b);
        double Knew = 4.0;
        if (minP > 0.0)
            Knew = std::max(4.0, 2.0 / std::sqrt(2.0 * minP));
        if (std::abs(Knew - K) <= 1e-12 * K) return Knew;
        K = Knew;
    }
    return K;
}

LayerSpec LayerSpec::make(double nu, const Coeffs& c, double x_k,
                          std::optional<double> K) {
    if (!(nu > 0.0)) throw region_error("LayerSpec: nu must be positive");
    if (!(x_k > -1.0 && x_k < 1.0))
        throw region_error("LayerSpec: x_k outside (-1,1)");
    const double P = eval_poly(c, x_k);
    if (!(P > 1e-12 * (1.0 + c.norm())))
        throw region_error("LayerSpec: P_c(x_k) must be positive");
    LayerSpec s;
    s.nu = nu;
    s.c = c;
    s.x_k = x_k;
    s.K = K ? *K : default_layer_K(nu, c, x_k);
    s.window_halfwidth =
        s.K * nu * clamped_abs_log(nu) * (1.0 - x_k * x_k);
    s.amplitude = std::sqrt(2.0 * P);
    s.core_scale = s.amplitude / (2.0 * (1.0 - x_k * x_k) * nu);
    return s;
}

double tanh_core(const LayerSpec& spec, double x) {
    return spec.amplitude * std::tanh(spec.core_scale * (x - spec.x_k));
}

double matched_profile(const LayerSpec& spec, double x) {
    if (!in_J(0.0, spec.c))
        throw region_error("matched_profile: P_c negative on [-1,1]");
    const double d = x - spec.x_k;
    if (std::abs(d) <= spec.window_halfwidth) return tanh_core(spec, x);
    const double v = euler_value(spec.c, EulerSpec::plus(), x);
    return d < 0 ? -v : v;
}

double layer_error(const SolutionProfile& p, const LayerSpec& spec) {
    if (p.branch.kind != BranchKind::Interior)
        throw std::invalid_argument("layer_error: profile is not an interior branch");
    const double tol = 1e-12 * (1.0 + spec.c.norm());
    if (std::abs(p.branch.x_k - spec.x_k) > tol || p.nu != spec.nu ||
        !(p.c == spec.c))
        throw std::invalid_argument("layer_error: profile/spec mismatch on (nu,c,x_k)");
    double e = 0.0;
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        e = std::max(e, std::abs(p.values[i] - matched_profile(spec, p.grid[i])));
    return e;
}

} // namespace visclimit
