#pragma once

#include <optional>

#include "visclimit/params.hpp"
#include "visclimit/riccati.hpp"

namespace visclimit {

// ============================================================================
// Transition-layer asymptotics: the tanh core around a zero x_k and the
// three-piece matched profile (-sqrt(2P), tanh core, +sqrt(2P)).
// ============================================================================

struct LayerSpec {
    double nu = 0.0;
    Coeffs c;
    double x_k = 0.0;
    double K = 4.0;
    double window_halfwidth = 0.0; // K * nu * |ln nu| * (1 - x_k^2)
    double amplitude = 0.0;        // sqrt(2 P_c(x_k)), must be > 0
    double core_scale = 0.0;       // amplitude / (2 (1-x_k^2) nu)

    /// Builds the spec; K defaults to default_layer_K. Requires nu > 0,
    /// x_k in (-1,1) and P_c(x_k) > 0.
    static LayerSpec make(double nu, const Coeffs& c, double x_k,
                          std::optional<double> K = std::nullopt);
};

/// |ln nu| clamped to >= 1 so windows never degenerate for nu >= 1/e.
double clamped_abs_log(double nu);

/// Smallest K with K*sqrt(2 min_window P_c) >= 2, floored at 4.
double default_layer_K(double nu, const Coeffs& c, double x_k);

/// w(x) = amplitude * tanh(core_scale * (x - x_k)); satisfies
/// nu (1-x_k^2) w' + w^2/2 = P_c(x_k) exactly.
double tanh_core(const LayerSpec& spec, double x);

/// The matched three-piece profile. Requires c in J_0.
double matched_profile(const LayerSpec& spec, double x);

/// sup over p.grid of |U - matched_profile|. The profile must be an Interior
/// branch with the same (nu, c, x_k) as the spec.
double layer_error(const SolutionProfile& p, const LayerSpec& spec);

} // namespace visclimit
