#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "visclimit/layers.hpp"
#include "visclimit/params.hpp"
#include "visclimit/riccati.hpp"
#include "visclimit/runtime.hpp"

namespace visclimit {

// ============================================================================
// Vanishing-viscosity sweep harness: sup-norm error curves, log-log rate
// fits against the predicted exponent alpha(c), Table-style convergence
// checks, and the non-convergence counterexample search.
// ============================================================================

enum class ErrorMetric { SupU, SupHalfUSqMinusP };

struct Reference {
    enum class Kind { EulerPlus, EulerMinus, Glued, Layer } kind =
        Kind::EulerPlus;
    double x0 = 0.0; // Glued
    double K = 4.0;  // Layer

    static Reference euler_plus() { return {Kind::EulerPlus, 0, 4}; }
    static Reference euler_minus() { return {Kind::EulerMinus, 0, 4}; }
    static Reference glued(double x0) { return {Kind::Glued, x0, 4}; }
    static Reference layer(double K) { return {Kind::Layer, 0, K}; }
};

/// Union of closed intervals inside [-1,1].
using Window = std::vector<std::pair<double, double>>;

Window full_window();

/// sup over grid-points-in-window of |U - ref| (SupU) or |U^2/2 - P_c|
/// (SupHalfUSqMinusP). Throws std::invalid_argument on an empty window.
double sup_error(const SolutionProfile& p, const Reference& ref,
                 ErrorMetric metric, const Window& window);

/// Least-squares line through (ln nu, ln err); points kept sorted by
/// decreasing nu.
struct RateFit {
    std::vector<std::pair<double, double>> points; // (nu, err)
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
RateFit fit_rate(std::span<const std::pair<double, double>> nu_err);

struct SweepConfig {
    Coeffs c;
    Branch branch;
    Reference ref;
    ErrorMetric metric = ErrorMetric::SupU;
    Window window;
    std::vector<double> nu_grid;
    // Prediction override; defaults to classify(c).alpha. The windowed
    // interior-regime checks use 1.
    std::optional<double> predicted_alpha;
    Exec exec = Exec::OpenMP;
    SolverOptions solver;
};

struct SweepReport {
    Coeffs c;
    Branch branch;
    Reference ref;
    ErrorMetric metric;
    Window window;
    RateFit fit;
    double predicted_alpha = 0.0;
    bool verdict = false;        // |slope - alpha| <= 0.15
    bool paper_faithful = false; // slope >= alpha - 0.15 (one-sided bound)
};

/// Per-nu errors for the sweep configuration. The OpenMP and Serial paths
/// produce bit-identical vectors.
std::vector<double> sweep_errors(const SweepConfig& cfg);

/// Full sweep: solves per nu, fits the rate, compares against the predicted
/// exponent. Requires >= 4 nu points spanning >= 1.5 decades.
SweepReport rate_sweep(const SweepConfig& cfg);

/// Empirical check of the convergence table cells that hold for fixed
/// c in J_0: error at the smallest nu below half the error at the largest,
/// and below 0.1. Keys "Uplus" / "Uminus".
std::map<std::string, bool> table1_check(const Coeffs& c,
                                         std::span<const double> nu_grid,
                                         const SolverOptions& opt = {});

/// Non-convergence witness for the double-root regime with c2 > 0: for each
/// nu, bisects delta > 0 so that the upper solution for
/// (c1, c2, c3_bar(nu)+delta) has a zero inside (1-eps, 1). At the zero,
/// |U^2/2 - P| equals P itself, which stays bounded away from 0.
struct NonconvWitness {
    double nu;
    double c3;            // = c3_bar + delta
    double zero_location; // in (1-eps, 1)
    double gap;           // |U^2/2 - P_{c_k}| at the zero
    double pc_at_zero;    // P at the zero for the limit c3 = c3_star
};
std::vector<NonconvWitness> nonconv_search(double c1, double c2, double eps,
                                           std::span<const double> nu_grid,
                                           const SolverOptions& opt = {});

} // namespace visclimit
