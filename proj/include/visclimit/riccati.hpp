#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "visclimit/params.hpp"

namespace visclimit {

// ============================================================================
// Solution profiles of the reduced viscous equation
//     nu (1-x^2) U' + 2 nu x U + (1/2) U^2 = P_c(x),   -1 < x < 1.
// ============================================================================

enum class BranchKind { Upper, Lower, Interior, Anchored, ClosedFormStar };

struct Branch {
    BranchKind kind = BranchKind::Upper;
    double x_k = std::numeric_limits<double>::quiet_NaN(); // Interior
    double x_a = std::numeric_limits<double>::quiet_NaN(); // Anchored
    double U_a = std::numeric_limits<double>::quiet_NaN(); // Anchored

    static Branch upper() { return {BranchKind::Upper}; }
    static Branch lower() { return {BranchKind::Lower}; }
    static Branch interior(double xk);
    static Branch anchored(double xa, double ua);
    static Branch star() { return {BranchKind::ClosedFormStar}; }
};

const char* branch_kind_name(BranchKind k);

/// A sampled solution on a strictly increasing grid in [-1,1]. The grid is
/// the union of a Chebyshev-Lobatto target set, every accepted integrator
/// step, and endpoint extrapolants at x = +-1. values/deriv are (U, dU/dx)
/// per grid point; between grid points a cubic Hermite interpolant applies.
struct SolutionProfile {
    double nu = 0.0;
    Coeffs c;
    Branch branch;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> deriv;
    double residual_sup = 0.0;

    double value_at(double x) const;
    double deriv_at(double x) const;
    double max_abs_value() const;

    /// Zeros of the sampled solution, Hermite-refined.
    std::vector<double> zeros() const;

    /// Sign changes between consecutive grid values (|U| <= drop treated as
    /// zero and skipped).
    int sign_changes(double drop = 1e-13) const;
};

struct SolverOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    int cheb_points = 2001; // Chebyshev-Lobatto target grid size
    double layer_K = 4.0;   // window factor for the interior-layer step cap
    std::size_t max_steps = 20'000'000;
};

enum class Side { Left, Right };

/// Residual acceptance threshold 1e-6*(1+|c|).
double residual_threshold(const Coeffs& c);

/// Launch offset from the singular endpoints: max(1e-8, nu^2 * 1e-4).
double endpoint_offset(double nu);

/// One-sided derivative at a singular endpoint from the L'Hopital balance
///   U'(-1) = (P'(-1) - 2 nu U(-1)) / U(-1),
///   U'(+1) = (P'(+1) - 2 nu U(+1)) / U(+1).
/// Throws region_error when |U_end| < 2 nu (1 - 1e-9): those endpoint values
/// admit no smooth expansion.
double endpoint_derivative(double nu, const Coeffs& c, Side side, double U_end);

/// The degenerate closed-form solution at c3 = c3_bar(c1,c2;nu):
///   U*(x) = (nu+sqrt(nu^2+c1))(1-x) - (nu+sqrt(nu^2+c2))(1+x).
SolutionProfile closed_form_star(double nu, double c1, double c2,
                                 const SolverOptions& opt = {});

/// Upper extremal solution: U+(-1) = tau2, integrated in the forward-stable
/// direction; strictly positive on (-1,1) when c in J_0 \ {0}.
SolutionProfile solve_upper(double nu, const Coeffs& c,
                            const SolverOptions& opt = {});

/// Lower extremal solution: U-(+1) = tau1', integrated backward.
SolutionProfile solve_lower(double nu, const Coeffs& c,
                            const SolverOptions& opt = {});

/// The solution with prescribed zero U(x_k) = 0, integrated outward from x_k
/// in both directions.
SolutionProfile solve_interior(double nu, const Coeffs& c, double x_k,
                               const SolverOptions& opt = {});

/// The foliation member through (x_a, U_a). Requires U-(x_a) <= U_a <=
/// U+(x_a); throws region_error otherwise (bracket error).
SolutionProfile solve_anchored(double nu, const Coeffs& c, double x_a,
                               double U_a, const SolverOptions& opt = {});

/// Recomputes sup |nu(1-x^2)U' + 2 nu x U + U^2/2 - P_c| over the stored grid.
double residual(const SolutionProfile& p);

/// Similarity rescaling: nu -> nu/sqrt(lambda), c -> c/lambda,
/// U -> U/sqrt(lambda) maps solutions to solutions.
SolutionProfile rescale_by_norm(const SolutionProfile& p, double lambda);

} // namespace visclimit
