#pragma once

// Shared test helpers: the brute-force polynomial-minimum oracle, common
// evaluation grids, and deterministic random draws.

#include <cmath>
#include <random>
#include <vector>

#include "visclimit/grids.hpp"
#include "visclimit/params.hpp"
#include "visclimit/riccati.hpp"

namespace vtest {

// Independent region oracle: minimum of P_c over an n-point uniform grid.
// Kept free of in_J / poly_min so the region predicates are checked against
// a brute-force route.
inline double grid_min_poly(const visclimit::Coeffs& c, int n,
                            double a = -1.0, double b = 1.0) {
    double m = visclimit::eval_poly(c, a);
    for (int i = 1; i < n; ++i) {
        const double x = a + (b - a) * i / (n - 1);
        m = std::min(m, visclimit::eval_poly(c, x));
    }
    return m;
}

inline std::mt19937_64 rng(std::uint64_t seed) {
    return std::mt19937_64{seed};
}

// Chebyshev nodes shared by every assembled profile grid (subsampled).
inline std::vector<double> common_nodes(int stride = 7) {
    std::vector<double> out;
    const std::vector<double> all = visclimit::chebyshev_lobatto(2001);
    for (std::size_t i = 0; i < all.size(); i += stride) out.push_back(all[i]);
    return out;
}

inline double sup_profile_diff(const visclimit::SolutionProfile& a,
                               const visclimit::SolutionProfile& b,
                               double lo = -1.0, double hi = 1.0,
                               int stride = 7) {
    double sup = 0.0;
    for (double x : common_nodes(stride)) {
        if (x < lo || x > hi) continue;
        sup = std::max(sup, std::abs(a.value_at(x) - b.value_at(x)));
    }
    return sup;
}

} // namespace vtest
