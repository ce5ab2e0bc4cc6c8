#pragma once

#include <vector>

namespace visclimit {

/// n Chebyshev-Lobatto nodes on [-1,1], ascending, endpoints included.
std::vector<double> chebyshev_lobatto(int n);

/// count logarithmically spaced values from start to stop (inclusive).
std::vector<double> log_spaced(double start, double stop, int count);

} // namespace visclimit
