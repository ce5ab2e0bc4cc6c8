#include "visclimit/grids.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace visclimit {

std::vector<double> chebyshev_lobatto(int n) {
    if (n < 2) throw std::invalid_argument("chebyshev_lobatto: n < 2");
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j)
        x[j] = -std::cos(std::numbers::pi * j / (n - 1));
    x.front() = -1.0;
    x.back() = 1.0;
    return x;
}

std::vector<double> log_spaced(double start, double stop, int count) {
    if (count < 1 || !(start > 0.0) || !(stop > 0.0))
        throw std::invalid_argument("log_spaced: need count >= 1 and positive bounds");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = start;
        return v;
    }
    const double la = std::log(start), lb = std::log(stop);
    for (int i = 0; i < count; ++i)
        v[i] = std::exp(la + (lb - la) * i / (count - 1));
    v.front() = start;
    v.back() = stop;
    return v;
}

} // namespace visclimit
