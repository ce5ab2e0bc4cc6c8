// Benchmark of the OpenMP kernels against their serial references:
//   1. region-membership brute-force scan (grid minima of P_c),
//   2. per-nu sweep of upper-branch solves,
//   3. stream-function raster + contour extraction.
// Prints wall times, speedup, and the max discrepancy (must be 0).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "visclimit/fields.hpp"
#include "visclimit/grids.hpp"
#include "visclimit/params.hpp"
#include "visclimit/rates.hpp"
#include "visclimit/riccati.hpp"
#include "visclimit/runtime.hpp"

using namespace visclimit;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0)
        .count();
}

// grid minimum of P_c over n points; the brute-force region oracle
double grid_min(const Coeffs& c, int n) {
    double m = eval_poly(c, -1.0);
    for (int i = 1; i < n; ++i) {
        const double x = -1.0 + 2.0 * i / (n - 1);
        m = std::min(m, eval_poly(c, x));
    }
    return m;
}

void bench_region_scan() {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    const int ncand = 4000, ngrid = 4001;
    std::vector<Coeffs> cand(ncand);
    for (auto& c : cand) c = Coeffs{dist(rng), dist(rng), dist(rng)};

    std::vector<double> serial(ncand), parallel(ncand);
    auto t0 = Clock::now();
    for (int i = 0; i < ncand; ++i) serial[i] = grid_min(cand[i], ngrid);
    const double ts = ms_since(t0);

    t0 = Clock::now();
    const int nt = thread_cap();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < ncand; ++i) parallel[i] = grid_min(cand[i], ngrid);
    const double tp = ms_since(t0);

    double dmax = 0;
    for (int i = 0; i < ncand; ++i)
        dmax = std::max(dmax, std::abs(serial[i] - parallel[i]));
    std::printf("%-22s %10.1f ms %10.1f ms %7.2fx  maxdiff %.1e\n",
                "region-scan", ts, tp, ts / tp, dmax);
}

void bench_sweep() {
    SweepConfig cfg;
    cfg.c = Coeffs{1.0, 1.0, 0.0};
    cfg.branch = Branch::upper();
    cfg.ref = Reference::euler_plus();
    cfg.metric = ErrorMetric::SupU;
    cfg.window = full_window();
    cfg.nu_grid = log_spaced(1e-1, 1e-3, 8);

    cfg.exec = Exec::Serial;
    auto t0 = Clock::now();
    const std::vector<double> se = sweep_errors(cfg);
    const double ts = ms_since(t0);

    cfg.exec = Exec::OpenMP;
    t0 = Clock::now();
    const std::vector<double> pe = sweep_errors(cfg);
    const double tp = ms_since(t0);

    double dmax = 0;
    for (std::size_t i = 0; i < se.size(); ++i)
        dmax = std::max(dmax, std::abs(se[i] - pe[i]));
    std::printf("%-22s %10.1f ms %10.1f ms %7.2fx  maxdiff %.1e\n",
                "nu-sweep (8 solves)", ts, tp, ts / tp, dmax);
}

void bench_raster() {
    const SolutionProfile p =
        solve_interior(0.05, coeffs_from_monomial(8.0 / 9, -8.0 / 3, 2.0), 0.0);
    const Bbox bbox{0.05, 2.0, -2.0, 2.0};
    const std::vector<double> levels = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5};

    auto t0 = Clock::now();
    const StreamlineSet ss = streamlines(p, levels, bbox, 400, Exec::Serial);
    const double ts = ms_since(t0);
    t0 = Clock::now();
    const StreamlineSet sp = streamlines(p, levels, bbox, 400, Exec::OpenMP);
    const double tp = ms_since(t0);

    double dmax = 0;
    for (std::size_t li = 0; li < ss.polylines.size(); ++li) {
        if (ss.polylines[li].size() != sp.polylines[li].size()) dmax = 1.0;
    }
    std::printf("%-22s %10.1f ms %10.1f ms %7.2fx  maxdiff %.1e\n",
                "psi raster+contours", ts, tp, ts / tp, dmax);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d (cap %d)\n", omp_get_max_threads(), thread_cap());
#else
    std::printf("built without OpenMP\n");
#endif
    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp",
                "speedup");
    bench_region_scan();
    bench_sweep();
    bench_raster();
    return 0;
}
