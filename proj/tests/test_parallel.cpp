#include <doctest.h>

#include <cstdlib>

#include "support.hpp"
#include "visclimit/fields.hpp"
#include "visclimit/grids.hpp"
#include "visclimit/rates.hpp"
#include "visclimit/runtime.hpp"

using namespace visclimit;

TEST_CASE("sweep kernels are bit-identical across execution policies") {
    SweepConfig cfg;
    cfg.c = Coeffs{1, 1, 0};
    cfg.branch = Branch::upper();
    cfg.ref = Reference::euler_plus();
    cfg.metric = ErrorMetric::SupU;
    cfg.window = full_window();
    cfg.nu_grid = log_spaced(1e-1, 1e-3, 6);

    cfg.exec = Exec::Serial;
    const std::vector<double> a = sweep_errors(cfg);
    cfg.exec = Exec::OpenMP;
    const std::vector<double> b = sweep_errors(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("sweep reports are deterministic across reruns") {
    SweepConfig cfg;
    cfg.c = Coeffs{1, 1, 0};
    cfg.branch = Branch::interior(0.2);
    cfg.ref = Reference::glued(0.2);
    cfg.metric = ErrorMetric::SupU;
    cfg.window = Window{{-1.0, 0.0}, {0.4, 1.0}};
    cfg.nu_grid = log_spaced(1e-1, 1e-3, 4);
    cfg.predicted_alpha = 1.0;
    const SweepReport r1 = rate_sweep(cfg);
    const SweepReport r2 = rate_sweep(cfg);
    CHECK(r1.fit.slope == r2.fit.slope);
    CHECK(r1.fit.intercept == r2.fit.intercept);
    CHECK(r1.fit.points == r2.fit.points);
}

TEST_CASE("raster contours are identical across execution policies") {
    const SolutionProfile p = solve_interior(0.05, Coeffs{1, 1, 0}, 0.0);
    const Bbox bbox{0.05, 2.0, -2.0, 2.0};
    const std::vector<double> levels = {-0.8, 0.0, 0.8};
    const StreamlineSet a = streamlines(p, levels, bbox, 150, Exec::Serial);
    const StreamlineSet b = streamlines(p, levels, bbox, 150, Exec::OpenMP);
    REQUIRE(a.polylines.size() == b.polylines.size());
    for (std::size_t li = 0; li < a.polylines.size(); ++li) {
        REQUIRE(a.polylines[li].size() == b.polylines[li].size());
        for (std::size_t k = 0; k < a.polylines[li].size(); ++k)
            CHECK(a.polylines[li][k] == b.polylines[li][k]);
    }
}

TEST_CASE("thread cap honors the environment variable") {
    const int base = thread_cap();
    CHECK(base >= 1);
    setenv("VISCLIMIT_THREADS", "1", 1);
    CHECK(thread_cap() == 1);
    unsetenv("VISCLIMIT_THREADS");
    CHECK(thread_cap() == base);
}
