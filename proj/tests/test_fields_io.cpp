#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "support.hpp"
#include "visclimit/errors.hpp"
#include "visclimit/euler.hpp"
#include "visclimit/fields.hpp"
#include "visclimit/io.hpp"

using namespace visclimit;

namespace {
constexpr double kPi = std::numbers::pi;
const Coeffs kSec7 = coeffs_from_monomial(8.0 / 9.0, -8.0 / 3.0, 2.0);

std::filesystem::path tmp_dir() {
    const auto d =
        std::filesystem::temp_directory_path() / "visclimit_test_out";
    std::filesystem::create_directories(d);
    return d;
}
} // namespace

TEST_CASE("velocity from the affine profile") {
    // U = -0.4 x: u_r(pi/2, 1) = U'(0) = -0.4, u_theta = U(0) = 0
    const SolutionProfile p = closed_form_star(0.1, 0.0, 0.0);
    const auto [ur, ut] = velocity_from_profile(p, kPi / 2, 1.0);
    CHECK(ur == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(std::abs(ut) <= 1e-12);

    // homogeneity
    const auto [ur2, ut2] = velocity_from_profile(p, 1.0, 2.0);
    const auto [ur1, ut1] = velocity_from_profile(p, 1.0, 1.0);
    CHECK(ur2 == doctest::Approx(ur1 / 2.0).epsilon(1e-14));
    CHECK(ut2 == doctest::Approx(ut1 / 2.0).epsilon(1e-14));

    CHECK_THROWS_AS(velocity_from_profile(p, 1e-4, 1.0), region_error);
    CHECK_THROWS_AS(velocity_from_profile(p, 1.0, 0.0), region_error);
}

TEST_CASE("velocity reproduces the inviscid field on euler samples") {
    const Coeffs c{1, 1, 0};
    SolutionProfile p;
    p.nu = 1e-3;
    p.c = c;
    p.branch = Branch::upper();
    p.grid = chebyshev_lobatto(2001);
    p.values.resize(p.grid.size());
    p.deriv.resize(p.grid.size());
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        const double x = p.grid[i];
        p.values[i] = euler_value(c, EulerSpec::plus(), x);
        p.deriv[i] = eval_poly_deriv(c, x) /
                     std::sqrt(2.0 * std::max(eval_poly(c, x), 1e-300));
    }
    for (double th = 0.3; th < 2.9; th += 0.13) {
        const auto [ur, ut] = velocity_from_profile(p, th, 1.3);
        const EulerFieldSample f = euler_field(c, EulerSpec::plus(), th, 1.3);
        CHECK(std::abs(ut - f.v_theta) <= 1e-6);
        CHECK(std::abs(ur - f.v_r) <= 1e-6);
    }
}

TEST_CASE("pressure behaviors") {
    const Coeffs c{1, 1, 0};

    SUBCASE("homogeneity") {
        const SolutionProfile p = solve_upper(0.05, c);
        const double p1 = pressure_from_profile(p, 1.1, 1.0);
        const double p2 = pressure_from_profile(p, 1.1, 2.0);
        CHECK(p2 == doctest::Approx(p1 / 4.0).epsilon(1e-12));
    }

    SUBCASE("upper/lower reflection identity") {
        // p_{Upper,(1,1,c3)}(theta) = p_{Lower,(1,1,c3)}(pi - theta).
        // The centered-difference pressure carries the profile's
        // derivative-noise floor, so the comparison is at 1e-3 relative.
        const SolutionProfile up = solve_upper(3e-2, c);
        const SolutionProfile lo = solve_lower(3e-2, c);
        for (double th = 0.5; th < 2.7; th += 0.2)
            CHECK(pressure_from_profile(up, th, 1.0) ==
                  doctest::Approx(pressure_from_profile(lo, kPi - th, 1.0))
                      .epsilon(1e-3));
    }

    SUBCASE("inviscid limit of the pressure") {
        // For the upper family at c=(1,1,0), p(pi/2) -> q_c(pi/2) = -2 like
        // -2 - 4 nu^2. Below nu ~ 1e-3 the centered difference hits the
        // derivative-noise floor of the stored profile, so the sweep stops
        // at 1e-2.
        double prev = 1e300;
        for (double nu : {1e-1, 3e-2, 1e-2}) {
            const SolutionProfile p = solve_upper(nu, c);
            const double dev =
                std::abs(pressure_from_profile(p, kPi / 2, 1.0) - (-2.0));
            CHECK(dev < prev + 1e-6);
            prev = dev;
        }
        CHECK(prev <= 1e-2);
    }
}

TEST_CASE("stream function level sets") {
    const double nu = 0.05;
    const double x0 = 0.25;
    const SolutionProfile p = solve_interior(nu, Coeffs{1, 1, 0}, x0);
    const Bbox bbox{0.05, 2.0, -2.0, 2.0};

    const std::vector<double> levels = {0.0, 0.5, -0.5};
    const StreamlineSet s = streamlines(p, levels, bbox, 200);
    REQUIRE(s.polylines.size() == 3);

    // vertices sit on their level sets
    double psi_scale = 0.0;
    for (int k = 0; k < 50; ++k)
        psi_scale = std::max(
            psi_scale, std::abs(stream_function(p, 0.1 + 0.03 * k, -1.5 + 0.06 * k)));
    for (std::size_t li = 0; li < levels.size(); ++li) {
        const double tol =
            1e-6 * std::max(std::abs(levels[li]), 1e-3 * psi_scale);
        for (const auto& chain : s.polylines[li])
            for (const auto& v : chain)
                CHECK(std::abs(stream_function(p, v[0], v[1]) - levels[li]) <=
                      tol + 1e-12);
    }

    // the zero level contains the ray cos(theta) = x0
    bool ray_found = false;
    double rmin = 1e300, rmax = 0.0;
    for (const auto& chain : s.polylines[0])
        for (const auto& v : chain) {
            const double r = std::hypot(v[0], v[1]);
            const double ct = v[1] / r;
            if (std::abs(ct - x0) < 2e-3) {
                ray_found = true;
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
        }
    CHECK(ray_found);
    CHECK(rmax - rmin > 0.5); // a ray, not an isolated point

    CHECK_THROWS_AS(
        streamlines(p, levels, Bbox{0.0, 1.0, -1.0, 1.0}, 100), region_error);
    CHECK_THROWS_AS(streamlines(p, {}, bbox, 100), std::invalid_argument);
}

TEST_CASE("glued inviscid streamlines fill every quadrant") {
    // contours of psi = -r V(cos th) for the double-root glued limit reach
    // all four quadrants of the meridian bbox
    const Coeffs c7 = coeffs_from_monomial(8.0 / 9.0, -8.0 / 3.0, 2.0);
    auto psi = [&c7](double rho, double z) {
        const double r = std::hypot(rho, z);
        const double x = std::clamp(z / r, -1.0, 1.0);
        return -r * euler_value(c7, EulerSpec::glued_at(0.0), x);
    };
    const Bbox bbox{0.05, 2.0, -2.0, 2.0};
    const std::vector<double> levels = {-1.0, -0.3, 0.3, 1.0};
    const StreamlineSet s = streamlines_of(psi, levels, bbox, 200);
    int quad[4] = {0, 0, 0, 0};
    for (const auto& lv : s.polylines)
        for (const auto& chain : lv)
            for (const auto& v : chain) {
                const int qi = (v[0] > 1.025 ? 1 : 0) + (v[1] > 0 ? 2 : 0);
                ++quad[qi];
            }
    for (int q = 0; q < 4; ++q) CHECK(quad[q] > 0);
}

TEST_CASE("illustration dataset") {
    const auto dir = tmp_dir() / "fig1";
    std::filesystem::remove_all(dir);
    const auto files = fig1_dataset(dir);
    CHECK(files.size() >= 17); // 4 profiles + 4 matched + 4+5 svg + 3 euler + manifest

    // every solution curve passes through zero at x0 = 0
    for (const char* tag : {"1", "1_8", "1_20", "1_50"}) {
        const ProfileCsv csv =
            read_profile_csv(dir / (std::string("U_nu_") + tag + ".csv"));
        double u0 = 1e300;
        for (std::size_t i = 0; i < csv.x.size(); ++i)
            if (std::abs(csv.x[i]) < 1e-12) u0 = csv.U[i];
        CHECK(std::abs(u0) <= 1e-9);
    }

    // the nu = 1/50 curve hugs the inviscid branches at the probe points
    {
        const ProfileCsv csv = read_profile_csv(dir / "U_nu_1_50.csv");
        auto at = [&](double xq) {
            double best = 1e300, val = 0;
            for (std::size_t i = 0; i < csv.x.size(); ++i)
                if (std::abs(csv.x[i] - xq) < best) {
                    best = std::abs(csv.x[i] - xq);
                    val = csv.U[i];
                }
            return val;
        };
        CHECK(std::abs(at(-0.5) -
                       euler_value(kSec7, EulerSpec::minus(), -0.5)) <= 0.05);
        CHECK(std::abs(at(0.4) - euler_value(kSec7, EulerSpec::plus(), 0.4)) <=
              0.05);
    }

    // the nu = 1 curve is nowhere near either branch around x = 0.3
    {
        const ProfileCsv csv = read_profile_csv(dir / "U_nu_1.csv");
        double val = 0, best = 1e300;
        for (std::size_t i = 0; i < csv.x.size(); ++i)
            if (std::abs(csv.x[i] - 0.3) < best) {
                best = std::abs(csv.x[i] - 0.3);
                val = csv.U[i];
            }
        CHECK(std::abs(val - euler_value(kSec7, EulerSpec::plus(), 0.3)) > 0.5);
        CHECK(std::abs(val - euler_value(kSec7, EulerSpec::minus(), 0.3)) > 0.5);
    }

    // deterministic: a second run reproduces the manifest checksums
    nlohmann::json m1, m2;
    {
        std::ifstream f(dir / "manifest.json");
        f >> m1;
    }
    const auto dir2 = tmp_dir() / "fig1_rerun";
    std::filesystem::remove_all(dir2);
    fig1_dataset(dir2);
    {
        std::ifstream f(dir2 / "manifest.json");
        f >> m2;
    }
    CHECK(m1 == m2);
}

TEST_CASE("csv round trip is bit exact") {
    const SolutionProfile p = solve_upper(0.1, Coeffs{1, 1, 0});
    const auto path = tmp_dir() / "roundtrip.csv";
    write_profile_csv(path, p);
    const ProfileCsv csv = read_profile_csv(path);
    REQUIRE(csv.x.size() == p.grid.size());
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        CHECK(csv.x[i] == p.grid[i]);
        CHECK(csv.U[i] == p.values[i]);
        CHECK(csv.dUdx[i] == p.deriv[i]);
    }
}

TEST_CASE("json round trip") {
    const SolutionProfile p = solve_interior(0.05, Coeffs{1, 1, 0}, 0.25);
    const SolutionProfile q = profile_from_json(to_json(p));
    CHECK(q.nu == p.nu);
    CHECK(q.c == p.c);
    CHECK(q.branch.kind == BranchKind::Interior);
    CHECK(q.branch.x_k == p.branch.x_k);
    CHECK(q.values == p.values);
    CHECK(q.residual_sup == p.residual_sup);
}

TEST_CASE("strict parsers") {
    const Coeffs c = parse_coeffs("1,1,0");
    CHECK(c == Coeffs{1, 1, 0});
    CHECK(parse_coeffs("-1.5e-2,0.25,3").c1 == doctest::Approx(-0.015));
    CHECK_THROWS_AS(parse_coeffs("25/9,1,0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_coeffs("1,1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_coeffs("1, 1, 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_coeffs("a,b,c"), std::invalid_argument);

    const auto g = parse_nu_grid("1e-1:1e-3:5");
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 1e-1);
    CHECK(g.back() == 1e-3);
    CHECK(g[1] / g[2] == doctest::Approx(g[2] / g[3]).epsilon(1e-12));
    CHECK_THROWS_AS(parse_nu_grid("1e-1,1e-3,5"), std::invalid_argument);

    const Window w = parse_window("-0.5,0.75");
    CHECK(w.size() == 1);
    CHECK(w[0].first == -0.5);
    CHECK_THROWS_AS(parse_window("0.5,-0.5"), std::invalid_argument);

    // 17-significant-digit decimals round trip exactly
    auto rg = vtest::rng(51);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (int i = 0; i < 200; ++i) {
        const double v = d(rg) * std::pow(10.0, i % 7 - 3);
        CHECK(parse_decimal(format_double(v)) == v);
    }
}

TEST_CASE("checksums are content determined") {
    const auto pa = tmp_dir() / "chk_a.txt";
    const auto pb = tmp_dir() / "chk_b.txt";
    for (const auto& path : {pa, pb}) {
        std::ofstream f(path);
        f << "x,U\n1,2\n";
    }
    CHECK(fnv1a64_file(pa) == fnv1a64_file(pb));
    CHECK(hex64(fnv1a64_file(pa)).size() == 16);
    {
        std::ofstream f(pb, std::ios::app);
        f << "3,4\n";
    }
    CHECK(fnv1a64_file(pa) != fnv1a64_file(pb));
}
