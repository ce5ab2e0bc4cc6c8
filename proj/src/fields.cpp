#include "visclimit/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>

#include "visclimit/errors.hpp"
#include "visclimit/grids.hpp"
#include "visclimit/io.hpp"
#include "visclimit/layers.hpp"
#include "visclimit/runtime.hpp"

namespace visclimit {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFdStep = 1e-4; // centered theta-difference step
} // namespace

std::pair<double, double> velocity_from_profile(const SolutionProfile& p,
                                                double theta, double r) {
    if (!(r > 0.0)) throw region_error("velocity: r <= 0");
    if (!(theta > kThetaMin && theta < kPi - kThetaMin))
        throw region_error("velocity: theta within the polar exclusion");
    const double x = std::cos(theta);
    const double st = std::sin(theta);
    return {p.deriv_at(x) / r, p.value_at(x) / (r * st)};
}

double pressure_from_profile(const SolutionProfile& p, double theta,
                             double r) {
    const double h = kFdStep;
    if (!(theta > kThetaMin + h && theta < kPi - kThetaMin - h))
        throw region_error("pressure: theta within the polar exclusion");
    const auto [ur0, ut0] = velocity_from_profile(p, theta, 1.0);
    const auto [urp, utp] = velocity_from_profile(p, theta + h, 1.0);
    const auto [urm, utm] = velocity_from_profile(p, theta - h, 1.0);
    (void)utp;
    (void)utm;
    const double d2ur = (urp - 2.0 * ur0 + urm) / (h * h);
    const double dur = (urp - urm) / (2.0 * h);
    const double cot = std::cos(theta) / std::sin(theta);
    const double p1 =
        0.5 * (-d2ur - (cot - ut0) * dur - ur0 * ur0 - ut0 * ut0);
    return p1 / (r * r);
}

FieldSample field_sample(const SolutionProfile& p, double theta, double r) {
    const auto [ur, ut] = velocity_from_profile(p, theta, r);
    return FieldSample{theta, r, ur, ut, pressure_from_profile(p, theta, r)};
}

double stream_function(const SolutionProfile& p, double rho, double z) {
    const double r = std::hypot(rho, z);
    if (!(r > 0.0)) throw region_error("stream_function: origin excluded");
    return -r * p.value_at(std::clamp(z / r, -1.0, 1.0));
}

// ============================================================================
// marching squares
// ============================================================================

namespace {

using PsiFn = std::function<double(double, double)>;

struct RasterPoint {
    double x, y;
};

// Bisection of psi - level along the segment between two raster corners with
// straddling values; the corners carry exact psi values, so a root exists.
RasterPoint refine_on_edge(const PsiFn& psi, double level, double xa,
                           double ya, double va, double xb, double yb,
                           double vb) {
    double ta = 0.0, tb = 1.0;
    double fa = va - level;
    for (int i = 0; i < 48; ++i) {
        const double tm = 0.5 * (ta + tb);
        const double fm =
            psi(xa + tm * (xb - xa), ya + tm * (yb - ya)) - level;
        if (fm == 0.0) {
            ta = tb = tm;
            break;
        }
        if ((fm > 0) == (fa > 0)) {
            ta = tm;
            fa = fm;
        } else {
            tb = tm;
        }
    }
    const double t = 0.5 * (ta + tb);
    return {xa + t * (xb - xa), ya + t * (yb - ya)};
}

struct Segment {
    RasterPoint a, b;
};

std::vector<std::vector<std::array<double, 2>>> chain_segments(
    const std::vector<Segment>& segs, double qscale) {
    auto key = [&](const RasterPoint& p) {
        return std::pair<std::int64_t, std::int64_t>(
            std::llround(p.x / qscale), std::llround(p.y / qscale));
    };
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>>
        ends;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        ends[key(segs[i].a)].push_back(i);
        ends[key(segs[i].b)].push_back(i);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<std::vector<std::array<double, 2>>> chains;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::vector<std::array<double, 2>> chain{{segs[i].a.x, segs[i].a.y},
                                                 {segs[i].b.x, segs[i].b.y}};
        // extend forward from the tail
        bool grew = true;
        while (grew) {
            grew = false;
            const RasterPoint tail{chain.back()[0], chain.back()[1]};
            for (std::size_t j : ends[key(tail)]) {
                if (used[j]) continue;
                const bool from_a =
                    key(segs[j].a) == key(tail);
                const RasterPoint& nxt = from_a ? segs[j].b : segs[j].a;
                chain.push_back({nxt.x, nxt.y});
                used[j] = true;
                grew = true;
                break;
            }
        }
        // extend backward from the head
        grew = true;
        while (grew) {
            grew = false;
            const RasterPoint head{chain.front()[0], chain.front()[1]};
            for (std::size_t j : ends[key(head)]) {
                if (used[j]) continue;
                const bool from_a = key(segs[j].a) == key(head);
                const RasterPoint& nxt = from_a ? segs[j].b : segs[j].a;
                chain.insert(chain.begin(), {nxt.x, nxt.y});
                used[j] = true;
                grew = true;
                break;
            }
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

StreamlineSet contours(const PsiFn& psi, std::span<const double> levels,
                       const Bbox& bbox, int raster, Exec exec) {
    if (levels.empty())
        throw std::invalid_argument("streamlines: empty level list");
    if (!(bbox.rho_min > 0.0))
        throw region_error("streamlines: bbox must exclude the axis rho=0");
    if (raster < 2) throw std::invalid_argument("streamlines: raster < 2");

    const int n = raster;
    std::vector<double> psis(static_cast<std::size_t>(n) * n);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = bbox.rho_min + (bbox.rho_max - bbox.rho_min) * i / (n - 1);
        ys[i] = bbox.z_min + (bbox.z_max - bbox.z_min) * i / (n - 1);
    }
    if (exec == Exec::OpenMP) {
        const int nt = thread_cap();
#pragma omp parallel for schedule(static) num_threads(nt)
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < n; ++i)
                psis[static_cast<std::size_t>(j) * n + i] = psi(xs[i], ys[j]);
    } else {
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < n; ++i)
                psis[static_cast<std::size_t>(j) * n + i] = psi(xs[i], ys[j]);
    }

    const double qscale =
        1e-7 * std::max(bbox.rho_max - bbox.rho_min, bbox.z_max - bbox.z_min);
    StreamlineSet out;
    out.levels.assign(levels.begin(), levels.end());
    out.polylines.resize(levels.size());

    for (std::size_t li = 0; li < levels.size(); ++li) {
        const double lv = levels[li];
        std::vector<Segment> segs;
        auto corner = [&](int i, int j) {
            return psis[static_cast<std::size_t>(j) * n + i];
        };
        for (int j = 0; j + 1 < n; ++j) {
            for (int i = 0; i + 1 < n; ++i) {
                const double v00 = corner(i, j), v10 = corner(i + 1, j);
                const double v11 = corner(i + 1, j + 1), v01 = corner(i, j + 1);
                int idx = 0;
                if (v00 > lv) idx |= 1;
                if (v10 > lv) idx |= 2;
                if (v11 > lv) idx |= 4;
                if (v01 > lv) idx |= 8;
                if (idx == 0 || idx == 15) continue;

                auto edge_bottom = [&] {
                    return refine_on_edge(psi, lv, xs[i], ys[j], v00,
                                          xs[i + 1], ys[j], v10);
                };
                auto edge_right = [&] {
                    return refine_on_edge(psi, lv, xs[i + 1], ys[j], v10,
                                          xs[i + 1], ys[j + 1], v11);
                };
                auto edge_top = [&] {
                    return refine_on_edge(psi, lv, xs[i], ys[j + 1], v01,
                                          xs[i + 1], ys[j + 1], v11);
                };
                auto edge_left = [&] {
                    return refine_on_edge(psi, lv, xs[i], ys[j], v00, xs[i],
                                          ys[j + 1], v01);
                };
                auto add = [&](RasterPoint a, RasterPoint b) {
                    segs.push_back({a, b});
                };

                switch (idx) {
                    case 1: case 14: add(edge_left(), edge_bottom()); break;
                    case 2: case 13: add(edge_bottom(), edge_right()); break;
                    case 3: case 12: add(edge_left(), edge_right()); break;
                    case 4: case 11: add(edge_right(), edge_top()); break;
                    case 6: case 9: add(edge_bottom(), edge_top()); break;
                    case 7: case 8: add(edge_left(), edge_top()); break;
                    case 5: case 10: {
                        const double vc = psi(0.5 * (xs[i] + xs[i + 1]),
                                              0.5 * (ys[j] + ys[j + 1]));
                        const bool center_hi = vc > lv;
                        if ((idx == 5) == center_hi) {
                            add(edge_left(), edge_top());
                            add(edge_bottom(), edge_right());
                        } else {
                            add(edge_left(), edge_bottom());
                            add(edge_right(), edge_top());
                        }
                        break;
                    }
                    default: break;
                }
            }
        }
        out.polylines[li] = chain_segments(segs, qscale);
    }
    return out;
}

} // namespace

StreamlineSet streamlines_of(const std::function<double(double, double)>& psi,
                             std::span<const double> levels, const Bbox& bbox,
                             int raster, Exec exec) {
    return contours(psi, levels, bbox, raster, exec);
}

StreamlineSet streamlines(const SolutionProfile& p,
                          std::span<const double> levels, const Bbox& bbox,
                          int raster, Exec exec) {
    return contours(
        [&p](double rho, double z) { return stream_function(p, rho, z); },
        levels, bbox, raster, exec);
}

// ============================================================================
// SVG export
// ============================================================================

void write_streamlines_svg(const std::filesystem::path& path,
                           const StreamlineSet& s, const Bbox& bbox) {
    const int W = 720, H = 540, pad = 30;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("svg: cannot open " + path.string());
    auto px = [&](double rho) {
        return pad + (rho - bbox.rho_min) / (bbox.rho_max - bbox.rho_min) *
                         (W - 2 * pad);
    };
    auto py = [&](double z) {
        return H - pad -
               (z - bbox.z_min) / (bbox.z_max - bbox.z_min) * (H - 2 * pad);
    };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\""
      << W - 2 * pad << "\" height=\"" << H - 2 * pad
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t li = 0; li < s.polylines.size(); ++li) {
        const char* col = palette[li % 6];
        for (const auto& chain : s.polylines[li]) {
            if (chain.size() < 2) continue;
            f << "<polyline fill=\"none\" stroke=\"" << col
              << "\" stroke-width=\"1\" points=\"";
            char buf[64];
            for (const auto& v : chain) {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(v[0]),
                              py(v[1]));
                f << buf;
            }
            f << "\"/>\n";
        }
    }
    f << "</svg>\n";
}

namespace {

void write_curves_svg(const std::filesystem::path& path,
                      const std::vector<std::vector<std::array<double, 2>>>&
                          curves,
                      double xmin, double xmax, double ymin, double ymax) {
    const int W = 720, H = 540, pad = 30;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("svg: cannot open " + path.string());
    auto px = [&](double x) {
        return pad + (x - xmin) / (xmax - xmin) * (W - 2 * pad);
    };
    auto py = [&](double y) {
        return H - pad - (y - ymin) / (ymax - ymin) * (H - 2 * pad);
    };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#555555"};
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\""
      << W - 2 * pad << "\" height=\"" << H - 2 * pad
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    char buf[64];
    for (std::size_t k = 0; k < curves.size(); ++k) {
        f << "<polyline fill=\"none\" stroke=\"" << palette[k % 5]
          << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& v : curves[k]) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(v[0]), py(v[1]));
            f << buf;
        }
        f << "\"/>\n";
    }
    f << "</svg>\n";
}

std::vector<double> level_ladder(const PsiFn& psi, const Bbox& bbox,
                                 int count) {
    double lo = 0, hi = 0;
    bool first = true;
    for (int j = 0; j < 64; ++j) {
        for (int i = 0; i < 64; ++i) {
            const double rho =
                bbox.rho_min + (bbox.rho_max - bbox.rho_min) * i / 63.0;
            const double z = bbox.z_min + (bbox.z_max - bbox.z_min) * j / 63.0;
            const double v = psi(rho, z);
            if (first) {
                lo = hi = v;
                first = false;
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    std::vector<double> lv(count);
    for (int k = 0; k < count; ++k)
        lv[k] = lo + (hi - lo) * (k + 1) / (count + 1);
    return lv;
}

} // namespace

std::vector<std::string> fig1_dataset(const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const Coeffs c = coeffs_from_monomial(8.0 / 9.0, -8.0 / 3.0, 2.0);
    const double x0 = 0.0;
    const std::vector<std::pair<double, std::string>> nus = {
        {1.0, "1"}, {0.125, "1_8"}, {0.05, "1_20"}, {0.02, "1_50"}};

    std::vector<std::string> files;
    const Bbox bbox{0.05, 2.0, -2.0, 2.0};
    const std::vector<double> xgrid = chebyshev_lobatto(801);

    std::vector<std::vector<std::array<double, 2>>> overlay;
    for (const auto& [nu, tag] : nus) {
        const SolutionProfile p = solve_interior(nu, c, x0);
        const std::string name = "U_nu_" + tag + ".csv";
        write_profile_csv(out_dir / name, p);
        files.push_back(name);

        const LayerSpec spec = LayerSpec::make(nu, c, x0);
        const std::string lname = "matched_nu_" + tag + ".csv";
        write_matched_csv(out_dir / lname, spec, xgrid);
        files.push_back(lname);

        const std::vector<double> lv = level_ladder(
            [&p](double rho, double z) { return stream_function(p, rho, z); },
            bbox, 9);
        const StreamlineSet s = streamlines(p, lv, bbox);
        const std::string sname = "streamlines_nu_" + tag + ".svg";
        write_streamlines_svg(out_dir / sname, s, bbox);
        files.push_back(sname);

        std::vector<std::array<double, 2>> curve;
        for (double x : xgrid) curve.push_back({x, p.value_at(x)});
        overlay.push_back(std::move(curve));
    }

    // inviscid references
    for (auto [spec, name] :
         {std::pair{EulerSpec::plus(), std::string("euler_plus.csv")},
          std::pair{EulerSpec::minus(), std::string("euler_minus.csv")},
          std::pair{EulerSpec::glued_at(x0), std::string("euler_glued.csv")}}) {
        write_euler_csv(out_dir / name, euler_profile(c, spec, xgrid));
        files.push_back(name);
    }

    {
        std::vector<std::array<double, 2>> glue;
        for (double x : xgrid)
            glue.push_back({x, euler_value(c, EulerSpec::glued_at(x0), x)});
        overlay.push_back(std::move(glue));
        double ymin = 0, ymax = 0;
        for (const auto& cur : overlay)
            for (const auto& v : cur) {
                ymin = std::min(ymin, v[1]);
                ymax = std::max(ymax, v[1]);
            }
        write_curves_svg(out_dir / "profiles.svg", overlay, -1.0, 1.0,
                         ymin - 0.2, ymax + 0.2);
        files.push_back("profiles.svg");
    }

    // limit streamlines: the signed sqrt branches and the smooth solutions
    auto euler_psi = [&c](int sgn) {
        return [&c, sgn](double rho, double z) {
            const double r = std::hypot(rho, z);
            const double x = std::clamp(z / r, -1.0, 1.0);
            return -r * sgn *
                   std::sqrt(2.0 * std::max(eval_poly(c, x), 0.0));
        };
    };
    auto smooth_psi = [](int sgn) {
        return [sgn](double rho, double z) {
            const double r = std::hypot(rho, z);
            const double x = std::clamp(z / r, -1.0, 1.0);
            return -r * sgn * 2.0 * (x - 2.0 / 3.0);
        };
    };
    const std::vector<std::pair<PsiFn, std::string>> refs = {
        {euler_psi(+1), "streamlines_euler_plus.svg"},
        {euler_psi(-1), "streamlines_euler_minus.svg"},
        {smooth_psi(+1), "streamlines_smooth_plus.svg"},
        {smooth_psi(-1), "streamlines_smooth_minus.svg"},
    };
    for (const auto& [psi, name] : refs) {
        const std::vector<double> lv = level_ladder(psi, bbox, 9);
        write_streamlines_svg(out_dir / name, streamlines_of(psi, lv, bbox),
                              bbox);
        files.push_back(name);
    }

    nlohmann::json manifest;
    manifest["files"] = nlohmann::json::array();
    for (const std::string& name : files) {
        const fs::path fp = out_dir / name;
        manifest["files"].push_back(
            {{"name", name},
             {"bytes", static_cast<std::uint64_t>(fs::file_size(fp))},
             {"fnv1a64", hex64(fnv1a64_file(fp))}});
    }
    std::ofstream mf(out_dir / "manifest.json");
    mf << manifest.dump(2) << "\n";
    files.push_back("manifest.json");
    return files;
}

} // namespace visclimit
