// Command-line front end: classify parameters, solve profiles, export the
// inviscid limits, layer profiles, rate sweeps, non-convergence witnesses,
// physical fields, and the illustration dataset.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure,
// 3 region/precondition error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "visclimit/errors.hpp"
#include "visclimit/fields.hpp"
#include "visclimit/grids.hpp"
#include "visclimit/io.hpp"
#include "visclimit/layers.hpp"
#include "visclimit/rates.hpp"
#include "visclimit/riccati.hpp"

using namespace visclimit;

namespace {

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Replaces "--config PATH" with the file's key=value pairs, in place, so a
// later explicit flag overrides the file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) {
        const std::string t = argv[i];
        if (t != "--config") {
            out.push_back(t);
            continue;
        }
        if (i + 1 >= argc)
            throw std::invalid_argument("--config requires a path");
        std::ifstream f(argv[++i]);
        if (!f)
            throw std::invalid_argument(std::string("cannot open config file ") +
                                        argv[i]);
        std::string line;
        while (std::getline(f, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trimmed(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config lines must be key=value");
            const std::string key = trimmed(line.substr(0, eq));
            std::string val = trimmed(line.substr(eq + 1));
            if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
                val = val.substr(1, val.size() - 2);
            if (key.empty())
                throw std::invalid_argument("config lines must be key=value");
            out.push_back("--" + key);
            out.push_back(val);
        }
    }
    return out;
}

struct CommonArgs {
    std::string c_str;
    double nu = 0.1;
    std::string branch = "upper";
    double xk = 0.0;
    double xa = 0.0;
    double ua = 0.0;
    double K = -1.0; // <0: default
    std::string nu_grid = "1e-1:3.16e-4:8";
    std::string window;
    std::string metric = "supU";
    std::string out;
    std::string format = "csv";
};

Branch parse_branch(const CommonArgs& a) {
    if (a.branch == "upper") return Branch::upper();
    if (a.branch == "lower") return Branch::lower();
    if (a.branch == "star") return Branch::star();
    if (a.branch == "interior") return Branch::interior(a.xk);
    if (a.branch == "anchored") return Branch::anchored(a.xa, a.ua);
    throw std::invalid_argument("unknown branch: " + a.branch);
}

SolutionProfile solve_cli(const CommonArgs& a, const Coeffs& c) {
    const Branch b = parse_branch(a);
    switch (b.kind) {
        case BranchKind::Upper: return solve_upper(a.nu, c);
        case BranchKind::Lower: return solve_lower(a.nu, c);
        case BranchKind::Interior: return solve_interior(a.nu, c, b.x_k);
        case BranchKind::Anchored:
            return solve_anchored(a.nu, c, b.x_a, b.U_a);
        case BranchKind::ClosedFormStar:
            return closed_form_star(a.nu, c.c1, c.c2);
    }
    throw std::invalid_argument("bad branch");
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open " + out);
        f << text;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"(-1)-homogeneous axisymmetric no-swirl Navier-Stokes "
                 "profiles and their vanishing-viscosity limits"};
    app.require_subcommand(1);

    CommonArgs a;
    double eps = 0.1;
    double c1 = 0.0, c2 = 1.0;
    std::string sign = "plus";
    double x0 = 0.0;
    bool serial = false;
    int theta_count = 181;
    double rr = 1.0;

    std::string config_doc;
    auto add_common = [&](CLI::App* cmd, bool needs_nu) {
        cmd->add_option("--config", config_doc,
                        "flat key=value file mirroring the flags");
        cmd->add_option("--c", a.c_str, "coefficients c1,c2,c3 (decimals)");
        if (needs_nu) cmd->add_option("--nu", a.nu, "viscosity");
        cmd->add_option("--out", a.out, "output path ('-' = stdout)");
        cmd->add_option("--format", a.format, "csv|json|svg");
    };
    auto add_branch = [&](CLI::App* cmd) {
        cmd->add_option("--branch", a.branch,
                        "upper|lower|star|interior|anchored");
        cmd->add_option("--xk", a.xk, "zero location (interior branch)");
        cmd->add_option("--xa", a.xa, "anchor location (anchored branch)");
        cmd->add_option("--ua", a.ua, "anchor value (anchored branch)");
    };

    CLI::App* c_classify = app.add_subcommand("classify", "regime of c");
    add_common(c_classify, false);

    CLI::App* c_solve = app.add_subcommand("solve", "viscous profile");
    add_common(c_solve, true);
    add_branch(c_solve);

    CLI::App* c_limit = app.add_subcommand("limit", "inviscid profile");
    add_common(c_limit, false);
    c_limit->add_option("--sign", sign, "plus|minus|glued");
    c_limit->add_option("--x0", x0, "glue latitude");

    CLI::App* c_layer = app.add_subcommand("layer", "matched layer profile");
    add_common(c_layer, true);
    c_layer->add_option("--xk", a.xk, "layer center");
    c_layer->add_option("--K", a.K, "window factor (default: fitted)");

    CLI::App* c_rates = app.add_subcommand("rates", "convergence-rate sweep");
    add_common(c_rates, false);
    add_branch(c_rates);
    std::string refname = "eulerplus";
    c_rates->add_option("--ref", refname, "eulerplus|eulerminus|glued|layer");
    c_rates->add_option("--x0", x0, "glue latitude for --ref glued");
    c_rates->add_option("--K", a.K, "window factor for --ref layer");
    c_rates->add_option("--metric", a.metric, "supU|supH");
    c_rates->add_option("--window", a.window, "A,B");
    c_rates->add_option("--nu-grid", a.nu_grid, "START:STOP:COUNT (log)");
    c_rates->add_flag("--serial", serial, "serial reference sweep");

    CLI::App* c_nonconv =
        app.add_subcommand("nonconv", "non-convergence witnesses");
    c_nonconv->add_option("--config", config_doc,
                          "flat key=value file mirroring the flags");
    c_nonconv->add_option("--c1", c1, "c1 >= 0");
    c_nonconv->add_option("--c2", c2, "c2 > 0");
    c_nonconv->add_option("--eps", eps, "window (1-eps,1)");
    c_nonconv->add_option("--nu-grid", a.nu_grid, "START:STOP:COUNT");
    c_nonconv->add_option("--out", a.out, "output path");

    CLI::App* c_field = app.add_subcommand("field", "velocity/pressure/psi");
    add_common(c_field, true);
    add_branch(c_field);
    c_field->add_option("--r", rr, "radius");
    c_field->add_option("--theta-count", theta_count, "sample count");

    CLI::App* c_fig1 = app.add_subcommand("fig1", "illustration dataset");
    c_fig1->add_option("--config", config_doc,
                       "flat key=value file mirroring the flags");
    c_fig1->add_option("--out", a.out, "output directory")->required();

    for (CLI::App* sub : app.get_subcommands({}))
        for (CLI::Option* o : sub->get_options())
            o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (c_classify->parsed()) {
        const Coeffs c = parse_coeffs(a.c_str);
        emit(to_json(classify(c)).dump(2) + "\n", a.out);
        return 0;
    }

    if (c_solve->parsed()) {
        const Coeffs c = parse_coeffs(a.c_str);
        const SolutionProfile p = solve_cli(a, c);
        if (a.format == "json") {
            emit(to_json(p).dump() + "\n", a.out);
        } else if (a.format == "csv") {
            if (a.out.empty())
                throw std::invalid_argument("solve --format csv needs --out");
            write_profile_csv(a.out, p);
        } else {
            throw std::invalid_argument("solve: format must be csv|json");
        }
        return 0;
    }

    if (c_limit->parsed()) {
        const Coeffs c = parse_coeffs(a.c_str);
        EulerSpec es = EulerSpec::plus();
        if (sign == "minus") es = EulerSpec::minus();
        else if (sign == "glued") es = EulerSpec::glued_at(x0);
        else if (sign != "plus")
            throw std::invalid_argument("sign must be plus|minus|glued");
        const EulerProfile p = euler_profile(c, es, chebyshev_lobatto(2001));
        if (a.format == "json") {
            nlohmann::json j;
            j["c"] = to_json(c);
            j["x"] = p.grid;
            j["V"] = p.values;
            emit(j.dump() + "\n", a.out);
        } else {
            if (a.out.empty())
                throw std::invalid_argument("limit --format csv needs --out");
            write_euler_csv(a.out, p);
        }
        return 0;
    }

    if (c_layer->parsed()) {
        const Coeffs c = parse_coeffs(a.c_str);
        const LayerSpec spec = LayerSpec::make(
            a.nu, c, a.xk,
            a.K > 0 ? std::optional<double>(a.K) : std::nullopt);
        if (a.out.empty())
            throw std::invalid_argument("layer needs --out");
        write_matched_csv(a.out, spec, chebyshev_lobatto(2001));
        return 0;
    }

    if (c_rates->parsed()) {
        SweepConfig cfg;
        cfg.c = parse_coeffs(a.c_str);
        cfg.branch = parse_branch(a);
        if (refname == "eulerplus") cfg.ref = Reference::euler_plus();
        else if (refname == "eulerminus") cfg.ref = Reference::euler_minus();
        else if (refname == "glued") cfg.ref = Reference::glued(x0);
        else if (refname == "layer")
            cfg.ref = Reference::layer(a.K > 0 ? a.K : 4.0);
        else throw std::invalid_argument("unknown --ref: " + refname);
        if (a.metric == "supU") cfg.metric = ErrorMetric::SupU;
        else if (a.metric == "supH") cfg.metric = ErrorMetric::SupHalfUSqMinusP;
        else throw std::invalid_argument("metric must be supU|supH");
        cfg.window = a.window.empty() ? full_window() : parse_window(a.window);
        cfg.nu_grid = parse_nu_grid(a.nu_grid);
        cfg.exec = serial ? Exec::Serial : Exec::OpenMP;
        const SweepReport rep = rate_sweep(cfg);

        if (a.format == "json") {
            emit(to_json(rep).dump(2) + "\n", a.out);
            return 0;
        }

        char line[128];
        std::snprintf(line, sizeof line, "%12s %14s %12s\n", "nu", "err",
                      "local slope");
        std::cout << line;
        for (std::size_t i = 0; i < rep.fit.points.size(); ++i) {
            const auto [nu, err] = rep.fit.points[i];
            if (i == 0) {
                std::snprintf(line, sizeof line, "%12.4e %14.6e %12s\n", nu,
                              err, "-");
            } else {
                const auto [pn, pe] = rep.fit.points[i - 1];
                const double ls = std::log(err / pe) / std::log(nu / pn);
                std::snprintf(line, sizeof line, "%12.4e %14.6e %12.4f\n", nu,
                              err, ls);
            }
            std::cout << line;
        }
        std::snprintf(line, sizeof line,
                      "fit: slope %.4f  intercept %.4f  r2 %.6f  predicted "
                      "%.4f  verdict %s\n",
                      rep.fit.slope, rep.fit.intercept, rep.fit.r2,
                      rep.predicted_alpha, rep.verdict ? "true" : "false");
        std::cout << line;
        if (!a.out.empty()) {
            std::ofstream f(a.out);
            f << to_json(rep).dump(2) << "\n";
        }
        return 0;
    }

    if (c_nonconv->parsed()) {
        const std::vector<double> nus = parse_nu_grid(a.nu_grid);
        const auto ws = nonconv_search(c1, c2, eps, nus);
        nlohmann::json j = nlohmann::json::array();
        for (const auto& w : ws) j.push_back(to_json(w));
        emit(j.dump(2) + "\n", a.out);
        return 0;
    }

    if (c_field->parsed()) {
        const Coeffs c = parse_coeffs(a.c_str);
        const SolutionProfile p = solve_cli(a, c);
        if (a.format == "svg") {
            if (a.out.empty())
                throw std::invalid_argument("field --format svg needs --out");
            const Bbox bbox{0.05, 2.0, -2.0, 2.0};
            std::vector<double> lv;
            {
                // deterministic level ladder from the psi range on a coarse
                // scan
                double losc = 0, hisc = 0;
                bool first = true;
                for (int j = 0; j < 64; ++j)
                    for (int i = 0; i < 64; ++i) {
                        const double rho = 0.05 + (2.0 - 0.05) * i / 63.0;
                        const double z = -2.0 + 4.0 * j / 63.0;
                        const double v = stream_function(p, rho, z);
                        if (first) { losc = hisc = v; first = false; }
                        losc = std::min(losc, v);
                        hisc = std::max(hisc, v);
                    }
                for (int k = 1; k <= 9; ++k)
                    lv.push_back(losc + (hisc - losc) * k / 10.0);
            }
            write_streamlines_svg(a.out, streamlines(p, lv, bbox), bbox);
            return 0;
        }
        std::vector<FieldSample> samples;
        for (int i = 0; i < theta_count; ++i) {
            const double th =
                2e-3 + (M_PI - 4e-3) * i / std::max(theta_count - 1, 1);
            samples.push_back(field_sample(p, th, rr));
        }
        if (a.format == "json") {
            nlohmann::json j;
            j["nu"] = a.nu;
            j["c"] = to_json(c);
            j["r"] = rr;
            for (const FieldSample& s : samples) {
                j["theta"].push_back(s.theta);
                j["u_r"].push_back(s.u_r);
                j["u_theta"].push_back(s.u_theta);
                j["p"].push_back(s.p);
            }
            emit(j.dump() + "\n", a.out);
        } else {
            std::string text = "theta,r,u_r,u_theta,p\n";
            for (const FieldSample& s : samples)
                text += format_double(s.theta) + "," + format_double(s.r) +
                        "," + format_double(s.u_r) + "," +
                        format_double(s.u_theta) + "," + format_double(s.p) +
                        "\n";
            emit(text, a.out);
        }
        return 0;
    }

    if (c_fig1->parsed()) {
        const auto files = fig1_dataset(a.out);
        for (const auto& f : files) std::cout << f << "\n";
        return 0;
    }

    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const region_error& e) {
        std::cerr << "region error: " << e.what() << "\n";
        return 3;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
