#include "visclimit/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "visclimit/errors.hpp"
#include "visclimit/grids.hpp"

namespace visclimit {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    std::size_t i = 0;
    auto digits = [&] {
        std::size_t n = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            ++n;
        }
        return n;
    };
    if (s[i] == '+' || s[i] == '-') ++i;
    std::size_t intpart = digits();
    std::size_t fracpart = 0;
    if (i < s.size() && s[i] == '.') {
        ++i;
        fracpart = digits();
    }
    if (intpart + fracpart == 0)
        throw std::invalid_argument("malformed decimal: " + s);
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        if (digits() == 0)
            throw std::invalid_argument("malformed exponent: " + s);
    }
    if (i != s.size())
        throw std::invalid_argument("trailing characters in number: " + s);
    return std::stod(s);
}

Coeffs parse_coeffs(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
        throw std::invalid_argument("coefficients must be c1,c2,c3");
    return Coeffs{parse_decimal(parts[0]), parse_decimal(parts[1]),
                  parse_decimal(parts[2])};
}

std::string coeffs_to_string(const Coeffs& c) {
    return format_double(c.c1) + "," + format_double(c.c2) + "," +
           format_double(c.c3);
}

std::vector<double> parse_nu_grid(const std::string& s) {
    const auto p1 = s.find(':');
    const auto p2 = s.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw std::invalid_argument("nu grid must be START:STOP:COUNT");
    const double start = parse_decimal(s.substr(0, p1));
    const double stop = parse_decimal(s.substr(p1 + 1, p2 - p1 - 1));
    const std::string cnt = s.substr(p2 + 1);
    for (char ch : cnt)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw std::invalid_argument("nu grid count must be an integer");
    const int count = std::stoi(cnt);
    return log_spaced(start, stop, count);
}

Window parse_window(const std::string& s) {
    const auto p = s.find(',');
    if (p == std::string::npos)
        throw std::invalid_argument("window must be A,B");
    const double a = parse_decimal(s.substr(0, p));
    const double b = parse_decimal(s.substr(p + 1));
    if (!(a < b) || a < -1.0 || b > 1.0)
        throw std::invalid_argument("window must satisfy -1 <= A < B <= 1");
    return Window{{a, b}};
}

// --- CSV ---------------------------------------------------------------------

namespace {

void write_columns(const std::filesystem::path& path, const char* header,
                   std::span<const double> a, std::span<const double> b,
                   const double* cc) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("csv: cannot open " + path.string());
    f << header << "\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        f << format_double(a[i]) << "," << format_double(b[i]);
        if (cc) f << "," << format_double(cc[i]);
        f << "\n";
    }
}

} // namespace

void write_profile_csv(const std::filesystem::path& path,
                       const SolutionProfile& p) {
    write_columns(path, "x,U,dUdx", p.grid, p.values, p.deriv.data());
}

void write_euler_csv(const std::filesystem::path& path,
                     const EulerProfile& p) {
    write_columns(path, "x,V", p.grid, p.values, nullptr);
}

void write_matched_csv(const std::filesystem::path& path, const LayerSpec& s,
                       std::span<const double> grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = matched_profile(s, grid[i]);
    write_columns(path, "x,Utilde", grid, v, nullptr);
}

ProfileCsv read_profile_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(f, line) || line.rfind("x,U", 0) != 0)
        throw std::runtime_error("csv: missing x,U,dUdx header");
    ProfileCsv out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        double v[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ss, tok, ','))
                throw std::runtime_error("csv: short row");
            v[k] = std::stod(tok);
        }
        out.x.push_back(v[0]);
        out.U.push_back(v[1]);
        out.dUdx.push_back(v[2]);
    }
    return out;
}

// --- JSON --------------------------------------------------------------------

nlohmann::json to_json(const Coeffs& c) {
    return {{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}};
}

Coeffs coeffs_from_json(const nlohmann::json& j) {
    return Coeffs{j.at("c1").get<double>(), j.at("c2").get<double>(),
                  j.at("c3").get<double>()};
}

nlohmann::json to_json(const Regime& r) {
    nlohmann::json j;
    j["kind"] = regime_kind_name(r.kind);
    if (r.alpha) j["alpha"] = *r.alpha;
    if (r.kappa) j["kappa"] = *r.kappa;
    if (r.xbar) j["xbar"] = *r.xbar;
    return j;
}

namespace {

nlohmann::json branch_to_json(const Branch& b) {
    nlohmann::json j;
    j["kind"] = branch_kind_name(b.kind);
    if (b.kind == BranchKind::Interior) j["x_k"] = b.x_k;
    if (b.kind == BranchKind::Anchored) {
        j["x_a"] = b.x_a;
        j["U_a"] = b.U_a;
    }
    return j;
}

} // namespace

nlohmann::json to_json(const SolutionProfile& p) {
    nlohmann::json j;
    j["nu"] = p.nu;
    j["c"] = to_json(p.c);
    j["branch"] = branch_to_json(p.branch);
    j["x"] = p.grid;
    j["U"] = p.values;
    j["dUdx"] = p.deriv;
    j["residual_sup"] = p.residual_sup;
    return j;
}

SolutionProfile profile_from_json(const nlohmann::json& j) {
    SolutionProfile p;
    p.nu = j.at("nu").get<double>();
    p.c = coeffs_from_json(j.at("c"));
    const std::string kind = j.at("branch").at("kind").get<std::string>();
    if (kind == "upper") p.branch = Branch::upper();
    else if (kind == "lower") p.branch = Branch::lower();
    else if (kind == "star") p.branch = Branch::star();
    else if (kind == "interior")
        p.branch = Branch::interior(j.at("branch").at("x_k").get<double>());
    else if (kind == "anchored")
        p.branch = Branch::anchored(j.at("branch").at("x_a").get<double>(),
                                    j.at("branch").at("U_a").get<double>());
    else throw std::invalid_argument("unknown branch kind: " + kind);
    p.grid = j.at("x").get<std::vector<double>>();
    p.values = j.at("U").get<std::vector<double>>();
    p.deriv = j.at("dUdx").get<std::vector<double>>();
    p.residual_sup = j.at("residual_sup").get<double>();
    return p;
}

nlohmann::json to_json(const SweepReport& r) {
    nlohmann::json j;
    j["c"] = to_json(r.c);
    j["branch"] = branch_to_json(r.branch);
    switch (r.ref.kind) {
        case Reference::Kind::EulerPlus: j["reference"] = "euler_plus"; break;
        case Reference::Kind::EulerMinus: j["reference"] = "euler_minus"; break;
        case Reference::Kind::Glued:
            j["reference"] = {{"glued_at", r.ref.x0}};
            break;
        case Reference::Kind::Layer:
            j["reference"] = {{"layer_K", r.ref.K}};
            break;
    }
    j["metric"] =
        r.metric == ErrorMetric::SupU ? "supU" : "supH";
    nlohmann::json w = nlohmann::json::array();
    for (const auto& [a, b] : r.window) w.push_back({a, b});
    j["window"] = w;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [nu, err] : r.fit.points)
        pts.push_back({{"nu", nu}, {"err", err}});
    j["points"] = pts;
    j["fit"] = {{"slope", r.fit.slope},
                {"intercept", r.fit.intercept},
                {"r2", r.fit.r2}};
    j["predicted_alpha"] = r.predicted_alpha;
    j["verdict"] = r.verdict;
    j["paper_faithful"] = r.paper_faithful;
    return j;
}

nlohmann::json to_json(const NonconvWitness& w) {
    return {{"nu", w.nu},
            {"c3", w.c3},
            {"zero_location", w.zero_location},
            {"gap", w.gap},
            {"pc_at_zero", w.pc_at_zero}};
}

// --- checksums ---------------------------------------------------------------

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("fnv1a64: cannot open " + path.string());
    std::uint64_t h = 14695981039346656037ull;
    char buf[4096];
    while (f.read(buf, sizeof buf) || f.gcount() > 0) {
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!f) break;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

} // namespace visclimit
