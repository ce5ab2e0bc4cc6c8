#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "visclimit/euler.hpp"
#include "visclimit/layers.hpp"
#include "visclimit/rates.hpp"
#include "visclimit/riccati.hpp"

namespace visclimit {

// ============================================================================
// Serialization: CSV with 17-significant-digit decimals (bit-exact round
// trips), JSON mirrors of the domain types, and the CLI string forms.
// ============================================================================

/// Shortest 17-significant-digit decimal; round-trips doubles exactly.
std::string format_double(double v);

/// Strict decimal parser: [+-]?digits[.digits]?([eE][+-]?digits)?. Throws
/// std::invalid_argument on anything else (fractions like 25/9 rejected).
double parse_decimal(const std::string& s);

/// "c1,c2,c3" (comma-separated decimals, no spaces).
Coeffs parse_coeffs(const std::string& s);
std::string coeffs_to_string(const Coeffs& c);

/// "START:STOP:COUNT" -> COUNT log-spaced values from START to STOP.
std::vector<double> parse_nu_grid(const std::string& s);

/// "A,B" -> single-interval window.
Window parse_window(const std::string& s);

// --- CSV -------------------------------------------------------------------

void write_profile_csv(const std::filesystem::path& path,
                       const SolutionProfile& p); // header x,U,dUdx
void write_euler_csv(const std::filesystem::path& path,
                     const EulerProfile& p); // header x,V
void write_matched_csv(const std::filesystem::path& path, const LayerSpec& s,
                       std::span<const double> grid); // header x,Utilde

struct ProfileCsv {
    std::vector<double> x, U, dUdx;
};
ProfileCsv read_profile_csv(const std::filesystem::path& path);

// --- JSON ------------------------------------------------------------------

nlohmann::json to_json(const Coeffs& c);
Coeffs coeffs_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Regime& r);
nlohmann::json to_json(const SolutionProfile& p);
SolutionProfile profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const NonconvWitness& w);

// --- checksums ---------------------------------------------------------

std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

} // namespace visclimit
