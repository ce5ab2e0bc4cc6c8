#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "visclimit/euler.hpp"
#include "visclimit/riccati.hpp"
#include "visclimit/runtime.hpp"

namespace visclimit {

// ============================================================================
// Physical fields in the meridian plane, stream-function level sets, and the
// exportable illustration datasets.
// ============================================================================

/// Minimum distance from the poles; u_theta has a 1/sin(theta) pole.
inline constexpr double kThetaMin = 1e-3;

struct FieldSample {
    double theta, r;
    double u_r, u_theta, p;
};

/// u_theta = U(cos th)/(r sin th), u_r = U'(cos th)/r.
/// Throws region_error within kThetaMin of the poles.
std::pair<double, double> velocity_from_profile(const SolutionProfile& p,
                                                double theta, double r);

/// Pressure from 2p = -u_r'' - (cot th - u_th) u_r' - u_r^2 - u_th^2 at r=1
/// via centered theta-differences (step 1e-4), scaled by r^-2.
double pressure_from_profile(const SolutionProfile& p, double theta, double r);

FieldSample field_sample(const SolutionProfile& p, double theta, double r);

/// Stream function psi(rho, z) = -r U(cos th) in the meridian half-plane
/// (rho = r sin th > 0, z = r cos th).
double stream_function(const SolutionProfile& p, double rho, double z);

struct Bbox {
    double rho_min, rho_max;
    double z_min, z_max;
};

struct StreamlineSet {
    std::vector<double> levels;
    // polylines[level_index] = list of vertex chains (rho, z)
    std::vector<std::vector<std::vector<std::array<double, 2>>>> polylines;
};

/// Marching-squares contours of psi on a raster x raster grid of the bbox;
/// vertices are bisection-refined onto the level set.
StreamlineSet streamlines(const SolutionProfile& p,
                          std::span<const double> levels, const Bbox& bbox,
                          int raster = 400, Exec exec = Exec::OpenMP);

/// Contours of an arbitrary meridian stream function (used for the inviscid
/// reference pictures).
StreamlineSet streamlines_of(const std::function<double(double, double)>& psi,
                             std::span<const double> levels, const Bbox& bbox,
                             int raster = 400, Exec exec = Exec::OpenMP);

/// Writes a minimal static SVG of a streamline set.
void write_streamlines_svg(const std::filesystem::path& path,
                           const StreamlineSet& s, const Bbox& bbox);

/// The illustration dataset: interior-branch profiles for
/// P_c(x) = 2(x-2/3)^2, x_k = 0 at nu = 1, 1/8, 1/20, 1/50, the signed and
/// glued inviscid profiles, matched layer profiles, streamline SVGs, and a
/// manifest with checksums. Returns the manifest file names.
std::vector<std::string> fig1_dataset(const std::filesystem::path& out_dir);

} // namespace visclimit
