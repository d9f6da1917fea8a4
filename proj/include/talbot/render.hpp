// Intensity carpets over one grating period and their export as CSV,
// 16-bit PGM and a JSON sidecar.

#ifndef TALBOT_RENDER_HPP
#define TALBOT_RENDER_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "talbot/grating.hpp"
#include "talbot/quadrature.hpp"

namespace talbot {

class ThreadPool;

enum class CarpetMode { Transient, StationaryEnvelope, Paraxial };

std::string_view to_string(CarpetMode mode);
CarpetMode carpet_mode_from_string(std::string_view s);

struct GridSpec {
    int nx = 256;
    int nz = 256;
    /// Last row's z (inclusive). Defaults: 2 z_T for transient, z_T for the
    /// envelope, zeta = 2 for paraxial.
    std::optional<double> z_max;
    /// Observation time for transient carpets; default 2 z_T.
    std::optional<double> t;
};

/// Row-major intensities: values[j * nx + i] at x_i = x0 + i (x1 - x0)/nx,
/// z_j = z0 + j (z1 - z0)/(nz - 1). Paraxial grids use (xi, zeta).
struct FieldGrid {
    int nx = 0;
    int nz = 0;
    std::pair<double, double> x_range;
    std::pair<double, double> z_range;
    std::vector<double> values;
    CarpetMode mode = CarpetMode::StationaryEnvelope;
    double t = 0.0;  // transient only
    std::string meta;

    double x(int i) const;
    double z(int j) const;
    double at(int j, int i) const { return values[static_cast<std::size_t>(j) * nx + i]; }
    std::span<const double> row(int j) const {
        return {values.data() + static_cast<std::size_t>(j) * nx, static_cast<std::size_t>(nx)};
    }
};

/// u^2 at fixed t, |U|^2, or |U_Par|^2. Rows are evaluated in parallel when
/// a pool is given; the result does not depend on the thread count.
FieldGrid render_carpet(const PhysicalConfig& cfg, const Grating& g, CarpetMode mode, const GridSpec& grid, int N,
                        const quad::QuadratureSpec& spec = quad::QuadratureSpec::relaxed(),
                        ThreadPool* pool = nullptr);

enum class ExportFormat { Csv, Pgm, JsonMeta };

/// Writes `path` in the requested format plus the JSON sidecar next to it
/// (same stem, .json). Throws IoError with the path on failure.
void export_grid(const FieldGrid& grid, ExportFormat format, const std::filesystem::path& path);

/// Sidecar contents: geometry, mode, min/max scaling and the manifest.
std::string sidecar_json(const FieldGrid& grid);

double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace talbot

#endif
