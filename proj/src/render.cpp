#include "talbot/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "talbot/error.hpp"
#include "talbot/parallel.hpp"
#include "talbot/paraxial.hpp"
#include "talbot/stationary.hpp"
#include "talbot/transient.hpp"

namespace talbot {

std::string_view to_string(CarpetMode mode) {
    switch (mode) {
        case CarpetMode::Transient: return "transient";
        case CarpetMode::StationaryEnvelope: return "envelope";
        case CarpetMode::Paraxial: return "paraxial";
    }
    return "envelope";
}

CarpetMode carpet_mode_from_string(std::string_view s) {
    if (s == "transient") return CarpetMode::Transient;
    if (s == "envelope" || s == "stationary") return CarpetMode::StationaryEnvelope;
    if (s == "paraxial") return CarpetMode::Paraxial;
    throw DomainError("unknown carpet mode '" + std::string(s) + "'");
}

double FieldGrid::x(int i) const {
    return x_range.first + (x_range.second - x_range.first) * static_cast<double>(i) / static_cast<double>(nx);
}

double FieldGrid::z(int j) const {
    if (nz < 2) return z_range.first;
    return z_range.first + (z_range.second - z_range.first) * static_cast<double>(j) / static_cast<double>(nz - 1);
}

FieldGrid render_carpet(const PhysicalConfig& cfg, const Grating& g, CarpetMode mode, const GridSpec& grid, int N,
                        const quad::QuadratureSpec& spec, ThreadPool* pool) {
    if (grid.nx < 2 || grid.nz < 2) throw DomainError("carpet grids need nx, nz >= 2");
    if (N < 0) throw DomainError("truncation order must be nonnegative");
    FieldGrid out;
    out.nx = grid.nx;
    out.nz = grid.nz;
    out.mode = mode;
    const double zt = cfg.talbot_distance();
    double z_max = 0.0;
    switch (mode) {
        case CarpetMode::Transient:
            z_max = grid.z_max.value_or(2.0 * zt);
            out.t = grid.t.value_or(2.0 * zt);
            out.x_range = {0.0, cfg.d()};
            break;
        case CarpetMode::StationaryEnvelope:
            z_max = grid.z_max.value_or(zt);
            out.x_range = {0.0, cfg.d()};
            break;
        case CarpetMode::Paraxial:
            z_max = grid.z_max.value_or(2.0);
            out.x_range = {0.0, 1.0};
            break;
    }
    if (!(z_max > 0.0)) throw DomainError("carpet z_max must be positive");
    out.z_range = {0.0, z_max};
    out.values.assign(static_cast<std::size_t>(grid.nx) * grid.nz, 0.0);

    std::vector<double> xs(static_cast<std::size_t>(grid.nx));
    for (int i = 0; i < grid.nx; ++i) xs[static_cast<std::size_t>(i)] = out.x(i);

    auto fill_row = [&](std::size_t jr) {
        const int j = static_cast<int>(jr);
        const double z = out.z(j);
        double* row = out.values.data() + jr * static_cast<std::size_t>(grid.nx);
        switch (mode) {
            case CarpetMode::Transient: {
                std::vector<ModeCoefficient> modes;
                try {
                    modes = transient_modes(out.t, z, g, cfg, N, spec);
                } catch (const NonConvergence& e) {
                    throw e.with_context("carpet row " + std::to_string(j));
                }
                for (int i = 0; i < grid.nx; ++i) {
                    const double u = transient_field_from_modes(xs[static_cast<std::size_t>(i)], modes, g);
                    row[i] = u * u;
                }
                break;
            }
            case CarpetMode::StationaryEnvelope: {
                const auto U = stationary_row(xs, z, g, cfg, N);
                for (int i = 0; i < grid.nx; ++i) row[i] = std::norm(U[static_cast<std::size_t>(i)]);
                break;
            }
            case CarpetMode::Paraxial:
                for (int i = 0; i < grid.nx; ++i) row[i] = std::norm(paraxial_field(xs[static_cast<std::size_t>(i)], z, g, N));
                break;
        }
    };
    if (pool) {
        pool->parallel_for(0, static_cast<std::size_t>(grid.nz), fill_row);
    } else {
        for (std::size_t j = 0; j < static_cast<std::size_t>(grid.nz); ++j) fill_row(j);
    }
    return out;
}

namespace {

std::pair<double, double> min_max(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return {*lo, *hi};
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    p.replace_extension(".json");
    return p;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const FieldGrid& grid, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "x,z,value\n";
    for (int j = 0; j < grid.nz; ++j) {
        const std::string zs = fmt17(grid.z(j));
        for (int i = 0; i < grid.nx; ++i) out << fmt17(grid.x(i)) << ',' << zs << ',' << fmt17(grid.at(j, i)) << '\n';
    }
    finish(out, path);
}

void write_pgm(const FieldGrid& grid, const std::filesystem::path& path) {
    const auto [lo, hi] = min_max(grid.values);
    auto out = open_out(path);
    out << "P5\n" << grid.nx << ' ' << grid.nz << "\n65535\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(grid.values.size() * 2);
    for (double v : grid.values) {
        unsigned level = 0;
        if (hi > lo) level = static_cast<unsigned>(std::lround((v - lo) / (hi - lo) * 65535.0));
        bytes.push_back(static_cast<unsigned char>(level >> 8));
        bytes.push_back(static_cast<unsigned char>(level & 0xff));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    finish(out, path);
}

}  // namespace

std::string sidecar_json(const FieldGrid& grid) {
    if (grid.values.empty()) throw DomainError("grid has no values");
    const auto [lo, hi] = min_max(grid.values);
    nlohmann::ordered_json j;
    j["nx"] = grid.nx;
    j["nz"] = grid.nz;
    j["x_range"] = {grid.x_range.first, grid.x_range.second};
    j["z_range"] = {grid.z_range.first, grid.z_range.second};
    j["mode"] = std::string(to_string(grid.mode));
    if (grid.mode == CarpetMode::Transient) j["t"] = grid.t;
    j["value"] = grid.mode == CarpetMode::Transient ? "u^2" : "|U|^2";
    j["scale"] = {{"min", lo}, {"max", hi}, {"degenerate", !(hi > lo)}, {"levels", 65535}};
    j["manifest"] = grid.meta;
    return j.dump(2) + "\n";
}

void export_grid(const FieldGrid& grid, ExportFormat format, const std::filesystem::path& path) {
    if (grid.values.size() != static_cast<std::size_t>(grid.nx) * grid.nz || grid.values.empty())
        throw DomainError("grid values do not match nx * nz");
    for (double v : grid.values)
        if (!std::isfinite(v)) throw DomainError("grid contains non-finite values");
    switch (format) {
        case ExportFormat::Csv: write_csv(grid, path); break;
        case ExportFormat::Pgm: write_pgm(grid, path); break;
        case ExportFormat::JsonMeta: break;
    }
    const auto side = format == ExportFormat::JsonMeta ? path : sidecar_path(path);
    auto out = open_out(side);
    out << sidecar_json(grid);
    finish(out, side);
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) throw DomainError("pearson needs equal-length samples");
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

}  // namespace talbot
