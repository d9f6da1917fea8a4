#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "talbot/error.hpp"
#include "talbot/parallel.hpp"
#include "talbot/render.hpp"
#include "talbot/stationary.hpp"
#include "talbot/transient.hpp"

using namespace talbot;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("talbot-render-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("mode names round-trip") {
    for (CarpetMode m : {CarpetMode::Transient, CarpetMode::StationaryEnvelope, CarpetMode::Paraxial})
        CHECK(carpet_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(carpet_mode_from_string("hologram"), DomainError);
}

TEST_CASE("a grating with only the mean gives flat rows") {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(5, 2);
    const Grating g = Grating::custom({1.0});
    const GridSpec spec{16, 8, std::nullopt, std::nullopt};
    for (CarpetMode m : {CarpetMode::StationaryEnvelope, CarpetMode::Paraxial}) {
        const FieldGrid fg = render_carpet(cfg, g, m, spec, 0);
        for (double v : fg.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
    const FieldGrid tr = render_carpet(cfg, g, CarpetMode::Transient, spec, 0);
    for (int j = 0; j < tr.nz; ++j) {
        const auto row = tr.row(j);
        const double expected = tr.z(j) < tr.t ? std::pow(std::sin(cfg.omega() * (tr.t - tr.z(j))), 2) : 0.0;
        for (double v : row) CHECK(v == doctest::Approx(expected).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("grid geometry") {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(5, 2);
    const Grating g = Grating::ronchi(cfg, 25);
    const FieldGrid fg = render_carpet(cfg, g, CarpetMode::StationaryEnvelope, {8, 5, std::nullopt, std::nullopt}, 25);
    CHECK(fg.values.size() == 40);
    CHECK(fg.x(0) == 0.0);
    CHECK(fg.x(4) == 0.5);
    CHECK(fg.z(0) == 0.0);
    CHECK(fg.z(4) == cfg.talbot_distance());
    const FieldGrid px = render_carpet(cfg, g, CarpetMode::Paraxial, {8, 5, std::nullopt, std::nullopt}, 25);
    CHECK(px.z(4) == 2.0);
    const FieldGrid tr = render_carpet(cfg, g, CarpetMode::Transient, {8, 5, std::nullopt, std::nullopt}, 25);
    CHECK(tr.t == 2 * cfg.talbot_distance());
    CHECK_THROWS(render_carpet(cfg, g, CarpetMode::Paraxial, {1, 5, std::nullopt, std::nullopt}, 25));
}

TEST_CASE("the half-period paraxial row splits each slit into two equal peaks") {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(50, 2);
    const Grating g = Grating::dirac_comb(1.0, 60);
    const FieldGrid fg = render_carpet(cfg, g, CarpetMode::Paraxial, {256, 2, 0.5, std::nullopt}, 60);
    const auto row = fg.row(1);
    std::vector<std::pair<double, int>> peaks;
    for (int i = 0; i < fg.nx; ++i) {
        const double l = row[static_cast<std::size_t>((i + fg.nx - 1) % fg.nx)];
        const double r = row[static_cast<std::size_t>((i + 1) % fg.nx)];
        const double v = row[static_cast<std::size_t>(i)];
        if (v > l && v >= r) peaks.push_back({v, i});
    }
    std::sort(peaks.rbegin(), peaks.rend());
    REQUIRE(peaks.size() >= 2);
    CHECK(peaks[0].first == doctest::Approx(peaks[1].first).epsilon(1e-10));
    CHECK(peaks[2 % peaks.size()].first < 0.2 * peaks[0].first);
    CHECK(std::abs(peaks[0].second - peaks[1].second) == fg.nx / 2);
}

TEST_CASE("carpets are mirror-symmetric about x = 0") {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(5, 2);
    const Grating g = Grating::ronchi(cfg, 25);
    for (CarpetMode m : {CarpetMode::Transient, CarpetMode::StationaryEnvelope, CarpetMode::Paraxial}) {
        const FieldGrid fg = render_carpet(cfg, g, m, {32, 6, std::nullopt, std::nullopt}, 25);
        const double scale = *std::max_element(fg.values.begin(), fg.values.end());
        for (int j = 0; j < fg.nz; ++j)
            for (int i = 1; i < fg.nx; ++i) CHECK(std::abs(fg.at(j, i) - fg.at(j, fg.nx - i)) <= 1e-10 * scale);
    }
}

TEST_CASE("results do not depend on the thread count") {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(5, 2);
    const Grating g = Grating::ronchi(cfg, 25);
    ThreadPool one(1), four(4);
    for (CarpetMode m : {CarpetMode::Transient, CarpetMode::StationaryEnvelope}) {
        const GridSpec spec{24, 12, std::nullopt, std::nullopt};
        const auto a = render_carpet(cfg, g, m, spec, 25, quad::QuadratureSpec::relaxed(), &one);
        const auto b = render_carpet(cfg, g, m, spec, 25, quad::QuadratureSpec::relaxed(), &four);
        const auto c = render_carpet(cfg, g, m, spec, 25);
        CHECK(a.values == b.values);
        CHECK(a.values == c.values);
    }
}

TEST_CASE("late transient field follows the stationary envelope") {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(5.5, 2);
    const Grating g = Grating::ronchi(cfg, 28);
    const double t = 40 * cfg.talbot_distance();
    const FieldGrid tr = render_carpet(cfg, g, CarpetMode::Transient, {16, 5, cfg.talbot_distance(), t}, 28,
                                       {1e-10, 1e-12});
    for (int j = 0; j < tr.nz; ++j)
        for (int i = 0; i < tr.nx; ++i) {
            const cplx U = stationary_field(tr.x(i), tr.z(j), g, cfg, 28);
            const double u = (U * std::polar(1.0, std::fmod(cfg.omega() * t, 2 * M_PI))).imag();
            CHECK(std::sqrt(tr.at(j, i)) == doctest::Approx(std::abs(u)).scale(1.0).epsilon(0.05));
        }
}

TEST_CASE("CSV export round-trips exactly") {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(5, 2);
    const Grating g = Grating::ronchi(cfg, 25);
    const FieldGrid fg = render_carpet(cfg, g, CarpetMode::StationaryEnvelope, {10, 4, std::nullopt, std::nullopt}, 25);
    const fs::path p = scratch("grid.csv");
    export_grid(fg, ExportFormat::Csv, p);
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,z,value");
    std::size_t k = 0;
    while (std::getline(in, line)) {
        std::istringstream s(line);
        std::string x, z, v;
        std::getline(s, x, ',');
        std::getline(s, z, ',');
        std::getline(s, v);
        const int j = static_cast<int>(k) / fg.nx, i = static_cast<int>(k) % fg.nx;
        CHECK(std::stod(x) == fg.x(i));
        CHECK(std::stod(z) == fg.z(j));
        CHECK(std::stod(v) == fg.values[k]);
        ++k;
    }
    CHECK(k == fg.values.size());
    const auto meta = nlohmann::json::parse(slurp(scratch("grid.json")));
    CHECK(meta["nx"] == 10);
    CHECK(meta["mode"] == "envelope");
    CHECK(meta["scale"]["degenerate"] == false);
}

TEST_CASE("PGM export and degenerate scaling") {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(5, 2);
    const FieldGrid flat =
        render_carpet(cfg, Grating::custom({1.0}), CarpetMode::Paraxial, {4, 3, std::nullopt, std::nullopt}, 0);
    const fs::path p = scratch("flat.pgm");
    export_grid(flat, ExportFormat::Pgm, p);
    const std::string bytes = slurp(p);
    const std::string header = "P5\n4 3\n65535\n";
    REQUIRE(bytes.size() == header.size() + 24);
    CHECK(bytes.substr(0, header.size()) == header);
    CHECK(std::all_of(bytes.begin() + static_cast<long>(header.size()), bytes.end(), [](char c) { return c == 0; }));
    CHECK(nlohmann::json::parse(slurp(scratch("flat.json")))["scale"]["degenerate"] == true);

    const FieldGrid fg =
        render_carpet(cfg, Grating::ronchi(cfg, 25), CarpetMode::Paraxial, {8, 3, std::nullopt, std::nullopt}, 25);
    export_grid(fg, ExportFormat::Pgm, scratch("carpet.pgm"));
    const std::string px = slurp(scratch("carpet.pgm")).substr(std::string("P5\n8 3\n65535\n").size());
    unsigned hi = 0, lo = 65535;
    for (std::size_t k = 0; k < px.size(); k += 2) {
        const unsigned v = (static_cast<unsigned char>(px[k]) << 8) | static_cast<unsigned char>(px[k + 1]);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    CHECK(hi == 65535);
    CHECK(lo == 0);
    CHECK_THROWS_AS(export_grid(fg, ExportFormat::Csv, "/nonexistent-dir/x/grid.csv"), IoError);
}

TEST_CASE("Pearson correlation") {
    const std::vector<double> a = {1, 2, 3, 4}, b = {2, 4, 6, 8}, c = {4, 3, 2, 1}, k = {1, 1, 1, 1};
    CHECK(pearson(a, b) == doctest::Approx(1.0));
    CHECK(pearson(a, c) == doctest::Approx(-1.0));
    CHECK(std::isnan(pearson(a, k)));
}
