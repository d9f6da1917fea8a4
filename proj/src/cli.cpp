#include "talbot/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "talbot/error.hpp"
#include "talbot/gauss.hpp"
#include "talbot/grating.hpp"
#include "talbot/manifest.hpp"
#include "talbot/parallel.hpp"
#include "talbot/render.hpp"
#include "talbot/stationary.hpp"
#include "talbot/verify.hpp"

namespace talbot::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Flag values captured as text; only flags the user actually passed are
// copied into the manifest.
struct Flags {
    std::map<std::string, std::string> values;
    std::vector<std::pair<CLI::Option*, std::string>> bound;

    CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        CLI::Option* o = app->add_option(flag, values[key], help);
        bound.emplace_back(o, key);
        return o;
    }
    bool given(const std::string& key) const {
        for (const auto& [o, k] : bound)
            if (k == key && o->count() > 0) return true;
        return false;
    }
    void overlay(Manifest& m, const std::vector<std::string>& skip = {}) const {
        for (const auto& [o, k] : bound) {
            if (o->count() == 0) continue;
            if (std::find(skip.begin(), skip.end(), k) != skip.end()) continue;
            m.set(k, values.at(k));
        }
    }
};

struct Common {
    std::string manifest_path;
    std::string out_dir;
    std::size_t threads = 0;
};

void add_common(CLI::App* app, Common& c, Flags& f, bool physical) {
    app->add_option("--manifest", c.manifest_path, "Start from a saved run manifest");
    app->add_option("--out", c.out_dir, "Output directory");
    app->add_option("--threads", c.threads, "Worker threads (default: TALBOT_THREADS or all cores)");
    f.add(app, "--profile", "profile", "desk | quick")->check(CLI::IsMember({"desk", "quick"}));
    if (!physical) return;
    f.add(app, "--d-over-lambda", "d_over_lambda", "Grating period over wavelength")->check(CLI::PositiveNumber);
    f.add(app, "--l-over-lambda", "l_over_lambda", "Slit width over wavelength")->check(CLI::PositiveNumber);
    f.add(app, "--d", "d", "Grating period (default 1)")->check(CLI::PositiveNumber);
    f.add(app, "--lambda", "lambda", "Wavelength")->check(CLI::PositiveNumber);
    f.add(app, "--l", "l", "Slit width")->check(CLI::PositiveNumber);
    f.add(app, "--A", "A", "Source amplitude (default 1)")->check(CLI::PositiveNumber);
    f.add(app, "--grating", "grating.kind", "ronchi | dirac | custom")
        ->check(CLI::IsMember({"ronchi", "dirac", "custom"}));
    f.add(app, "--coeffs", "grating.coeffs[]", "Comma-separated cosine coefficients for a custom grating");
    f.add(app, "--N", "N", "Truncation order (default ceil(5 d/lambda))")->check(CLI::NonNegativeNumber);
}

Manifest resolve(const std::string& command, const Common& c, const Flags& f, bool physical) {
    Manifest m = c.manifest_path.empty() ? Manifest{} : Manifest::load(c.manifest_path);
    if (m.has("command") && m.get_string("command") != command)
        throw UsageError("--manifest: file was written by '" + m.get_string("command") + "', not '" + command + "'");
    m.set("command", command);
    f.overlay(m, {"d_over_lambda", "l_over_lambda"});
    m.set_default("profile", std::string("desk"));
    if (!physical) return m;

    m.set_default("d", 1.0);
    const double d = m.get_double("d");
    if (f.given("d_over_lambda")) {
        if (f.given("lambda")) throw UsageError("--d-over-lambda and --lambda are mutually exclusive");
        m.set("lambda", d / std::stod(f.values.at("d_over_lambda")));
    }
    m.set_default("lambda", d / 10.0);
    const double lambda = m.get_double("lambda");
    if (f.given("l_over_lambda")) {
        if (f.given("l")) throw UsageError("--l-over-lambda and --l are mutually exclusive");
        m.set("l", std::stod(f.values.at("l_over_lambda")) * lambda);
    }
    m.set_default("l", std::min(d, 2.0 * lambda));
    m.set_default("A", 1.0);
    m.set_default("grating.kind", std::string("ronchi"));
    const PhysicalConfig cfg = physical_config(m);
    if (m.get_string("grating.kind") == "custom") {
        if (!m.has("grating.coeffs[]")) throw UsageError("--grating custom needs --coeffs");
        m.set_default("N", static_cast<long long>(m.get_list("grating.coeffs[]").size()) - 1);
    }
    m.set_default("N", truncation_order(cfg));
    return m;
}

bool quick(const Manifest& m) { return m.get_string("profile") == "quick"; }

fs::path prepare_out(const Common& c, const std::string& fallback) {
    const fs::path dir = c.out_dir.empty() ? fs::path(fallback) : fs::path(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream o(path, std::ios::binary | std::ios::trunc);
    if (!o) throw IoError("cannot open '" + path.string() + "' for writing");
    o << text;
    if (!o) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------- commands

int cmd_carpet(const Manifest& m, const fs::path& dir, ThreadPool& pool, std::ostream& out) {
    const PhysicalConfig cfg = physical_config(m);
    const int N = static_cast<int>(m.get_int("N"));
    const Grating g = grating_from_manifest(m, cfg, N);
    const CarpetMode mode = carpet_mode_from_string(m.get_string("carpet.mode"));
    GridSpec grid;
    grid.nx = static_cast<int>(m.get_int("carpet.nx"));
    grid.nz = static_cast<int>(m.get_int("carpet.nz"));
    if (m.has("carpet.z_max")) grid.z_max = m.get_double("carpet.z_max");
    if (m.has("carpet.t")) grid.t = m.get_double("carpet.t");
    quad::QuadratureSpec spec = quad::QuadratureSpec::relaxed();
    spec.rel_tol = m.get_double("quad.rel_tol");
    spec.abs_tol = m.get_double("quad.abs_tol");

    FieldGrid fg = render_carpet(cfg, g, mode, grid, N, spec, &pool);
    fg.meta = m.serialize();
    const std::string fmt = m.get_string("carpet.format");
    if (fmt == "csv" || fmt == "both") export_grid(fg, ExportFormat::Csv, dir / "carpet.csv");
    if (fmt == "pgm" || fmt == "both") export_grid(fg, ExportFormat::Pgm, dir / "carpet.pgm");
    export_grid(fg, ExportFormat::JsonMeta, dir / "carpet.json");
    out << "carpet " << to_string(mode) << ' ' << fg.nx << 'x' << fg.nz << " written to " << dir.string() << '\n';
    if (mode != CarpetMode::Transient)
        out << "first/last row Pearson r = " << std::setprecision(6) << pearson(fg.row(0), fg.row(fg.nz - 1)) << '\n';
    return kExitOk;
}

int cmd_energy(const Manifest& m, const fs::path& dir, std::ostream& out) {
    const PhysicalConfig cfg = physical_config(m);
    const int N = static_cast<int>(m.get_int("N"));
    const Grating g = grating_from_manifest(m, cfg, N);
    const double z_max = m.get_double("energy.z_max");
    const int samples = static_cast<int>(m.get_int("energy.samples"));
    if (samples < 2) throw UsageError("--samples must be at least 2");
    std::ostringstream csv;
    csv << "z,energy\n";
    for (int j = 0; j < samples; ++j) {
        const double z = z_max * j / (samples - 1);
        csv << format_double(z) << ',' << format_double(energy_density(z, g, cfg, N)) << '\n';
    }
    write_text(dir / "energy.csv", csv.str());
    out << std::setprecision(17) << "E(0) = " << energy_density(0.0, g, cfg, N) << '\n'
        << "E(inf) = " << energy_density_limit(g, cfg, N) << '\n'
        << "E(z_max) = " << energy_density(z_max, g, cfg, N) << '\n';
    return kExitOk;
}

int cmd_gauss(const Manifest& m, std::ostream& out) {
    const long long p = m.get_int("gauss.p");
    const long long q = m.get_int("gauss.q");
    json j;
    if (m.get_string("gauss.half", "false") == "true") {
        const long long mm = m.get_int("gauss.m");
        const cplx v = gauss_half(p, mm, q);
        j = {{"sum", "G(p/2, pq/2 - m, q)"}, {"p", p}, {"m", mm}, {"q", q}, {"re", v.real()}, {"im", v.imag()},
             {"magnitude", std::abs(v)}, {"closed_form", std::sqrt(static_cast<double>(q))}};
    } else {
        const long long r = m.get_int("gauss.r");
        const GaussSumResult res = gauss_sum(p, r, q);
        j = {{"sum", "G(p, r, q)"}, {"p", p}, {"r", r}, {"q", q}, {"re", res.value.real()},
             {"im", res.value.imag()}, {"magnitude", std::abs(res.value)},
             {"closed_form", res.magnitude_closed_form}, {"branch", std::string(to_string(res.branch))}};
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_coeffs(const Manifest& m, const fs::path* dir, std::ostream& out) {
    const PhysicalConfig cfg = physical_config(m);
    const int N = static_cast<int>(m.get_int("N"));
    const Grating g = grating_from_manifest(m, cfg, N);
    std::ostringstream csv;
    csv << "n,k_n,g_n,regime\n";
    for (int n = 0; n <= N; ++n)
        csv << n << ',' << format_double(cfg.k(n)) << ',' << format_double(g.coeff(n)) << ','
            << (regime(n, cfg) == Regime::Propagating ? "propagating" : "evanescent") << '\n';
    out << csv.str();
    if (dir) write_text(*dir / "coeffs.csv", csv.str());
    return kExitOk;
}

// ------------------------------------------------------------------ checks

json check_gauss(bool fast) {
    const long long qmax = fast ? 60 : 200;
    double worst_closed = 0.0, worst_zero = 0.0, worst_half = 0.0;
    long long triples = 0, zeros = 0;
    for (long long q = 1; q <= qmax; ++q) {
        const double tol = 1e-9 * std::sqrt(static_cast<double>(q));
        for (long long p = 1; p <= q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            for (long long r = 0; r < q; ++r) {
                const double closed = gauss_magnitude(p, r, q);
                const double dev = std::abs(std::abs(gauss_sum_direct(p, r, q)) - closed);
                worst_closed = std::max(worst_closed, dev / tol);
                if (closed == 0.0) {
                    ++zeros;
                    worst_zero = std::max(worst_zero, dev);
                }
                worst_half = std::max(worst_half,
                                      std::abs(std::abs(gauss_half(p, r, q)) - std::sqrt(static_cast<double>(q))) / tol);
                ++triples;
            }
        }
    }
    const bool pass = worst_closed <= 1.0 && worst_zero <= 1e-9 && worst_half <= 1.0;
    return {{"check", "gauss"},
            {"params", {{"q_max", qmax}}},
            {"metrics",
             {{"triples", triples}, {"zero_cases", zeros}, {"max_closed_form_dev_over_tol", worst_closed},
              {"max_zero_case_abs", worst_zero}, {"max_half_dev_over_tol", worst_half}}},
            {"pass", pass}};
}

json check_laplace(bool) {
    const std::vector<double> ks = {0.5, 1.0, 5.0}, zs = {0.3, 1.0}, ss = {0.5, 1.0, 2.0};
    double worst = 0.0;
    for (double k : ks)
        for (double z : zs) worst = std::max(worst, check_laplace_identity(k, z, ss));
    return {{"check", "laplace"},
            {"params", {{"k", ks}, {"z", zs}, {"s", ss}}},
            {"metrics", {{"max_rel_error", worst}}},
            {"pass", worst <= 1e-6}};
}

json check_decay(bool fast, ThreadPool& pool) {
    const PhysicalConfig cfg = PhysicalConfig::from_ratios(5.0, 2.0);
    const double z = cfg.d();
    const int points = fast ? 7 : 13;
    const double decades = fast ? 2.0 : 3.0;
    std::vector<double> ts;
    for (int i = 0; i < points; ++i) ts.push_back(10.0 * z * std::pow(10.0, decades * i / (points - 1)));
    json regimes = json::array();
    bool pass = true;
    for (int n : {1, 5, 26}) {
        const SlopeFit fit = check_error_decay(n, z, cfg, ts, {}, &pool);
        const bool resonant = std::abs(cfg.k(n) - cfg.omega()) <= 1e-12 * cfg.omega();
        const bool ok = fit.r_squared >= kSlopeRSquaredMin &&
                        (resonant ? std::abs(fit.slope + 0.5) <= 0.15 : fit.slope <= -0.5 + 0.15);
        pass = pass && ok;
        regimes.push_back({{"n", n}, {"k_over_omega", cfg.k(n) / cfg.omega()}, {"slope", fit.slope},
                           {"r_squared", fit.r_squared}, {"pass", ok}});
    }
    return {{"check", "error-decay"},
            {"params", {{"d_over_lambda", 5}, {"z", z}, {"t_over_z", {ts.front() / z, ts.back() / z}}, {"points", points}}},
            {"metrics", {{"regimes", regimes}}},
            {"pass", pass}};
}

json check_l2(bool) {
    const PhysicalConfig cfg(1.0, 0.01, 0.5);
    const Grating g = Grating::ronchi(cfg, 4000);
    const std::vector<double> eps = {1.0 / 5, 1.0 / 10, 1.0 / 20, 1.0 / 50, 1.0 / 100};
    const auto seq = check_l2_convergence(g, 0.5, eps);
    bool decreasing = true;
    json dist = json::array();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        dist.push_back({{"eps", seq[i].first}, {"l2", seq[i].second}});
        if (i && !(seq[i].second < seq[i - 1].second)) decreasing = false;
    }
    const double ratio = seq.back().second / seq.front().second;
    return {{"check", "l2"},
            {"params", {{"grating", "ronchi d/l=2"}, {"zeta", 0.5}, {"order", g.order()}}},
            {"metrics", {{"distances", dist}, {"strictly_decreasing", decreasing}, {"final_over_initial", ratio},
                         {"threshold", kL2RatioThreshold}}},
            {"pass", decreasing && ratio <= kL2RatioThreshold}};
}

json dark_path_report(int nu, int N, int samples, int max_q, ThreadPool& pool) {
    const Grating g = Grating::dirac_comb(1.0, N);
    const DarkPathResult r = check_dark_path(nu, g, N, samples, max_q, &pool);
    return {{"check", "dark-path"},
            {"params", {{"nu", nu}, {"N", N}, {"samples", samples}, {"max_q", max_q}}},
            {"metrics", {{"path_mean_intensity", r.path_mean_intensity},
                         {"carpet_mean_intensity", r.carpet_mean_intensity},
                         {"ratio", r.ratio()},
                         {"path_points", r.path_points},
                         {"threshold", kDarkPathRatioThreshold}}},
            {"pass", r.ratio() <= kDarkPathRatioThreshold}};
}

int cmd_verify(const Manifest& m, const fs::path& dir, ThreadPool& pool, std::ostream& out) {
    const std::string which = m.get_string("verify.check");
    const bool fast = quick(m);
    std::vector<std::pair<std::string, std::function<json()>>> checks = {
        {"laplace", [&] { return check_laplace(fast); }},
        {"error-decay", [&] { return check_decay(fast, pool); }},
        {"l2", [&] { return check_l2(fast); }},
        {"dark-path", [&] { return dark_path_report(0, 60, fast ? 128 : 256, 9, pool); }},
        {"gauss", [&] { return check_gauss(fast); }},
    };
    json report;
    bool pass = true;
    if (which == "all") {
        json results = json::array();
        for (auto& [name, fn] : checks) {
            json r = fn();
            pass = pass && r["pass"].get<bool>();
            results.push_back(std::move(r));
        }
        report = {{"check", "all"}, {"params", {{"profile", m.get_string("profile")}}}, {"results", results},
                  {"pass", pass}};
    } else {
        for (auto& [name, fn] : checks)
            if (name == which) report = fn();
        pass = report["pass"].get<bool>();
    }
    const std::string text = report.dump(2) + "\n";
    write_text(dir / "verify.json", text);
    out << text;
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_darkpath(const Manifest& m, const fs::path& dir, ThreadPool& pool, std::ostream& out) {
    const json r = dark_path_report(static_cast<int>(m.get_int("darkpath.nu")), static_cast<int>(m.get_int("N")),
                                    static_cast<int>(m.get_int("darkpath.samples")),
                                    static_cast<int>(m.get_int("darkpath.max_q")), pool);
    const std::string text = r.dump(2) + "\n";
    write_text(dir / "darkpath.json", text);
    out << text;
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Talbot carpets, transient and paraxial fields, Gauss sums and verification checks", "talbot"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "talbot 1.0");

    Common common;
    Flags flags;

    auto* carpet = app.add_subcommand("carpet", "Render an intensity carpet over one period");
    add_common(carpet, common, flags, true);
    flags.add(carpet, "--mode", "carpet.mode", "transient | envelope | paraxial")
        ->check(CLI::IsMember({"transient", "envelope", "paraxial"}));
    flags.add(carpet, "--nx", "carpet.nx", "Samples across one period")->check(CLI::Range(2, 1 << 16));
    flags.add(carpet, "--nz", "carpet.nz", "Rows along z")->check(CLI::Range(2, 1 << 16));
    flags.add(carpet, "--z-max", "carpet.z_max", "Last row's z (zeta for paraxial)")->check(CLI::PositiveNumber);
    flags.add(carpet, "--t", "carpet.t", "Observation time for transient carpets")->check(CLI::PositiveNumber);
    flags.add(carpet, "--format", "carpet.format", "csv | pgm | both")->check(CLI::IsMember({"csv", "pgm", "both"}));
    flags.add(carpet, "--rel-tol", "quad.rel_tol", "Quadrature relative tolerance")->check(CLI::PositiveNumber);

    auto* energy = app.add_subcommand("energy", "Period-averaged energy density E(z)");
    add_common(energy, common, flags, true);
    flags.add(energy, "--z-max", "energy.z_max", "Largest z (default z_T)")->check(CLI::PositiveNumber);
    flags.add(energy, "--samples", "energy.samples", "Number of z samples")->check(CLI::Range(2, 1 << 24));

    auto* gauss = app.add_subcommand("gauss", "Generalized quadratic Gauss sum G(p, r, q)");
    add_common(gauss, common, flags, false);
    flags.add(gauss, "--p", "gauss.p", "p")->required();
    flags.add(gauss, "--r", "gauss.r", "r");
    flags.add(gauss, "--q", "gauss.q", "q >= 1")->required()->check(CLI::PositiveNumber);
    flags.add(gauss, "--m", "gauss.m", "m for the half-integer sum");
    bool half = false;
    gauss->add_flag("--half", half, "Evaluate G(p/2, pq/2 - m, q)");

    auto* verify = app.add_subcommand("verify", "Run numerical verification checks");
    add_common(verify, common, flags, false);
    flags.add(verify, "--check", "verify.check", "laplace | error-decay | l2 | dark-path | gauss | all")
        ->check(CLI::IsMember({"laplace", "error-decay", "l2", "dark-path", "gauss", "all"}));

    auto* darkpath = app.add_subcommand("darkpath", "Paraxial intensity along a dark path of a Dirac comb");
    add_common(darkpath, common, flags, false);
    flags.add(darkpath, "--nu", "darkpath.nu", "Path index nu");
    flags.add(darkpath, "--N", "N", "Dirac comb truncation (default 60)")->check(CLI::PositiveNumber);
    flags.add(darkpath, "--samples", "darkpath.samples", "Carpet grid resolution (>= 100)");
    flags.add(darkpath, "--max-q", "darkpath.max_q", "Largest odd denominator on the path");

    auto* coeffs = app.add_subcommand("coeffs", "List grating coefficients and mode regimes");
    add_common(coeffs, common, flags, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        const bool physical = name == "carpet" || name == "energy" || name == "coeffs";
        Manifest m = resolve(name, common, flags, physical);
        if (half) m.set("gauss.half", std::string("true"));
        const bool fast = quick(m);
        ThreadPool pool(common.threads ? common.threads : default_thread_count());

        if (name == "carpet") {
            const PhysicalConfig cfg = physical_config(m);
            m.set_default("carpet.mode", std::string("envelope"));
            m.set_default("carpet.nx", fast ? 128 : 512);
            m.set_default("carpet.nz", fast ? 128 : 512);
            m.set_default("carpet.format", std::string("both"));
            m.set_default("quad.rel_tol", 1e-6);
            m.set_default("quad.abs_tol", 1e-9);
            if (m.get_string("carpet.mode") == "transient") m.set_default("carpet.t", 2.0 * cfg.talbot_distance());
            const fs::path dir = prepare_out(common, "talbot-out");
            m.save(dir / "manifest.txt");
            return cmd_carpet(m, dir, pool, out);
        }
        if (name == "energy") {
            m.set_default("energy.z_max", physical_config(m).talbot_distance());
            m.set_default("energy.samples", fast ? 21 : 101);
            const fs::path dir = prepare_out(common, "talbot-out");
            m.save(dir / "manifest.txt");
            return cmd_energy(m, dir, out);
        }
        if (name == "gauss") {
            if (m.get_string("gauss.half", "false") == "true") {
                if (!m.has("gauss.m")) throw UsageError("--half needs --m");
            } else if (!m.has("gauss.r")) {
                throw UsageError("--r is required unless --half is given");
            }
            if (!common.out_dir.empty()) m.save(prepare_out(common, "") / "manifest.txt");
            return cmd_gauss(m, out);
        }
        if (name == "verify") {
            m.set_default("verify.check", std::string("all"));
            const fs::path dir = prepare_out(common, "talbot-out");
            m.save(dir / "manifest.txt");
            return cmd_verify(m, dir, pool, out);
        }
        if (name == "darkpath") {
            m.set_default("darkpath.nu", 0);
            m.set_default("N", 60);
            m.set_default("darkpath.samples", fast ? 128 : 256);
            m.set_default("darkpath.max_q", 9);
            const fs::path dir = prepare_out(common, "talbot-out");
            m.save(dir / "manifest.txt");
            return cmd_darkpath(m, dir, pool, out);
        }
        if (name == "coeffs") {
            if (common.out_dir.empty()) return cmd_coeffs(m, nullptr, out);
            const fs::path dir = prepare_out(common, "");
            m.save(dir / "manifest.txt");
            return cmd_coeffs(m, &dir, out);
        }
    } catch (const UsageError& e) {
        err << "talbot " << name << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "talbot " << name << ": invalid parameters: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NotCoprime& e) {
        err << "talbot " << name << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const NonConvergence& e) {
        err << "talbot " << name << ": " << e.what() << " (partial value " << e.partial_value() << ", error estimate "
            << e.err_estimate() << ")\n";
        return kExitCheckFailed;
    } catch (const Error& e) {
        err << "talbot " << name << ": " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitUsage;
}

}  // namespace talbot::cli
