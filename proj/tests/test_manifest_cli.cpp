#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "talbot/cli.hpp"
#include "talbot/error.hpp"
#include "talbot/manifest.hpp"

using namespace talbot;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "talbot");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("talbot-cli-" + std::to_string(::getpid())) / name;
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("manifest serialization round-trips") {
    Manifest m;
    m.set("command", std::string("carpet"));
    m.set("lambda", 0.1 + 0.2);
    m.set("N", 25);
    m.set_list("grating.coeffs[]", {1.0, 1.0 / 3, -2.5e-17});
    const Manifest back = Manifest::parse(m.serialize());
    CHECK(back.entries() == m.entries());
    CHECK(back.get_double("lambda") == 0.1 + 0.2);
    CHECK(back.get_int("N") == 25);
    CHECK(back.get_list("grating.coeffs[]") == std::vector<double>{1.0, 1.0 / 3, -2.5e-17});
    CHECK(back.serialize() == m.serialize());
    m.set_default("N", 3);
    CHECK(m.get_int("N") == 25);
    CHECK(m.get_string("missing", "x") == "x");
    CHECK_THROWS_AS(m.get_double("missing"), UsageError);
    CHECK_THROWS_AS(m.get_int("command"), UsageError);
    CHECK_THROWS_AS(Manifest::parse("no equals sign"), UsageError);
    CHECK(Manifest::parse("# only a comment\n\n  a = b  \n").get_string("a") == "b");
}

TEST_CASE("physical config and grating from a manifest") {
    Manifest m;
    store_physical_config(m, PhysicalConfig(2.0, 0.1, 0.5, 3.0));
    const PhysicalConfig c = physical_config(m);
    CHECK(c.d() == 2.0);
    CHECK(c.lambda() == 0.1);
    CHECK(c.l() == 0.5);
    CHECK(c.A() == 3.0);
    m.set("grating.kind", std::string("custom"));
    m.set_list("grating.coeffs[]", {1.0, 0.5});
    const Grating g = grating_from_manifest(m, c, 4);
    CHECK(g.coeff(1) == 0.5);
    CHECK(g.coeff(3) == 0.0);
    m.set("grating.kind", std::string("ronchi"));
    CHECK(grating_from_manifest(m, c, 4).coeff(0) == 3.0);
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("gauss subcommand") {
    const Run ok = run({"gauss", "--p", "2", "--r", "7", "--q", "9"});
    CHECK(ok.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j["closed_form"].get<double>() == doctest::Approx(3.0));
    const Run bad = run({"gauss", "--p", "2", "--r", "1", "--q", "8"});
    CHECK(bad.code == cli::kExitUsage);
    CHECK(bad.err.find("gcd") != std::string::npos);
    CHECK(run({"gauss", "--p", "1", "--q", "5"}).code == cli::kExitUsage);
    CHECK(run({"gauss", "--p", "3", "--m", "2", "--q", "7", "--half"}).code == cli::kExitOk);
}

TEST_CASE("usage errors and help") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"hologram"}).code == cli::kExitUsage);
    CHECK(run({"carpet", "--mode", "hologram"}).code == cli::kExitUsage);
    CHECK(run({"carpet", "--d-over-lambda", "-3", "--out", scratch("neg").string()}).code == cli::kExitUsage);
    const Run help = run({"--help"});
    CHECK(help.code == cli::kExitOk);
    CHECK(help.out.find("carpet") != std::string::npos);
}

TEST_CASE("carpet runs are reproducible from their manifest") {
    const fs::path first = scratch("first"), second = scratch("second");
    const Run a = run({"carpet", "--profile", "quick", "--nx", "32", "--nz", "16", "--d-over-lambda", "5",
                       "--l-over-lambda", "2", "--out", first.string()});
    REQUIRE(a.code == cli::kExitOk);
    for (const char* f : {"carpet.csv", "carpet.pgm", "carpet.json", "manifest.txt"}) CHECK(fs::exists(first / f));
    const Run b = run({"carpet", "--manifest", (first / "manifest.txt").string(), "--out", second.string()});
    REQUIRE(b.code == cli::kExitOk);
    CHECK(slurp(first / "carpet.csv") == slurp(second / "carpet.csv"));
    CHECK(slurp(first / "carpet.pgm") == slurp(second / "carpet.pgm"));
    CHECK(slurp(first / "manifest.txt") == slurp(second / "manifest.txt"));
}

TEST_CASE("energy, coeffs and single verify checks") {
    const fs::path dir = scratch("misc");
    CHECK(run({"energy", "--profile", "quick", "--out", dir.string()}).code == cli::kExitOk);
    CHECK(fs::exists(dir / "energy.csv"));
    const Run c = run({"coeffs", "--grating", "custom", "--coeffs", "1,0.5,0.25"});
    CHECK(c.code == cli::kExitOk);
    CHECK(c.out.find("0.25") != std::string::npos);
    CHECK(run({"verify", "--check", "laplace", "--out", dir.string()}).code == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(dir / "verify.json"));
    CHECK(j.dump().find("laplace") != std::string::npos);
    CHECK(run({"verify", "--check", "l2", "--out", dir.string()}).code == cli::kExitCheckFailed);
}
