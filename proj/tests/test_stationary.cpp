#include "doctest.h"

#include <quadmath.h>

#include <cmath>
#include <numbers>
#include <random>

#include "talbot/error.hpp"
#include "talbot/quadrature.hpp"
#include "talbot/stationary.hpp"

using namespace talbot;
constexpr double pi = std::numbers::pi;

namespace {

// Quad-precision evaluation of the same truncated mode sum.
cplx envelope_quad(double x, double z, const Grating& g, const PhysicalConfig& cfg, int N) {
    const __float128 qpi = M_PIq;
    const __float128 omega = 2 * qpi / cfg.lambda();
    __float128 re = 0, im = 0;
    for (int n = 0; n <= N; ++n) {
        const __float128 k = 2 * qpi * n / cfg.d();
        const __float128 amp = (n == 0 ? 1 : 2) * static_cast<__float128>(g.coeff(n)) * cosq(k * x);
        const __float128 diff = omega * omega - k * k;
        if (diff >= 0) {
            const __float128 kz = sqrtq(diff) * z;
            re += amp * cosq(kz);
            im -= amp * sinq(kz);
        } else {
            re += amp * expq(-sqrtq(-diff) * z);
        }
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

TEST_CASE("regimes and longitudinal wavenumbers") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(5, 2);
    CHECK(regime(0, c) == Regime::Propagating);
    CHECK(regime(5, c) == Regime::Propagating);
    CHECK(regime(6, c) == Regime::Evanescent);
    CHECK(longitudinal_wavenumber(5, c) == 0.0);
    CHECK(longitudinal_wavenumber(0, c) == doctest::Approx(c.omega()));
    CHECK(longitudinal_wavenumber(6, c) == doctest::Approx(std::sqrt(c.k(6) * c.k(6) - c.omega() * c.omega())));
}

TEST_CASE("z = 0 reproduces the truncated grating") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(5, 2);
    const Grating g = Grating::ronchi(c, 25);
    for (double x = 0; x < 1; x += 0.05) {
        const cplx u = stationary_field(x, 0.0, g, c, 25);
        CHECK(u.real() == doctest::Approx(g.profile(x, c)).epsilon(1e-12));
        CHECK(u.imag() == 0.0);
    }
    CHECK_THROWS_AS(stationary_field(0.1, -1.0, g, c, 25), DomainError);
}

TEST_CASE("propagating modes only change phase") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(20, 2);
    for (double z : {0.3, 7.0, 1e3}) {
        const auto L = longitudinal_factors(z, c, 30);
        for (int n = 0; n <= 30; ++n) {
            if (regime(n, c) == Regime::Propagating)
                CHECK(std::abs(L[static_cast<std::size_t>(n)]) == doctest::Approx(1.0).epsilon(1e-14));
            else
                CHECK(std::abs(L[static_cast<std::size_t>(n)]) < 1.0);
        }
    }
}

TEST_CASE("rows agree with pointwise evaluation") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(10, 2);
    const Grating g = Grating::ronchi(c, 50);
    std::vector<double> xs;
    for (int i = 0; i < 64; ++i) xs.push_back(i / 64.0);
    const auto row = stationary_row(xs, 3.7, g, c, 50);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(std::abs(row[i] - stationary_field(xs[i], 3.7, g, c, 50)) <= 1e-12);
}

TEST_CASE("energy density equals the x-average of |U|^2") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(5, 2);
    const Grating g = Grating::ronchi(c, 25);
    for (double z : {0.0, 0.01, 0.1, 1.0, 10.0}) {
        const auto r = quad::integrate_oscillatory([&](double x) { return std::norm(stationary_field(x, z, g, c, 25)); },
                                                   0.0, c.d(), {1e-12, 1e-14});
        CHECK(r.value / c.d() == doctest::Approx(energy_density(z, g, c, 25)).epsilon(1e-10));
    }
}

TEST_CASE("energy density decays monotonically to its limit") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(10, 3);
    const Grating g = Grating::ronchi(c, 50);
    double prev = energy_density(0.0, g, c, 50);
    for (double z = 1e-3; z < 100; z *= 1.5) {
        const double e = energy_density(z, g, c, 50);
        CHECK(e <= prev);
        prev = e;
    }
    CHECK(energy_density(1e4, g, c, 50) == doctest::Approx(energy_density_limit(g, c, 50)).epsilon(1e-12));
}

TEST_CASE("quad-precision oracle at d/lambda = 100") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(100, 2);
    const int N = 4 * truncation_order(c);
    const Grating g = Grating::ronchi(c, N);
    double scale = 0;
    for (int n = 0; n <= N; ++n) scale += fold_weight(n) * std::abs(g.coeff(n));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uz(0.0, 2.0 * c.talbot_distance());
    for (int i = 0; i < 25; ++i) {
        const double x = ux(rng), z = uz(rng);
        CHECK(std::abs(stationary_field(x, z, g, c, N) - envelope_quad(x, z, g, c, N)) <= 1e-11 * scale);
    }
}

TEST_CASE("stationary mode is Im[L_n e^{i omega t}]") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(5, 2);
    for (int n : {0, 3, 7})
        for (double t : {0.5, 3.0}) {
            const cplx L = envelope_mode(n, 1.2, c).longitudinal_factor;
            CHECK(stationary_mode(n, t, 1.2, c) ==
                  doctest::Approx((L * std::polar(1.0, c.omega() * t)).imag()).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("cosine basis equals the two-sided exponential sum") {
    const PhysicalConfig c = PhysicalConfig::from_ratios(7, 2);
    const int N = 35;
    const Grating g = Grating::ronchi(c, N);
    for (double z : {0.0, 0.4, 5.0})
        for (double x : {0.0, 0.13, 0.5, 0.77}) {
            cplx sum = 0;
            for (int n = -N; n <= N; ++n)
                sum += g.coeff(n) * std::polar(1.0, c.k(std::abs(n)) * (n < 0 ? -x : x)) *
                       envelope_mode(std::abs(n), z, c).longitudinal_factor;
            CHECK(std::abs(sum - stationary_field(x, z, g, c, N)) <= 1e-12 * N);
        }
}
