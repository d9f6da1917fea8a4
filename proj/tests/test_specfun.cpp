#include "doctest.h"

#include <cmath>
#include <numbers>

#include "talbot/error.hpp"
#include "talbot/quadrature.hpp"
#include "talbot/specfun.hpp"

using namespace talbot;
using specfun::bessel_j;

TEST_CASE("Bessel values at the origin") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(specfun::j1_over_x(0.0) == 0.5);
}

TEST_CASE("J1 near its first zero matches the integral representation") {
    const double x = 2.404825557695773;
    const auto r = quad::integrate_oscillatory(
        [x](double th) { return std::cos(th - x * std::sin(th)) / std::numbers::pi; }, 0, std::numbers::pi,
        {1e-15, 1e-17});
    CHECK(std::abs(bessel_j(1, x) - r.value) <= 1e-14);
    const auto r0 = quad::integrate_oscillatory(
        [x](double th) { return std::cos(x * std::sin(th)) / std::numbers::pi; }, 0, std::numbers::pi,
        {1e-15, 1e-17});
    CHECK(std::abs(bessel_j(0, x) - r0.value) <= 1e-14);
}

TEST_CASE("three-term recurrence residual on a log grid") {
    double worst = 0;
    for (int i = 0; i <= 200; ++i) {
        const double x = 0.1 * std::pow(1000.0, i / 200.0);
        worst = std::max(worst, std::abs(bessel_j(0, x) + bessel_j(2, x) - 2.0 / x * bessel_j(1, x)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("j1_over_x agrees with J1(x)/x and is smooth below the cutover") {
    for (double x = 1e-4; x < 1e4; x *= 1.37) {
        const double ref = bessel_j(1, x) / x;
        CHECK(std::abs(specfun::j1_over_x(x) - ref) <= 1e-12 * std::abs(ref) + 1e-300);
    }
    for (double x : {1e-9, 1e-6, 5e-4, 9.99e-4}) {
        CHECK(std::abs(specfun::j1_over_x(x) - 0.5) <= x * x);
    }
}

TEST_CASE("negative arguments are domain errors") {
    CHECK_THROWS_AS(bessel_j(-1, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(0, -1.0), DomainError);
}

TEST_CASE("modulus and phase reproduce J and Y on both sides of the switch") {
    for (int order : {0, 1}) {
        for (double x : {0.5, 3.0, 19.9, 20.0, 20.1, 57.0, 1e3, 1e5}) {
            const auto mp = specfun::bessel_modulus_phase(order, x);
            const double theta = x - (order / 2.0 + 0.25) * std::numbers::pi + mp.phase_correction;
            const double tol = 1e-12 * mp.modulus;
            CHECK(std::abs(mp.modulus * std::cos(theta) - bessel_j(order, x)) <= tol * std::max(1.0, x / 1e3));
            CHECK(std::abs(mp.modulus * std::sin(theta) - specfun::bessel_y(order, x)) <=
                  tol * std::max(1.0, x / 1e3));
        }
    }
}

TEST_CASE("large-argument modulus tends to sqrt(2/(pi x))") {
    const double x = 1e6;
    const auto mp = specfun::bessel_modulus_phase(0, x);
    CHECK(mp.modulus == doctest::Approx(std::sqrt(2 / (std::numbers::pi * x))).epsilon(1e-12));
    CHECK(std::abs(mp.phase_correction) < 1e-6);
}
