#include "talbot/specfun.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "talbot/error.hpp"

namespace talbot::specfun {

namespace {

void check_args(int order, double x) {
    if (order < 0) throw DomainError("Bessel order must be non-negative, got " + std::to_string(order));
    if (!(x >= 0.0)) throw DomainError("Bessel argument must be non-negative");
}

// sum_k i^k a_k(nu) x^-k, truncated at its smallest term.
std::complex<double> hankel_series(int order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double p = 1.0;
    double q = 0.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term) || next == 0.0) break;
        term = next;
        // i^k cycles 1, i, -1, -i.
        switch (k % 4) {
            case 0: p += term; break;
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
        }
        if (std::abs(term) < 1e-18) break;
    }
    return {p, q};
}

}  // namespace

double bessel_j(int order, double x) {
    check_args(order, x);
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    return boost::math::cyl_bessel_j(order, x);
}

double j1_over_x(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-3) {
        // 1/2 - x^2/16 + x^4/384 - x^6/18432
        const double x2 = x * x;
        return 0.5 + x2 * (-1.0 / 16.0 + x2 * (1.0 / 384.0 - x2 / 18432.0));
    }
    return boost::math::cyl_bessel_j(1, ax) / ax;
}

double bessel_y(int order, double x) {
    check_args(order, x);
    if (x == 0.0) throw DomainError("Y_n is singular at x = 0");
    return boost::math::cyl_neumann(order, x);
}

ModulusPhase bessel_modulus_phase(int order, double x) {
    if (order != 0 && order != 1) throw DomainError("modulus/phase form is provided for orders 0 and 1");
    if (!(x > 0.0)) throw DomainError("modulus/phase form needs x > 0");
    constexpr double pi = std::numbers::pi;
    if (x >= kHankelAsymptoticThreshold) {
        const std::complex<double> s = hankel_series(order, x);
        return {std::sqrt(2.0 / (pi * x)) * std::abs(s), std::arg(s)};
    }
    const double j = boost::math::cyl_bessel_j(order, x);
    const double y = boost::math::cyl_neumann(order, x);
    const double base = x - (0.5 * order + 0.25) * pi;
    return {std::hypot(j, y), std::remainder(std::atan2(y, j) - base, 2.0 * pi)};
}

}  // namespace talbot::specfun
