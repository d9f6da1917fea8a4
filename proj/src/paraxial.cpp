#include "talbot/paraxial.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "json.hpp"

#include "talbot/error.hpp"
#include "talbot/gauss.hpp"

namespace talbot {

namespace {

void require_coprime(const Rational& r) {
    if (r.q < 1) throw DomainError("rational plane needs q >= 1");
    if (std::gcd(r.p, r.q) != 1) throw NotCoprime(r.p, r.q);
}

long long mod(long long a, long long m) {
    const long long r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

cplx cis_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0) return {1.0, 0.0};
    if (r == 0.5) return {0.0, 1.0};
    if (r == 1.0) return {-1.0, 0.0};
    if (r == 1.5) return {0.0, -1.0};
    return std::polar(1.0, std::numbers::pi * r);
}

cplx paraxial_field(double xi, double zeta, const Grating& g, int N) {
    if (N < 0) throw DomainError("paraxial truncation must be nonnegative");
    double xr = std::fmod(xi, 1.0);
    if (xr < 0) xr += 1.0;
    double zr = std::fmod(zeta, 2.0);
    if (zr < 0) zr += 2.0;
    cplx sum = g.coeff(0);
    for (int n = 1; n <= N; ++n) {
        const double gn = g.coeff(n);
        if (gn == 0.0) continue;
        const double nn = static_cast<double>(n);
        // 2 cos(2 pi n xi) = e^{i pi 2 n xi} + e^{-i pi 2 n xi}.
        const double transverse = 2.0 * cis_pi(2.0 * std::fmod(nn * xr, 1.0)).real();
        sum += gn * transverse * cis_pi(std::fmod(nn * nn * zr, 2.0));
    }
    return sum;
}

std::vector<cplx> subimage_coefficients(const Rational& r) {
    require_coprime(r);
    const long long q = r.q;
    const long long p = mod(r.p, 2 * q);
    std::vector<cplx> c(static_cast<std::size_t>(q));
    for (long long k = 0; k < q; ++k)
        c[static_cast<std::size_t>(k)] = quadratic_phase_sum(p, p * q - 2 * k, 2 * q, q) / static_cast<double>(q);
    return c;
}

DeltaTrain ideal_delta_train(const Rational& r) {
    const std::vector<cplx> c = subimage_coefficients(r);
    DeltaTrain train;
    train.q = r.q;
    const long long two_q = 2 * r.q;
    const long long shift = mod(mod(r.nu + r.p, 2) * r.q, two_q);
    for (long long m = 0; m < r.q; ++m) {
        const long long num = mod(2 * m - shift, two_q);
        train.entries.push_back({static_cast<double>(num) / static_cast<double>(two_q), c[static_cast<std::size_t>(m)]});
    }
    return train;
}

std::string DeltaTrain::to_json() const {
    nlohmann::json j;
    j["q"] = q;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) j["entries"].push_back({{"xi", e.xi}, {"re", e.weight.real()}, {"im", e.weight.imag()}});
    return j.dump();
}

}  // namespace talbot
