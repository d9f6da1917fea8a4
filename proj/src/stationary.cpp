#include "talbot/stationary.hpp"

#include <cmath>

#include "talbot/error.hpp"

namespace talbot {

namespace {

void require_z(double z) {
    if (!(z >= 0.0)) throw DomainError("propagation distance z must be >= 0");
}

}  // namespace

Regime regime(int n, const PhysicalConfig& cfg) {
    return cfg.k(n) <= cfg.omega() ? Regime::Propagating : Regime::Evanescent;
}

double longitudinal_wavenumber(int n, const PhysicalConfig& cfg) {
    const double w = cfg.omega();
    const double k = cfg.k(n);
    return std::sqrt(std::abs(w - k) * (w + k));
}

EnvelopeMode envelope_mode(int n, double z, const PhysicalConfig& cfg) {
    require_z(z);
    const Regime reg = regime(n, cfg);
    const double beta = longitudinal_wavenumber(n, cfg);
    const cplx factor = reg == Regime::Propagating ? std::polar(1.0, -z * beta) : cplx(std::exp(-z * beta), 0.0);
    return {n, reg, factor};
}

std::vector<cplx> longitudinal_factors(double z, const PhysicalConfig& cfg, int N) {
    std::vector<cplx> f(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) f[static_cast<std::size_t>(n)] = envelope_mode(n, z, cfg).longitudinal_factor;
    return f;
}

cplx stationary_field(double x, double z, const Grating& g, const PhysicalConfig& cfg, int N) {
    const double xs[1] = {x};
    return stationary_row(xs, z, g, cfg, N).front();
}

std::vector<cplx> stationary_row(std::span<const double> xs, double z, const Grating& g,
                                 const PhysicalConfig& cfg, int N) {
    if (N < 0) throw DomainError("truncation order must be nonnegative");
    const std::vector<cplx> f = longitudinal_factors(z, cfg, N);
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cplx sum = 0.0;
        for (int n = N; n >= 0; --n) {
            const double gn = g.coeff(n);
            if (gn == 0.0) continue;
            sum += fold_weight(n) * gn * std::cos(cfg.k(n) * xs[i]) * f[static_cast<std::size_t>(n)];
        }
        out[i] = sum;
    }
    return out;
}

double stationary_mode(int n, double t, double z, const PhysicalConfig& cfg) {
    require_z(z);
    const double w = cfg.omega();
    const double beta = longitudinal_wavenumber(n, cfg);
    if (regime(n, cfg) == Regime::Propagating) return std::sin(w * t - z * beta);
    return std::sin(w * t) * std::exp(-z * beta);
}

double energy_density(double z, const Grating& g, const PhysicalConfig& cfg, int N) {
    require_z(z);
    double sum = 0.0;
    for (int n = N; n >= 0; --n) {
        const double gn = g.coeff(n);
        if (gn == 0.0) continue;
        double attenuation = 1.0;
        if (regime(n, cfg) == Regime::Evanescent) attenuation = std::exp(-2.0 * z * longitudinal_wavenumber(n, cfg));
        sum += fold_weight(n) * gn * gn * attenuation;
    }
    return sum;
}

double energy_density_limit(const Grating& g, const PhysicalConfig& cfg, int N) {
    double sum = 0.0;
    for (int n = N; n >= 0; --n)
        if (regime(n, cfg) == Regime::Propagating) sum += fold_weight(n) * g.coeff(n) * g.coeff(n);
    return sum;
}

}  // namespace talbot
