#include "talbot/transient.hpp"

#include <cmath>
#include <numbers>
#include <functional>
#include <limits>
#include <sstream>

#include "talbot/error.hpp"
#include "talbot/specfun.hpp"
#include "talbot/stationary.hpp"

namespace talbot {

namespace {

constexpr double pi = std::numbers::pi;

// Below k s = kSplitArgument the tail kernel is integrated as is; above it
// J1 is written as M cos(theta) and the kernel splits into two pure phases.
constexpr double kSplitArgument = 20.0;

void require_times(double t, double z) {
    if (!(t >= 0.0) || !(z >= 0.0) || !std::isfinite(t) || !std::isfinite(z))
        throw DomainError("transient evaluation needs finite t >= 0 and z >= 0");
}

std::string where(int n, double t, double z) {
    std::ostringstream s;
    s.precision(17);
    s << "transient mode n=" << n << " t=" << t << " z=" << z;
    return s.str();
}

quad::QuadratureSpec scaled(const quad::QuadratureSpec& spec, double factor) {
    quad::QuadratureSpec s = spec;
    s.abs_tol = spec.abs_tol / std::max(1.0, factor);
    return s;
}

// int_0^R J1(k r) h(t - tau(r)) / tau(r) dr with tau = sqrt(r^2 + z^2).
template <class Source>
double memory_integral(double k, double t, double z, const Source& h, const quad::QuadratureSpec& spec,
                       std::optional<double> period) {
    const double R = std::sqrt((t - z) * (t + z));
    auto f = [&](double r) {
        const double tau = std::hypot(r, z);
        // t - tau = (R - r)(R + r)/(t + tau) avoids cancellation near r = R.
        const double lag = (R - r) * (R + r) / (t + tau);
        return specfun::bessel_j(1, k * r) * h(lag) / tau;
    };
    quad::QuadratureSpec s = spec;
    s.oscillation_period_hint = period;
    return quad::integrate_oscillatory(f, 0.0, R, s).value;
}

double direct_mode(double k, double w, double t, double z, const quad::QuadratureSpec& spec) {
    const double kz = k * z;
    auto h = [w](double lag) { return std::sin(w * lag); };
    const double I = memory_integral(k, t, z, h, scaled(spec, kz), 2.0 * pi / (w + k));
    return std::sin(w * (t - z)) - kz * I;
}

// Edges u_j with psi(u_j) = j pi for an increasing phase psi, psi(0) = 0.
class PhaseEdges {
public:
    PhaseEdges(std::function<double(double)> psi, std::function<double(double)> dpsi, double origin)
        : psi_(std::move(psi)), dpsi_(std::move(dpsi)), origin_(origin) {}

    double operator()(std::size_t j) {
        if (j == 0) return origin_;
        const double target = pi * static_cast<double>(j);
        double lo = last_u_;
        double step = std::max(pi / std::max(dpsi_(lo), 1e-300), 1e-12 * (1.0 + lo));
        double hi = lo + step;
        while (psi_(hi) < target) {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
        }
        double u = 0.5 * (lo + hi);
        for (int it = 0; it < 100; ++it) {
            const double f = psi_(u) - target;
            if (f > 0.0) hi = u; else lo = u;
            const double d = dpsi_(u);
            double next = d > 0.0 ? u - f / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - u) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next)) {
                u = next;
                break;
            }
            u = next;
        }
        last_u_ = u;
        return origin_ + u;
    }

private:
    std::function<double(double)> psi_;
    std::function<double(double)> dpsi_;
    double origin_;
    double last_u_ = 0.0;
};

// T = int_t^inf J1(k s)/s sin w(t - tau) dtau for t > z > 0, k > 0.
double tail_integral(double k, double w, double t, double z, const quad::QuadratureSpec& spec) {
    const double split = std::sqrt((kSplitArgument / k) * (kSplitArgument / k) + z * z);
    const double a0 = std::max(t, split);
    double total = 0.0;

    quad::QuadratureSpec piece = spec;
    piece.abs_tol = spec.abs_tol / 4.0;
    piece.oscillation_period_hint.reset();

    auto s_of = [z](double tau) { return std::sqrt((tau - z) * (tau + z)); };
    auto sdiff = [&](double tau) { return -z * z / (s_of(tau) + tau); };             // s - tau
    auto sdiff_rate = [&](double tau) {                                             // d(s - tau)/dtau
        const double s = s_of(tau);
        return z * z / (s * (s + tau));
    };

    if (t < a0) {
        auto f = [&](double tau) { return k * specfun::j1_over_x(k * s_of(tau)) * std::sin(w * (t - tau)); };
        total += quad::integrate_oscillatory(f, t, a0, piece.with_period(2.0 * pi / (w + k))).value;
    }

    // J1(ks)/s sin(phi) = M/(2s) [sin(phi + theta) + sin(phi - theta)] with
    // phi = w(t - tau), theta = k s - 3pi/4 + delta(k s). Linear phases are
    // measured from a0 so they are formed once.
    const double wt0 = std::remainder(w * (t - a0), 2.0 * pi);
    const double ka0 = std::remainder(k * a0, 2.0 * pi);
    const bool resonant = std::abs(k - w) <= 1e-12 * (k + w);
    const double beat = resonant ? 0.0 : k - w;
    auto fast = [&](double tau) {
        const double ds = sdiff(tau);
        const double s = tau + ds;
        const double u = tau - a0;
        const auto mp = specfun::bessel_modulus_phase(1, k * s);
        const double phase = wt0 - ka0 - (w + k) * u - k * ds + 0.75 * pi - mp.phase_correction;
        return mp.modulus / (2.0 * s) * std::sin(phase);
    };
    auto slow = [&](double tau) {
        const double ds = sdiff(tau);
        const double s = tau + ds;
        const double u = tau - a0;
        const auto mp = specfun::bessel_modulus_phase(1, k * s);
        const double phase = wt0 + ka0 + beat * u + k * ds - 0.75 * pi + mp.phase_correction;
        return mp.modulus / (2.0 * s) * std::sin(phase);
    };

    {
        const double ds0 = sdiff(a0);
        PhaseEdges edges([&](double u) { return (w + k) * u + k * (sdiff(a0 + u) - ds0); },
                         [&](double u) { return (w + k) + k * sdiff_rate(a0 + u); }, a0);
        total += quad::integrate_panels(fast, std::ref(edges), piece).value;
    }

    if (resonant) {
        // No net oscillation: a monotone tau^-3/2 tail.
        total += quad::integrate_oscillatory(slow, a0, quad::kInfinity, piece).value;
    } else if (beat > 0.0) {
        const double ds0 = sdiff(a0);
        PhaseEdges edges([&](double u) { return beat * u + k * (sdiff(a0 + u) - ds0); },
                         [&](double u) { return beat + k * sdiff_rate(a0 + u); }, a0);
        total += quad::integrate_panels(slow, std::ref(edges), piece).value;
    } else {
        // Phase rate k (s - tau)' - (w - k) changes sign once, where the
        // kernel is stationary; integrate up to there directly.
        const double target = (w - k) / k;
        double b = a0;
        if (sdiff_rate(a0) > target) {
            double lo = a0;
            double hi = 2.0 * a0;
            while (sdiff_rate(hi) > target) hi *= 2.0;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (sdiff_rate(mid) > target ? lo : hi) = mid;
            }
            b = hi;
            total += quad::integrate_oscillatory(slow, a0, b, piece).value;
        }
        const double dsb = sdiff(b);
        PhaseEdges edges([&](double u) { return -beat * u - k * (sdiff(b + u) - dsb); },
                         [&](double u) { return -beat - k * sdiff_rate(b + u); }, b);
        total += quad::integrate_panels(slow, std::ref(edges), piece).value;
    }
    return total;
}

}  // namespace

double transient_tail(int n, double t, double z, const PhysicalConfig& cfg, const quad::QuadratureSpec& spec) {
    require_times(t, z);
    if (!(t > z)) throw DomainError("the tail E_n(t, z) is defined for t > z");
    const double k = cfg.k(n);
    const double kz = k * z;
    if (kz == 0.0) return 0.0;
    try {
        return kz * tail_integral(k, cfg.omega(), t, z, scaled(spec, kz));
    } catch (const NonConvergence& e) {
        throw e.with_context(where(n, t, z) + " (tail)");
    }
}

double transient_mode(int n, double t, double z, const PhysicalConfig& cfg, const quad::QuadratureSpec& spec,
                      TransientMethod method) {
    require_times(t, z);
    spec.validate();
    if (n < 0) throw DomainError("mode index must be nonnegative");
    if (!(t > z)) return 0.0;
    const double w = cfg.omega();
    const double k = cfg.k(n);
    if (k * z == 0.0) return std::sin(w * (t - z));

    if (method == TransientMethod::Auto)
        method = (w + k) * (t - z) / pi > kTailRouteOscillations ? TransientMethod::StationaryPlusTail
                                                                 : TransientMethod::Direct;
    try {
        if (method == TransientMethod::Direct) return direct_mode(k, w, t, z, spec);
    } catch (const NonConvergence& e) {
        throw e.with_context(where(n, t, z));
    }
    return stationary_mode(n, t, z, cfg) + transient_tail(n, t, z, cfg, spec);
}

double transient_mode_sampled(int n, double t, double z, const PhysicalConfig& cfg,
                              const std::function<double(double)>& h, const quad::QuadratureSpec& spec,
                              std::optional<double> period_hint) {
    require_times(t, z);
    spec.validate();
    if (!(t > z)) return 0.0;
    const double k = cfg.k(n);
    const double kz = k * z;
    if (kz == 0.0) return h(t - z);
    std::optional<double> period = period_hint;
    const double bessel_period = 2.0 * pi / k;
    if (!period || *period > bessel_period) period = bessel_period;
    try {
        return h(t - z) - kz * memory_integral(k, t, z, h, scaled(spec, kz), period);
    } catch (const NonConvergence& e) {
        throw e.with_context(where(n, t, z) + " (sampled source)");
    }
}

double ModeCache::get(int n, double t, double z, const PhysicalConfig& cfg, const quad::QuadratureSpec& spec,
                      TransientMethod method) {
    const auto key = std::make_tuple(n, t, z);
    {
        std::shared_lock lock(mutex_);
        const auto it = values_.find(key);
        if (it != values_.end()) return it->second;
    }
    const double v = transient_mode(n, t, z, cfg, spec, method);
    std::unique_lock lock(mutex_);
    return values_.emplace(key, v).first->second;
}

std::size_t ModeCache::size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
}

std::vector<ModeCoefficient> transient_modes(double t, double z, const Grating& g, const PhysicalConfig& cfg, int N,
                                             const quad::QuadratureSpec& spec, TransientMethod method) {
    if (N < 0) throw DomainError("truncation order must be nonnegative");
    std::vector<ModeCoefficient> modes;
    modes.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        const double value = g.coeff(n) == 0.0 ? 0.0 : transient_mode(n, t, z, cfg, spec, method);
        modes.push_back({n, cfg.k(n), value});
    }
    return modes;
}

double transient_field_from_modes(double x, const std::vector<ModeCoefficient>& modes, const Grating& g) {
    double sum = 0.0;
    for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
        if (it->value == 0.0) continue;
        sum += fold_weight(it->n) * g.coeff(it->n) * it->value * std::cos(it->k_n * x);
    }
    return sum;
}

double transient_field(double t, double x, double z, const Grating& g, const PhysicalConfig& cfg, int N,
                       const quad::QuadratureSpec& spec, ModeCache* cache) {
    require_times(t, z);
    if (N < 0) throw DomainError("truncation order must be nonnegative");
    if (!(t > z)) return 0.0;
    std::vector<ModeCoefficient> modes;
    modes.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        double value = 0.0;
        if (g.coeff(n) != 0.0)
            value = cache ? cache->get(n, t, z, cfg, spec) : transient_mode(n, t, z, cfg, spec);
        modes.push_back({n, cfg.k(n), value});
    }
    return transient_field_from_modes(x, modes, g);
}

}  // namespace talbot
