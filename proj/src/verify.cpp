#include "talbot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "talbot/error.hpp"
#include "talbot/parallel.hpp"
#include "talbot/paraxial.hpp"
#include "talbot/specfun.hpp"
#include "talbot/stationary.hpp"
#include "talbot/transient.hpp"

namespace talbot {

namespace {

constexpr double pi = std::numbers::pi;

void run(ThreadPool* pool, std::size_t count, const std::function<void(std::size_t)>& body) {
    if (pool) {
        pool->parallel_for(0, count, body);
    } else {
        for (std::size_t i = 0; i < count; ++i) body(i);
    }
}

}  // namespace

SlopeFit fit_slope(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("slope fit needs two or more (x, y) pairs");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("slope fit needs distinct abscissae");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    fit.xs = std::move(xs);
    fit.ys = std::move(ys);
    return fit;
}

double check_laplace_identity(double k, double z, std::span<const double> s_samples,
                              const quad::QuadratureSpec& spec) {
    if (!(k > 0.0) || !(z > 0.0)) throw PreconditionError("Laplace check needs k > 0 and z > 0");
    double worst = 0.0;
    for (double s : s_samples) {
        if (!(s > 0.0)) throw PreconditionError("Laplace check needs s > 0");
        // t = sqrt(r^2 + z^2) removes the 1/sqrt(t^2 - z^2) endpoint factor.
        auto f = [&](double r) {
            const double t = std::hypot(r, z);
            return std::exp(-s * t) * k * z * specfun::bessel_j(1, k * r) / t;
        };
        const double period = std::min(pi / k, 2.0 / s);
        const double integral = quad::integrate_oscillatory(f, 0.0, quad::kInfinity, spec.with_period(period)).value;
        const double lhs = std::exp(-z * s) - integral;
        const double rhs = std::exp(-z * std::sqrt(s * s + k * k));
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    return worst;
}

double residual_envelope(int n, double t, double z, const PhysicalConfig& cfg, const ErrorDecayOptions& opts) {
    const double slow = std::min(cfg.k(n), cfg.omega());
    const double window = 2.0 * pi / slow;
    const int m = std::max(1, opts.window_samples);
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        const double ti = t + window * static_cast<double>(i) / static_cast<double>(m);
        double e = 0.0;
        if (opts.source == ResidualSource::Tail) {
            e = transient_tail(n, ti, z, cfg, opts.spec);
        } else {
            e = transient_mode(n, ti, z, cfg, opts.spec) - stationary_mode(n, ti, z, cfg);
        }
        worst = std::max(worst, std::abs(e));
    }
    return worst;
}

SlopeFit check_error_decay(int n, double z, const PhysicalConfig& cfg, std::span<const double> t_samples,
                           const ErrorDecayOptions& opts, ThreadPool* pool) {
    if (n < 1) throw PreconditionError("error decay needs a mode with k_n > 0 (n >= 1)");
    if (!(z > 0.0)) throw PreconditionError("error decay needs z > 0");
    if (t_samples.size() < 2) throw PreconditionError("error decay needs at least two times");
    for (double t : t_samples)
        if (!(t >= 10.0 * z)) throw PreconditionError("error decay samples must satisfy t >= 10 z");
    std::vector<double> env(t_samples.size());
    run(pool, t_samples.size(), [&](std::size_t i) { env[i] = residual_envelope(n, t_samples[i], z, cfg, opts); });
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < env.size(); ++i) {
        xs.push_back(std::log(t_samples[i]));
        ys.push_back(std::log(env[i]));
    }
    return fit_slope(std::move(xs), std::move(ys));
}

double l2_distance(const Grating& g, double zeta, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon = lambda/d must lie in (0, 1)");
    if (!std::isfinite(zeta) || zeta < 0.0) throw DomainError("zeta must be finite and >= 0");
    if (zeta == 0.0) return 0.0;
    const int N = g.order();
    double sum = 0.0;
    double energy = 0.0;
    for (int n = N; n >= 0; --n) {
        const double gn = g.coeff(n);
        const double w = fold_weight(n) * gn * gn;
        energy += w;
        if (w == 0.0) continue;
        const double ne = n * eps;
        double term = 0.0;
        if (ne <= 1.0) {
            // Envelope phase minus paraxial phase, written without cancellation.
            const double root = std::sqrt((1.0 - ne) * (1.0 + ne));
            const double delta = pi * zeta * ne * ne * n * n / ((1.0 + root) * (1.0 + root));
            const double h = std::sin(0.5 * delta);
            term = 4.0 * h * h;
        } else {
            const double a = std::exp(-2.0 * pi * zeta / (eps * eps) * std::sqrt((ne - 1.0) * (ne + 1.0)));
            const double c = cis_pi(zeta * (static_cast<double>(n) * n - 2.0 / (eps * eps))).real();
            term = a * a - 2.0 * a * c + 1.0;
        }
        sum += w * term;
    }
    if (const auto ms = g.mean_square()) {
        const double next = (N + 1) * eps;
        const double a_next =
            next > 1.0 ? std::exp(-2.0 * pi * zeta / (eps * eps) * std::sqrt((next - 1.0) * (next + 1.0))) : 1.0;
        if (a_next > 1e-8)
            throw PreconditionError("grating order too low: modes past it are not yet evanescent at this epsilon");
        sum += std::max(0.0, *ms - energy);
    }
    return sum;
}

std::vector<std::pair<double, double>> check_l2_convergence(const Grating& g, double zeta,
                                                            std::span<const double> eps_list) {
    std::vector<std::pair<double, double>> out;
    for (double eps : eps_list) out.emplace_back(eps, l2_distance(g, zeta, eps));
    return out;
}

std::vector<std::pair<double, double>> dark_path_points(int nu, int max_q) {
    std::vector<std::pair<double, double>> pts;
    for (int q = 1; q <= max_q; q += 2)
        for (int p = 0; p < q; ++p)
            if (std::gcd(2 * p, q) == 1)
                pts.emplace_back(0.5 + static_cast<double>(nu) * p / q, 2.0 * p / q);
    return pts;
}

DarkPathResult check_dark_path(int nu, const Grating& g, int N, int samples, int max_q, ThreadPool* pool) {
    if (samples < 100) throw PreconditionError("dark-path carpet needs samples >= 100");
    if (max_q < 1) throw PreconditionError("dark-path needs max_q >= 1");
    DarkPathResult res;
    const auto pts = dark_path_points(nu, max_q);
    double path = 0.0;
    for (const auto& [xi, zeta] : pts) path += std::norm(paraxial_field(xi, zeta, g, N));
    res.path_points = pts.size();
    res.path_mean_intensity = path / static_cast<double>(pts.size());

    const auto S = static_cast<std::size_t>(samples);
    std::vector<double> rows(S);
    run(pool, S, [&](std::size_t j) {
        const double zeta = 2.0 * static_cast<double>(j) / static_cast<double>(S);
        double acc = 0.0;
        for (std::size_t i = 0; i < S; ++i)
            acc += std::norm(paraxial_field(static_cast<double>(i) / static_cast<double>(S), zeta, g, N));
        rows[j] = acc;
    });
    res.carpet_mean_intensity = std::accumulate(rows.begin(), rows.end(), 0.0) / static_cast<double>(S * S);
    return res;
}

}  // namespace talbot
