#include "talbot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "talbot/error.hpp"

namespace talbot::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// QUADPACK qk21 abscissae and weights; index 10 is the centre.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208356640767, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss 10-point weights for the odd Kronrod nodes 1, 3, 5, 7, 9.
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651146};

struct Interval {
    double a;
    double b;
    double value;
    double err;
    bool at_floor;  // error is at the rounding floor; bisecting will not help
};

struct WorseFirst {
    bool operator()(const Interval& x, const Interval& y) const { return x.err < y.err; }
};

struct RuleResult {
    double value;
    double err;
    bool at_floor;
};

RuleResult kronrod(const RealFunction& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    double f1[10];
    double f2[10];
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        const double s = f1[j] + f2[j];
        resk += kWgk[j] * s;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double floor = 50.0 * kEps * resabs;
    bool at_floor = false;
    if (err <= floor) {
        err = floor;
        at_floor = true;
    }
    if (!std::isfinite(value) || !std::isfinite(err))
        throw DomainError("integrand is not finite on the integration interval");
    return {value, err, at_floor};
}

double tolerance(const QuadratureSpec& spec, double value) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

// Global adaptive bisection of [a, b], optionally pre-split into panels.
QuadratureResult adaptive(const RealFunction& f, double a, double b, const QuadratureSpec& spec) {
    QuadratureResult out;
    if (a == b) return out;
    const double sign = b < a ? -1.0 : 1.0;
    if (b < a) std::swap(a, b);

    long panels = 1;
    if (spec.oscillation_period_hint && *spec.oscillation_period_hint > 0.0) {
        const double n = std::ceil((b - a) / *spec.oscillation_period_hint);
        panels = static_cast<long>(std::clamp(n, 1.0, static_cast<double>(spec.max_subdivisions)));
    }

    std::priority_queue<Interval, std::vector<Interval>, WorseFirst> heap;
    std::vector<Interval> settled;
    double total = 0.0;
    double total_err = 0.0;
    const double width = (b - a) / static_cast<double>(panels);
    for (long i = 0; i < panels; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = i + 1 == panels ? b : a + width * static_cast<double>(i + 1);
        const RuleResult r = kronrod(f, lo, hi);
        out.evaluations += 21;
        total += r.value;
        total_err += r.err;
        heap.push({lo, hi, r.value, r.err, r.at_floor});
    }
    out.subdivisions = panels;

    long since_resum = 0;
    while (!heap.empty() && total_err > tolerance(spec, total)) {
        if (heap.top().at_floor) break;
        if (out.subdivisions >= spec.max_subdivisions) {
            std::ostringstream msg;
            msg << "adaptive quadrature on [" << a << ", " << b << "] exhausted "
                << spec.max_subdivisions << " subdivisions (error estimate " << total_err << ")";
            throw NonConvergence(msg.str(), sign * total, total_err);
        }
        const Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            settled.push_back(worst);
            continue;
        }
        const RuleResult left = kronrod(f, worst.a, mid);
        const RuleResult right = kronrod(f, mid, worst.b);
        out.evaluations += 42;
        ++out.subdivisions;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push({worst.a, mid, left.value, left.err, left.at_floor});
        heap.push({mid, worst.b, right.value, right.err, right.at_floor});
        if (++since_resum == 1000) {
            // Incremental updates drift; rebuild the sums from the pieces.
            since_resum = 0;
            total = 0.0;
            total_err = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().err;
                copy.pop();
            }
            for (const Interval& s : settled) {
                total += s.value;
                total_err += s.err;
            }
        }
    }
    // Final exact resummation for a deterministic result.
    total = 0.0;
    total_err = 0.0;
    std::vector<Interval> pieces;
    pieces.reserve(heap.size() + settled.size());
    while (!heap.empty()) {
        pieces.push_back(heap.top());
        heap.pop();
    }
    pieces.insert(pieces.end(), settled.begin(), settled.end());
    std::sort(pieces.begin(), pieces.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    for (const Interval& p : pieces) {
        total += p.value;
        total_err += p.err;
    }
    out.value = sign * total;
    out.err_estimate = total_err;
    return out;
}

// Solves the small dense system A x = b in place (partial pivoting).
std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
        if (A[piv * n + c] == 0.0) return {};
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(A[c * n + k], A[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double m = A[r * n + c] / A[c * n + c];
            for (std::size_t k = c; k < n; ++k) A[r * n + k] -= m * A[c * n + k];
            b[r] -= m * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t k = r + 1; k < n; ++k) acc -= A[r * n + k] * x[k];
        x[r] = acc / A[r * n + r];
    }
    return x;
}

// Limit of S(u) = S + u^-1/2 (c_0 + c_1/u + ... + c_deg/u^deg) fitted through
// the last deg + 2 samples. Appropriate when the integrand envelope decays like
// u^-3/2 and the samples sit at whole periods, so the oscillating part of the
// tail has a fixed phase.
double richardson_tail(std::span<const double> u, std::span<const double> s, std::size_t deg) {
    const std::size_t n = deg + 2;
    const std::size_t off = s.size() - n;
    const double scale = u.back();
    std::vector<double> A(n * n);
    std::vector<double> b(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double x = u[off + r] / scale;
        A[r * n] = 1.0;
        for (std::size_t i = 0; i <= deg; ++i) A[r * n + i + 1] = std::pow(x, -0.5 - static_cast<double>(i));
        b[r] = s[off + r];
    }
    const std::vector<double> sol = solve_dense(std::move(A), std::move(b));
    return sol.empty() ? std::numeric_limits<double>::quiet_NaN() : sol[0];
}

// Sums over panels [a + k P, a + (k+1) P]. Two accelerators run on the same
// partial sums: the Levin u-transform on consecutive panels (alternating and
// exponentially damped tails), and Richardson extrapolation on doubling
// endpoints a + 2^j P (tails with a slowly decaying non-oscillatory part).
QuadratureResult semi_infinite_panels(const RealFunction& f, const PanelEdges& edge,
                                      const QuadratureSpec& spec) {
    constexpr std::size_t kLevinPanels = 64;
    constexpr std::size_t kMaxPanels = std::size_t{1} << 16;
    constexpr std::size_t kMinPanels = 8;
    constexpr std::size_t kMaxOrder = 16;
    constexpr std::size_t kMaxDegree = 6;

    QuadratureSpec panel_spec = spec;
    panel_spec.oscillation_period_hint.reset();
    panel_spec.rel_tol = spec.rel_tol * 1e-2;
    panel_spec.abs_tol = spec.abs_tol * 1e-2;

    QuadratureResult out;
    std::vector<double> sums;
    std::vector<double> dyadic_u;
    std::vector<double> dyadic_s;
    double running = 0.0;
    double panel_err = 0.0;
    double magnitude = 0.0;  // sum of |panel| values, sets the rounding floor
    double prev_levin = std::numeric_limits<double>::quiet_NaN();
    double prev_rich = std::numeric_limits<double>::quiet_NaN();
    int levin_agree = 0;
    int small_terms = 0;
    double best = 0.0;
    double best_diff = std::numeric_limits<double>::infinity();
    auto note = [&](double estimate, double diff) {
        if (diff < best_diff) {
            best_diff = diff;
            best = estimate;
        }
    };

    const double a = edge(0);
    double hi = a;
    for (std::size_t k = 0; k < kMaxPanels; ++k) {
        const double lo = hi;
        hi = edge(k + 1);
        if (!(hi > lo) || !std::isfinite(hi)) throw DomainError("panel edges must be finite and strictly increasing");
        const QuadratureResult p = adaptive(f, lo, hi, panel_spec);
        out.evaluations += p.evaluations;
        out.subdivisions += p.subdivisions;
        if (out.subdivisions > spec.max_subdivisions)
            throw NonConvergence("semi-infinite quadrature exhausted its subdivision budget",
                                 std::isfinite(best_diff) ? best : running, best_diff + panel_err);
        running += p.value;
        panel_err += p.err_estimate;
        magnitude += std::abs(p.value);
        const std::size_t count = k + 1;
        if (count <= kLevinPanels) sums.push_back(running);

        const double tol = std::max(tolerance(spec, running), 64.0 * kEps * magnitude + panel_err);
        // Fast (e.g. exponential) decay: the plain partial sums have converged.
        if (std::abs(p.value) <= 1e-3 * tol) {
            if (++small_terms >= 3) {
                out.value = running;
                out.err_estimate = panel_err + 3.0 * std::abs(p.value);
                return out;
            }
        } else {
            small_terms = 0;
        }

        if (count <= kLevinPanels && count >= kMinPanels) {
            const std::size_t first = count > kMaxOrder + 4 ? count - kMaxOrder - 1 : 3;
            const std::vector<double> est = levin_u(sums, first, kMaxOrder);
            const double estimate = est.empty() ? std::numeric_limits<double>::quiet_NaN() : est.back();
            if (std::isfinite(estimate) && std::isfinite(prev_levin)) {
                const double diff = std::abs(estimate - prev_levin);
                note(estimate, diff);
                if (diff <= tol && ++levin_agree >= 2) {
                    out.value = estimate;
                    out.err_estimate = panel_err + diff;
                    return out;
                }
                if (diff > tol) levin_agree = 0;
            }
            prev_levin = estimate;
        }

        if (count >= 2 && (count & (count - 1)) == 0) {
            dyadic_u.push_back(hi - a);
            dyadic_s.push_back(running);
            if (dyadic_s.size() >= 3) {
                const std::size_t deg = std::min(kMaxDegree, dyadic_s.size() - 2);
                const double estimate = richardson_tail(dyadic_u, dyadic_s, deg);
                if (std::isfinite(estimate) && std::isfinite(prev_rich)) {
                    const double diff = std::abs(estimate - prev_rich);
                    note(estimate, diff);
                    if (diff <= tol) {
                        out.value = estimate;
                        out.err_estimate = panel_err + diff;
                        return out;
                    }
                }
                prev_rich = estimate;
            }
        }
    }
    std::ostringstream msg;
    msg << "tail acceleration did not settle after " << kMaxPanels << " panels starting at " << a
        << " (best difference " << best_diff << ")";
    throw NonConvergence(msg.str(), best, best_diff + panel_err);
}

// Maps [a, inf) onto (0, 1] with x = a + c (1/v^2 - 1) so an x^-3/2 tail
// becomes a bounded integrand.
QuadratureResult semi_infinite_mapped(const RealFunction& f, double a, const QuadratureSpec& spec) {
    const double c = std::max(1.0, std::abs(a));
    auto g = [&](double v) {
        const double x = a + c * (1.0 / (v * v) - 1.0);
        const double jac = 2.0 * c / (v * v * v);
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx * jac;
    };
    QuadratureSpec s = spec;
    s.oscillation_period_hint.reset();
    return adaptive(g, 0.0, 1.0, s);
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
    if (oscillation_period_hint && !(*oscillation_period_hint > 0.0))
        throw DomainError("oscillation period hint must be positive");
}

QuadratureResult integrate_panels(const RealFunction& f, const PanelEdges& edges, const QuadratureSpec& spec) {
    spec.validate();
    return semi_infinite_panels(f, edges, spec);
}

QuadratureResult gauss_kronrod21(const RealFunction& f, double a, double b) {
    const RuleResult r = kronrod(f, a, b);
    return {r.value, r.err, 21, 1};
}

std::vector<double> levin_u(std::span<const double> s, std::size_t first, std::size_t max_order) {
    std::vector<double> out;
    if (s.size() < first + 3) return out;
    const std::size_t avail = s.size() - first - 1;
    const std::size_t kmax = std::min(avail, max_order);
    constexpr double beta = 1.0;
    // terms a_j = s_j - s_{j-1}; remainder estimate w_j = (j + beta) a_j.
    std::vector<double> inv_w(kmax + 1);
    for (std::size_t j = 0; j <= kmax; ++j) {
        const std::size_t idx = first + j;
        const double term = idx == 0 ? s[0] : s[idx] - s[idx - 1];
        const double n = static_cast<double>(idx) + beta;
        inv_w[j] = term != 0.0 ? 1.0 / (n * term) : 0.0;
    }
    for (std::size_t k = 1; k <= kmax; ++k) {
        double num = 0.0;
        double den = 0.0;
        double binom = 1.0;
        const double nk = static_cast<double>(first + k) + beta;
        for (std::size_t j = 0; j <= k; ++j) {
            const double nj = static_cast<double>(first + j) + beta;
            const double c = (j % 2 == 0 ? 1.0 : -1.0) * binom * std::pow(nj / nk, static_cast<double>(k) - 1.0);
            num += c * s[first + j] * inv_w[j];
            den += c * inv_w[j];
            binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
        out.push_back(den != 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

QuadratureResult integrate_oscillatory(const RealFunction& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integration limits must not be NaN");
    if (std::isinf(a)) throw DomainError("lower integration limit must be finite");
    if (std::isinf(b)) {
        if (b < 0.0) throw DomainError("upper limit -infinity is not supported");
        if (spec.oscillation_period_hint) {
            const double period = *spec.oscillation_period_hint;
            return semi_infinite_panels(f, [a, period](std::size_t j) { return a + period * static_cast<double>(j); },
                                        spec);
        }
        return semi_infinite_mapped(f, a, spec);
    }
    return adaptive(f, a, b, spec);
}

}  // namespace talbot::quad
