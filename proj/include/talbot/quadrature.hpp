// Adaptive Gauss-Kronrod quadrature with period-wise splitting and Levin
// acceleration of semi-infinite oscillatory tails.

#ifndef TALBOT_QUADRATURE_HPP
#define TALBOT_QUADRATURE_HPP

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace talbot::quad {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_subdivisions = 1'000'000;
    /// Panel length used to pre-split the range. For semi-infinite ranges
    /// the partial sums over these panels are what gets accelerated, so pick
    /// a half-period for purely alternating kernels, or a full period of the
    /// fast oscillation when a slowly varying component is also present.
    std::optional<double> oscillation_period_hint;

    /// Throws DomainError unless tolerances are positive and
    /// max_subdivisions >= 1.
    void validate() const;

    /// Relaxed profile used for carpets.
    static QuadratureSpec relaxed() { return {1e-6, 1e-9, 1'000'000, std::nullopt}; }
    QuadratureSpec with_period(double period) const {
        QuadratureSpec s = *this;
        s.oscillation_period_hint = period;
        return s;
    }
};

struct QuadratureResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long evaluations = 0;
    long subdivisions = 0;
};

using RealFunction = std::function<double(double)>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Integral of f over [a, b]; b may be +infinity when f decays at least like
/// x^-3/2 in envelope. Throws NonConvergence (carrying the partial value)
/// when the subdivision budget runs out.
QuadratureResult integrate_oscillatory(const RealFunction& f, double a, double b,
                                       const QuadratureSpec& spec = {});

/// Strictly increasing, unbounded panel edges; edge(0) is the lower limit.
using PanelEdges = std::function<double(std::size_t)>;

/// Integral over [edges(0), inf) summed panel by panel and accelerated.
/// Each panel should span one half-period of the oscillation so that the
/// panel contributions alternate; edges are requested in increasing order.
QuadratureResult integrate_panels(const RealFunction& f, const PanelEdges& edges,
                                  const QuadratureSpec& spec = {});

/// Single 21-point Gauss-Kronrod rule on [a, b]. Exposed for tests.
QuadratureResult gauss_kronrod21(const RealFunction& f, double a, double b);

/// Levin u-transform estimates of the limit of partial sums. Entry k of the
/// result uses partial_sums[first .. first + k + 1]. Returns an empty vector
/// when fewer than three sums are supplied.
std::vector<double> levin_u(std::span<const double> partial_sums, std::size_t first = 0,
                            std::size_t max_order = 16);

}  // namespace talbot::quad

#endif
