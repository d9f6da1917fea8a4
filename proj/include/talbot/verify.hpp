// Numerical checks of the analytic claims: the inverse-Laplace identity
// behind the transient kernel, the decay of the transient-minus-stationary
// residual, L2 convergence of the envelope to the paraxial field, and the
// dark paths of the paraxial carpet.

#ifndef TALBOT_VERIFY_HPP
#define TALBOT_VERIFY_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "talbot/grating.hpp"
#include "talbot/quadrature.hpp"

namespace talbot {

class ThreadPool;

struct SlopeFit {
    std::vector<double> xs;
    std::vector<double> ys;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line through (xs, ys). Needs at least two distinct xs.
SlopeFit fit_slope(std::vector<double> xs, std::vector<double> ys);

/// Max over s of |e^{-zs} - int_z^inf e^{-ts} k z J1(k sqrt(t^2-z^2))/sqrt(t^2-z^2) dt
///                - e^{-z sqrt(s^2+k^2)}| / e^{-z sqrt(s^2+k^2)}.
double check_laplace_identity(double k, double z, std::span<const double> s_samples,
                              const quad::QuadratureSpec& spec = {});

enum class ResidualSource {
    Tail,      // E_n from the semi-infinite tail integral
    FullMode,  // transient_mode minus the stationary mode
};

struct ErrorDecayOptions {
    ResidualSource source = ResidualSource::Tail;
    /// Samples per envelope window of length 2 pi / min(k_n, omega).
    int window_samples = 48;
    quad::QuadratureSpec spec{};
};

/// max |E_n(t', z)| for t' in one slow oscillation window starting at t.
double residual_envelope(int n, double t, double z, const PhysicalConfig& cfg, const ErrorDecayOptions& opts = {});

/// Fits log(envelope of |E_n|) against log t. Requires n >= 1 and t >= 10 z
/// for every sample (PreconditionError otherwise).
SlopeFit check_error_decay(int n, double z, const PhysicalConfig& cfg, std::span<const double> t_samples,
                           const ErrorDecayOptions& opts = {}, ThreadPool* pool = nullptr);

/// int_0^1 |U_eps(xi, zeta) - U_Par(xi, zeta)|^2 dxi evaluated mode by mode.
/// Modes past g.order() contribute g's remaining mean square when it is known
/// (they are fully evanescent there); otherwise the stored coefficients are
/// taken as the complete grating. PreconditionError when eps is too coarse
/// for g.order() to reach the evanescent region.
double l2_distance(const Grating& g, double zeta, double eps);

std::vector<std::pair<double, double>> check_l2_convergence(const Grating& g, double zeta,
                                                            std::span<const double> eps_list);

/// Points (xi, zeta) = (1/2 + nu p/q, 2p/q) with q odd, q <= max_q and
/// gcd(2p, q) = 1, 0 <= p < q.
std::vector<std::pair<double, double>> dark_path_points(int nu, int max_q);

struct DarkPathResult {
    double path_mean_intensity = 0.0;
    double carpet_mean_intensity = 0.0;
    std::size_t path_points = 0;
    double ratio() const { return path_mean_intensity / carpet_mean_intensity; }
};

/// Mean |U_Par|^2 on the dark path against the mean over a samples x samples
/// grid of [0,1) x [0,2). Requires samples >= 100.
DarkPathResult check_dark_path(int nu, const Grating& g, int N, int samples, int max_q = 9,
                               ThreadPool* pool = nullptr);

/// Acceptance thresholds.
inline constexpr double kL2RatioThreshold = 0.1;
inline constexpr double kDarkPathRatioThreshold = 0.05;
inline constexpr double kSlopeRSquaredMin = 0.95;

}  // namespace talbot

#endif
