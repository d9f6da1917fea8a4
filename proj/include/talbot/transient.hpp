// Exact time-dependent solution of the grating wave problem, mode by mode:
//
//   c_n(t, z) = sin w(t - z) - k z int_z^t J1(k s)/s sin w(t - tau) dtau,
//   s = sqrt(tau^2 - z^2),  for t > z, and 0 otherwise.
//
// Two evaluation routes exist. Direct integrates the finite memory integral
// after the substitution r^2 = tau^2 - z^2. StationaryPlusTail writes
// c_n = Im[U_n e^{iwt}] + E_n with E_n = k z int_t^inf (...) dtau and
// integrates the semi-infinite tail, which is far cheaper once t >> z.

#ifndef TALBOT_TRANSIENT_HPP
#define TALBOT_TRANSIENT_HPP

#include <functional>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "talbot/grating.hpp"
#include "talbot/quadrature.hpp"

namespace talbot {

enum class TransientMethod { Auto, Direct, StationaryPlusTail };

struct ModeCoefficient {
    int n;
    double k_n;
    double value;
};

/// Oscillation count above which Auto switches to the tail route.
inline constexpr double kTailRouteOscillations = 64.0;

double transient_mode(int n, double t, double z, const PhysicalConfig& cfg,
                      const quad::QuadratureSpec& spec = {},
                      TransientMethod method = TransientMethod::Auto);

/// E_n(t, z) = c_n(t, z) - Im[U_n e^{iwt}], requires t > z.
double transient_tail(int n, double t, double z, const PhysicalConfig& cfg,
                      const quad::QuadratureSpec& spec = {});

/// Experimental: the same convolution for a general source h, which must be
/// bounded and piecewise continuous with h(t) = 0 for t < 0:
///   h(t - z) - k z int_z^t J1(k s)/s h(t - tau) dtau.
/// `period_hint` is a typical oscillation period of h, if any.
double transient_mode_sampled(int n, double t, double z, const PhysicalConfig& cfg,
                              const std::function<double(double)>& h,
                              const quad::QuadratureSpec& spec = {},
                              std::optional<double> period_hint = std::nullopt);

/// Write-once cache of mode values keyed by (n, t, z). Safe for concurrent
/// readers and writers; a racing duplicate computation yields the same value.
class ModeCache {
public:
    /// Cached value, computing and storing it on first use.
    double get(int n, double t, double z, const PhysicalConfig& cfg, const quad::QuadratureSpec& spec,
               TransientMethod method = TransientMethod::Auto);
    std::size_t size() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::tuple<int, double, double>, double> values_;
};

/// c_0..c_N at one (t, z); modes with g_n = 0 are skipped and left at 0.
std::vector<ModeCoefficient> transient_modes(double t, double z, const Grating& g, const PhysicalConfig& cfg,
                                             int N, const quad::QuadratureSpec& spec = {},
                                             TransientMethod method = TransientMethod::Auto);

/// sum_n w_n g_n c_n(t, z) cos(k_n x) from precomputed modes.
double transient_field_from_modes(double x, const std::vector<ModeCoefficient>& modes, const Grating& g);

double transient_field(double t, double x, double z, const Grating& g, const PhysicalConfig& cfg, int N,
                       const quad::QuadratureSpec& spec = {}, ModeCache* cache = nullptr);

}  // namespace talbot

#endif
