// Helmholtz envelope U(x, z) = sum_n w_n g_n cos(k_n x) L_n(z) and its
// period-averaged energy density.

#ifndef TALBOT_STATIONARY_HPP
#define TALBOT_STATIONARY_HPP

#include <complex>
#include <span>
#include <vector>

#include "talbot/grating.hpp"

namespace talbot {

using cplx = std::complex<double>;

enum class Regime { Propagating, Evanescent };

struct EnvelopeMode {
    int n;
    Regime regime;
    cplx longitudinal_factor;
};

/// k_n <= omega propagates with exp(-i z sqrt(omega^2 - k_n^2)); otherwise
/// exp(-z sqrt(k_n^2 - omega^2)). The boundary k_n = omega propagates.
Regime regime(int n, const PhysicalConfig& cfg);

/// sqrt(|omega^2 - k_n^2|), computed without cancellation near k_n = omega.
double longitudinal_wavenumber(int n, const PhysicalConfig& cfg);

EnvelopeMode envelope_mode(int n, double z, const PhysicalConfig& cfg);

/// Factors L_0(z)..L_N(z), shared by every x on a row.
std::vector<cplx> longitudinal_factors(double z, const PhysicalConfig& cfg, int N);

cplx stationary_field(double x, double z, const Grating& g, const PhysicalConfig& cfg, int N);

/// U at every x of a row, reusing one set of longitudinal factors.
std::vector<cplx> stationary_row(std::span<const double> xs, double z, const Grating& g,
                                 const PhysicalConfig& cfg, int N);

/// Im[U_n e^{i omega t}] for a single unit-amplitude mode: the t -> infinity
/// limit of the transient mode.
double stationary_mode(int n, double t, double z, const PhysicalConfig& cfg);

/// (1/d) int_0^d |U|^2 dx = sum w_n g_n^2 |L_n(z)|^2.
double energy_density(double z, const Grating& g, const PhysicalConfig& cfg, int N);

/// z -> infinity limit: only propagating modes survive.
double energy_density_limit(const Grating& g, const PhysicalConfig& cfg, int N);

}  // namespace talbot

#endif
