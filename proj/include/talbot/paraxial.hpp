// Paraxial field U_Par(xi, zeta) in reduced coordinates xi = x/d,
// zeta = z / (z_T/2), its subimage decomposition at rational planes and the
// ideal delta train of a Dirac-comb grating.
//
// The global phase exp(-i omega z) is omitted throughout; only |U| is used
// downstream.

#ifndef TALBOT_PARAXIAL_HPP
#define TALBOT_PARAXIAL_HPP

#include <complex>
#include <string>
#include <vector>

#include "talbot/grating.hpp"

namespace talbot {

using cplx = std::complex<double>;

/// Plane zeta = nu + p/q.
struct Rational {
    long long p = 0;
    long long q = 1;
    long long nu = 0;
};

/// exp(i pi x), with x reduced modulo 2 first.
cplx cis_pi(double x);

/// sum_{|n|<=N} g_|n| exp(2 pi i xi n + i pi zeta n^2).
cplx paraxial_field(double xi, double zeta, const Grating& g, int N);

/// c_r = (1/q) sum_{n<q} exp(2 pi i (p n^2 + (pq - 2r) n) / (2q)), r = 0..q-1.
/// Throws NotCoprime.
std::vector<cplx> subimage_coefficients(const Rational& r);

struct DeltaEntry {
    double xi;  // in [0, 1)
    cplx weight;
};

struct DeltaTrain {
    long long q = 1;
    std::vector<DeltaEntry> entries;

    /// {"q": .., "entries": [{"xi": .., "re": .., "im": ..}, ...]}
    std::string to_json() const;
};

/// Deltas at (m/q - (nu + p)/2) mod 1 with weights c_m. Throws NotCoprime.
DeltaTrain ideal_delta_train(const Rational& r);

}  // namespace talbot

#endif
