// Bessel functions of the first kind and the modulus/phase form used to
// split oscillatory Bessel kernels into pure-phase pieces.

#ifndef TALBOT_SPECFUN_HPP
#define TALBOT_SPECFUN_HPP

namespace talbot::specfun {

/// J_order(x) for integer order >= 0 and x >= 0. Throws DomainError for a
/// negative order or argument.
double bessel_j(int order, double x);

/// J_1(x)/x, continuous through x = 0 where it equals 1/2.
double j1_over_x(double x);

/// Y_order(x), x > 0.
double bessel_y(int order, double x);

/// Hankel modulus and phase: H^(1)_nu(x) = M(x) exp(i theta(x)) with
/// theta(x) = x - (nu/2 + 1/4) pi + phase_correction. Only the correction
/// is returned so large-x phases can be assembled without cancellation.
struct ModulusPhase {
    double modulus;
    double phase_correction;
};

/// Valid for order 0 or 1 and x > 0.
ModulusPhase bessel_modulus_phase(int order, double x);

/// Argument above which bessel_modulus_phase switches to the Hankel
/// asymptotic series.
inline constexpr double kHankelAsymptoticThreshold = 20.0;

}  // namespace talbot::specfun

#endif
