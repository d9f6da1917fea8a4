// Generalized quadratic Gauss sums G(p, r, q) = sum_{n<q} e^{2 pi i (p n^2 + r n)/q}.
//
// Every phase is reduced to an integer residue before exponentiation, and
// terms sharing a residue are accumulated by multiplicity, so cancellations
// to zero are exact up to a handful of roundings.

#ifndef TALBOT_GAUSS_HPP
#define TALBOT_GAUSS_HPP

#include <complex>
#include <string_view>

namespace talbot {

using cplx = std::complex<double>;

/// sum_{n=0}^{terms-1} exp(2 pi i (a n^2 + b n) / modulus), exact residue
/// arithmetic; a and b may be negative.
cplx quadratic_phase_sum(long long a, long long b, long long modulus, long long terms);

/// exp(2 pi i residue / modulus), with the residue reduced into [0, modulus).
cplx unit_root(long long residue, long long modulus);

cplx gauss_sum_direct(long long p, long long r, long long q);

enum class GaussBranch { OddQ, EvenNonzero, EvenZero };
std::string_view to_string(GaussBranch branch);

/// Closed-form branch for gcd(p, q) = 1: sqrt(q) for odd q; for even q,
/// sqrt(2q) when q = 2r (mod 4) and 0 otherwise. Throws NotCoprime.
GaussBranch gauss_branch(long long p, long long r, long long q);
double gauss_magnitude(long long p, long long r, long long q);

/// G(p/2, pq/2 - m, q) = sum_{r<q} e^{2 pi i ((qp + 2m) r - p r^2) / (2q)}.
/// Throws NotCoprime.
cplx gauss_half(long long p, long long m, long long q);

struct GaussSumResult {
    cplx value;
    double magnitude_closed_form;
    GaussBranch branch;
    long long p;
    long long r;
    long long q;
};

/// Direct value together with the closed-form magnitude.
GaussSumResult gauss_sum(long long p, long long r, long long q);

}  // namespace talbot

#endif
