#include "talbot/gauss.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "talbot/error.hpp"

namespace talbot {

namespace {

long long mod(long long a, long long m) {
    const long long r = a % m;
    return r < 0 ? r + m : r;
}

// (a * b) mod m without overflow for moduli up to ~3e9.
long long mulmod(long long a, long long b, long long m) {
    return static_cast<long long>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

void require_coprime(long long p, long long q) {
    if (q < 1) throw DomainError("Gauss sum modulus q must be positive");
    if (std::gcd(p, q) != 1) throw NotCoprime(p, q);
}

}  // namespace

cplx unit_root(long long residue, long long modulus) {
    const long long j = mod(residue, modulus);
    // Quarter turns are returned exactly so that exact cancellations stay exact.
    if (j == 0) return {1.0, 0.0};
    if (4 * j == modulus) return {0.0, 1.0};
    if (2 * j == modulus) return {-1.0, 0.0};
    if (4 * j == 3 * modulus) return {0.0, -1.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(modulus));
}

cplx quadratic_phase_sum(long long a, long long b, long long modulus, long long terms) {
    if (modulus < 1) throw DomainError("phase modulus must be positive");
    if (terms < 0) throw DomainError("term count must be nonnegative");
    std::vector<long long> count(static_cast<std::size_t>(modulus), 0);
    for (long long n = 0; n < terms; ++n) {
        const long long e = mod(mulmod(a, mulmod(n, n, modulus), modulus) + mulmod(b, n, modulus), modulus);
        ++count[static_cast<std::size_t>(e)];
    }
    cplx sum{0.0, 0.0};
    for (long long e = 0; e < modulus; ++e)
        if (count[static_cast<std::size_t>(e)] != 0)
            sum += static_cast<double>(count[static_cast<std::size_t>(e)]) * unit_root(e, modulus);
    return sum;
}

cplx gauss_sum_direct(long long p, long long r, long long q) {
    if (q < 1) throw DomainError("Gauss sum modulus q must be positive");
    return quadratic_phase_sum(p, r, q, q);
}

std::string_view to_string(GaussBranch branch) {
    switch (branch) {
        case GaussBranch::OddQ: return "odd q: sqrt(q)";
        case GaussBranch::EvenNonzero: return "even q, q = 2r (mod 4): sqrt(2q)";
        case GaussBranch::EvenZero: return "even q, q != 2r (mod 4): 0";
    }
    return "unknown";
}

GaussBranch gauss_branch(long long p, long long r, long long q) {
    require_coprime(p, q);
    if (q % 2 != 0) return GaussBranch::OddQ;
    return mod(q - 2 * mod(r, 4), 4) == 0 ? GaussBranch::EvenNonzero : GaussBranch::EvenZero;
}

double gauss_magnitude(long long p, long long r, long long q) {
    switch (gauss_branch(p, r, q)) {
        case GaussBranch::OddQ: return std::sqrt(static_cast<double>(q));
        case GaussBranch::EvenNonzero: return std::sqrt(2.0 * static_cast<double>(q));
        case GaussBranch::EvenZero: return 0.0;
    }
    return 0.0;
}

cplx gauss_half(long long p, long long m, long long q) {
    require_coprime(p, q);
    return quadratic_phase_sum(-p, mulmod(q, p, 2 * q) + 2 * m, 2 * q, q);
}

GaussSumResult gauss_sum(long long p, long long r, long long q) {
    const GaussBranch branch = gauss_branch(p, r, q);
    return {gauss_sum_direct(p, r, q), gauss_magnitude(p, r, q), branch, p, r, q};
}

}  // namespace talbot
