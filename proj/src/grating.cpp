#include "talbot/grating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "talbot/error.hpp"

namespace talbot {

PhysicalConfig::PhysicalConfig(double d, double lambda, double l, double A)
    : d_(d), lambda_(lambda), l_(l), A_(A) {
    if (!(std::isfinite(d) && d > 0.0)) throw DomainError("grating period d must be positive");
    if (!(std::isfinite(lambda) && lambda > 0.0)) throw DomainError("wavelength must be positive");
    if (!(std::isfinite(l) && l > 0.0 && l <= d)) throw DomainError("slit width must satisfy 0 < l <= d");
    if (!(std::isfinite(A) && A > 0.0)) throw DomainError("amplitude A must be positive");
}

PhysicalConfig PhysicalConfig::from_ratios(double d_over_lambda, double l_over_lambda, double A,
                                           double d) {
    if (!(d_over_lambda > 0.0) || !(l_over_lambda > 0.0))
        throw DomainError("ratios d/lambda and l/lambda must be positive");
    const double lambda = d / d_over_lambda;
    return PhysicalConfig(d, lambda, l_over_lambda * lambda, A);
}

std::string_view to_string(GratingKind kind) {
    switch (kind) {
        case GratingKind::Ronchi: return "ronchi";
        case GratingKind::DiracComb: return "dirac";
        case GratingKind::Custom: return "custom";
    }
    return "custom";
}

GratingKind grating_kind_from_string(std::string_view s) {
    if (s == "ronchi") return GratingKind::Ronchi;
    if (s == "dirac" || s == "dirac-comb" || s == "diraccomb") return GratingKind::DiracComb;
    if (s == "custom") return GratingKind::Custom;
    throw DomainError("unknown grating kind '" + std::string(s) + "'");
}

Grating::Grating(GratingKind kind, std::vector<double> coeffs, std::optional<double> mean_square)
    : kind_(kind), coeffs_(std::move(coeffs)), mean_square_(mean_square) {
    if (coeffs_.empty()) throw DomainError("grating needs at least the n = 0 coefficient");
    for (double c : coeffs_)
        if (!std::isfinite(c)) throw DomainError("grating coefficients must be finite");
}

Grating Grating::ronchi(const PhysicalConfig& cfg, int N) {
    if (N < 0) throw DomainError("truncation order must be non-negative");
    std::vector<double> c(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) c[static_cast<std::size_t>(n)] = ronchi_coefficient(n, cfg);
    return Grating(GratingKind::Ronchi, std::move(c), cfg.A() * cfg.A() * cfg.d() / cfg.l());
}

Grating Grating::dirac_comb(double A, int N) {
    if (N < 0) throw DomainError("truncation order must be non-negative");
    return Grating(GratingKind::DiracComb, std::vector<double>(static_cast<std::size_t>(N) + 1, A));
}

Grating Grating::custom(std::vector<double> coeffs) {
    return Grating(GratingKind::Custom, std::move(coeffs));
}

double Grating::coeff(int n) const noexcept {
    if (n < 0) n = -n;
    return n < static_cast<int>(coeffs_.size()) ? coeffs_[static_cast<std::size_t>(n)] : 0.0;
}

Grating Grating::truncated(int N) const {
    if (N < 0) throw DomainError("truncation order must be non-negative");
    std::vector<double> c(static_cast<std::size_t>(N) + 1, 0.0);
    for (int n = 0; n <= N; ++n) c[static_cast<std::size_t>(n)] = coeff(n);
    // Past the stored order the Dirac comb keeps its constant coefficient.
    if (kind_ == GratingKind::DiracComb)
        for (int n = order() + 1; n <= N; ++n) c[static_cast<std::size_t>(n)] = coeffs_.front();
    return Grating(kind_, std::move(c), mean_square_);
}

double Grating::profile(double x, const PhysicalConfig& cfg) const {
    double sum = 0.0;
    for (int n = order(); n >= 1; --n) sum += coeffs_[static_cast<std::size_t>(n)] * std::cos(cfg.k(n) * x);
    return coeffs_.front() + 2.0 * sum;
}

double ronchi_coefficient(int n, const PhysicalConfig& cfg) {
    if (n < 0) n = -n;
    if (n == 0) return cfg.A();
    const double arg = n * std::numbers::pi * cfg.delta();
    // sin(n pi l/d) vanishes exactly when n l/d is an integer; avoid the
    // 1e-16 residue that sin(k pi) leaves behind in floating point.
    const double m = n * cfg.delta();
    if (std::abs(m - std::round(m)) <= 4.0 * std::numeric_limits<double>::epsilon() * m) return 0.0;
    return cfg.A() * std::sin(arg) / (arg);
}

int truncation_order(const PhysicalConfig& cfg) {
    const double target = 5.0 * cfg.d() / cfg.lambda();
    // d/lambda is usually supplied as a ratio, so 5 d/lambda may carry a
    // rounding residue above an integer; treat that as the integer itself.
    const double snapped = std::round(target);
    if (std::abs(target - snapped) <= 1e-9 * target) return std::max(1, static_cast<int>(snapped));
    return std::max(1, static_cast<int>(std::ceil(target)));
}

}  // namespace talbot
