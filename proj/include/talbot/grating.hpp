// Physical parameters of a Talbot setup and the grating's cosine coefficients.

#ifndef TALBOT_GRATING_HPP
#define TALBOT_GRATING_HPP

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace talbot {

/// Grating period d, wavelength lambda, slit width l and source amplitude A.
/// Units are arbitrary but shared (natural units, c = 1).
class PhysicalConfig {
public:
    /// Throws DomainError unless d, lambda, A > 0 and 0 < l <= d.
    PhysicalConfig(double d, double lambda, double l, double A = 1.0);

    /// Builds a config from the dimensionless ratios d/lambda and l/lambda.
    static PhysicalConfig from_ratios(double d_over_lambda, double l_over_lambda,
                                      double A = 1.0, double d = 1.0);

    double d() const noexcept { return d_; }
    double lambda() const noexcept { return lambda_; }
    double l() const noexcept { return l_; }
    double A() const noexcept { return A_; }

    double omega() const noexcept { return 2.0 * std::numbers::pi / lambda_; }
    double talbot_distance() const noexcept { return 2.0 * d_ * d_ / lambda_; }
    double epsilon() const noexcept { return lambda_ / d_; }
    double delta() const noexcept { return l_ / d_; }

    /// Transverse wavenumber 2 pi n / d.
    double k(int n) const noexcept { return 2.0 * std::numbers::pi * n / d_; }

private:
    double d_;
    double lambda_;
    double l_;
    double A_;
};

enum class GratingKind { Ronchi, DiracComb, Custom };

std::string_view to_string(GratingKind kind);
GratingKind grating_kind_from_string(std::string_view s);

/// Cosine coefficients g_0..g_N of an even, real, d-periodic transmission
/// profile. The full two-sided series uses g_{-n} = g_n.
class Grating {
public:
    Grating(GratingKind kind, std::vector<double> coeffs,
            std::optional<double> mean_square = std::nullopt);

    static Grating ronchi(const PhysicalConfig& cfg, int N);
    static Grating dirac_comb(double A, int N);
    static Grating custom(std::vector<double> coeffs);

    GratingKind kind() const noexcept { return kind_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

    /// g_n for n >= 0; zero past the stored truncation.
    double coeff(int n) const noexcept;

    /// Exact period mean of g^2 over the untruncated profile, when known
    /// (A^2 d/l for Ronchi). Used to account for the series tail.
    std::optional<double> mean_square() const noexcept { return mean_square_; }

    /// Same grating restricted to modes 0..N.
    Grating truncated(int N) const;

    /// Truncated profile g0 + 2 sum_{n>=1} g_n cos(k_n x).
    double profile(double x, const PhysicalConfig& cfg) const;

private:
    GratingKind kind_;
    std::vector<double> coeffs_;
    std::optional<double> mean_square_;
};

/// A (d/l) sin(n pi l/d) / (n pi), and A for n = 0.
double ronchi_coefficient(int n, const PhysicalConfig& cfg);

/// ceil(5 d / lambda): four evanescent modes for every propagating one.
int truncation_order(const PhysicalConfig& cfg);

/// Fold weight for the cosine series: 1 for n = 0, 2 otherwise.
constexpr double fold_weight(int n) noexcept { return n == 0 ? 1.0 : 2.0; }

}  // namespace talbot

#endif
