#pragma once

#include <cstddef>
#include <optional>

namespace censorlab {

/// Complementary error function for finite real arguments.
double erfc(double z);

/// Standard normal distribution function, N(x) = erfc(-x / sqrt 2) / 2.
double normal_cdf(double x);

/// exp(log_factor) * erfc(z) without overflow in the factor or underflow in
/// erfc. Used wherever a Girsanov exponential multiplies a Gaussian tail.
double scaled_erfc(double log_factor, double z);

/// Upper incomplete gamma Gamma(s, x) = int_x^inf w^(s-1) e^(-w) dw.
/// Any finite s (negative orders included), x > 0.
double upper_incomplete_gamma(double s, double x);

struct SeriesResult {
    double value = 0.0;
    std::size_t terms_used = 0;
    double truncation_bound = 0.0;  // magnitude of the first omitted term
};

/// int_t^T x^alpha exp(-(A/x^2 + B^2 x)) dx.
///
/// `value` is the adaptive-quadrature result and is authoritative. Two series
/// in incomplete-gamma values are evaluated alongside it:
///  - `printed_series`: the series in powers of B^2 with Gamma(-(alpha+m+1), B/x)
///    in its reference form;
///  - `expanded_series`: term-by-term integration of the Taylor expansion of
///    exp(-A/x^2), which gives sum_m (-A)^m/m! (B^2)^(2m-alpha-1)
///    [Gamma(alpha-2m+1, B^2 t) - Gamma(alpha-2m+1, B^2 T)].
/// A series is empty when B = 0, when it does not converge within the term
/// cap, or when a term overflows.
struct IncompleteBesselResult {
    double value = 0.0;
    double quadrature_error = 0.0;
    std::optional<SeriesResult> printed_series;
    std::optional<SeriesResult> expanded_series;

    /// |series - value| / |value| (absolute when value == 0), if available.
    std::optional<double> printed_discrepancy() const;
    std::optional<double> expanded_discrepancy() const;
};

inline constexpr std::size_t kSeriesTermCap = 200;

IncompleteBesselResult incomplete_bessel_integral(double alpha, double A, double B, double t,
                                                  double T, double rel_tol = 1e-8);

}  // namespace censorlab
