#include "censorlab/specialfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "censorlab/errors.hpp"
#include "censorlab/quadrature.hpp"

namespace censorlab {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": argument must be finite");
}

// Modified Lentz evaluation of the continued fraction
// Gamma(s,x) = e^{-x} x^s / (x+1-s- 1(1-s)/(x+3-s- 2(2-s)/(x+5-s- ...))).
// Valid for every real s once x is moderately large.
double gamma_continued_fraction(double s, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) {
            return std::exp(-x + s * std::log(x)) * h;
        }
    }
    throw NumericError("upper_incomplete_gamma: continued fraction did not converge");
}

// Gamma(s) - gamma(s, x) with the lower function from its power series; s > 0.5, x < s + 1.
double gamma_by_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    const double lower = sum * std::exp(-x + s * std::log(x));
    return std::tgamma(s) - lower;
}

// Gamma(s, x) = x^s int_0^inf exp(s y - x e^y) dy (substitution w = x e^y).
// Smooth for every s; used for small x and non-positive orders.
double gamma_by_log_quadrature(double s, double x) {
    const double log_x = std::log(x);
    auto integrand = [&](double y) { return std::exp(s * (y + log_x) - x * std::exp(y)); };
    // s <= 0.5 here, so past y_max the integrand is below e^{-150} of its peak.
    const double y_max = std::max(std::log(60.0 / x) + 1.0, 1.0);
    const auto q = integrate_adaptive(integrand, 0.0, y_max, 1e-15, 20);
    return q.value;
}

}  // namespace

double erfc(double z) {
    require_finite(z, "erfc");
    return std::erfc(z);
}

double normal_cdf(double x) {
    require_finite(x, "normal_cdf");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double scaled_erfc(double log_factor, double z) {
    if (log_factor == -std::numeric_limits<double>::infinity()) return 0.0;
    if (z < 26.0) {
        const double e = std::erfc(z);
        if (e == 0.0) return 0.0;
        return std::exp(log_factor + std::log(e));
    }
    // erfc(z) = e^{-z^2} / (z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4) - 15/(8z^6) + ...)
    const double z2 = z * z;
    const double inv = 1.0 / (2.0 * z2);
    const double series = 1.0 - inv + 3.0 * inv * inv - 15.0 * inv * inv * inv + 105.0 * inv * inv * inv * inv;
    return std::exp(log_factor - z2) * series / (z * std::sqrt(std::numbers::pi));
}

double upper_incomplete_gamma(double s, double x) {
    require_finite(s, "upper_incomplete_gamma");
    require_finite(x, "upper_incomplete_gamma");
    if (x <= 0.0) throw DomainError("upper_incomplete_gamma: x must be > 0");
    if (x >= std::max(1.5, s + 1.0)) return gamma_continued_fraction(s, x);
    if (s > 0.5) return gamma_by_series(s, x);
    return gamma_by_log_quadrature(s, x);
}

std::optional<double> IncompleteBesselResult::printed_discrepancy() const {
    if (!printed_series) return std::nullopt;
    const double diff = std::fabs(printed_series->value - value);
    return value != 0.0 ? diff / std::fabs(value) : diff;
}

std::optional<double> IncompleteBesselResult::expanded_discrepancy() const {
    if (!expanded_series) return std::nullopt;
    const double diff = std::fabs(expanded_series->value - value);
    return value != 0.0 ? diff / std::fabs(value) : diff;
}

namespace {

template <typename TermFn>
std::optional<SeriesResult> sum_series(TermFn term_at, double rel_tol) {
    SeriesResult out;
    double sum = 0.0;
    for (std::size_t m = 0; m < kSeriesTermCap; ++m) {
        double term = 0.0;
        try {
            term = term_at(m);
        } catch (const NumericError&) {
            return std::nullopt;
        }
        if (!std::isfinite(term)) return std::nullopt;
        if (m > 0 && std::fabs(term) <= rel_tol * std::fabs(sum)) {
            out.value = sum;
            out.terms_used = m;
            out.truncation_bound = std::fabs(term);
            return out;
        }
        sum += term;
        if (!std::isfinite(sum)) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

IncompleteBesselResult incomplete_bessel_integral(double alpha, double A, double B, double t,
                                                  double T, double rel_tol) {
    for (double v : {alpha, A, B, t, T, rel_tol}) require_finite(v, "incomplete_bessel_integral");
    if (!(t > 0.0 && t < T)) throw DomainError("incomplete_bessel_integral: need 0 < t < T");
    if (A < 0.0 || B < 0.0) throw DomainError("incomplete_bessel_integral: A and B must be >= 0");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
        throw DomainError("incomplete_bessel_integral: rel_tol must lie in (0, 1e-2]");
    }

    IncompleteBesselResult out;
    const double b2 = B * B;
    auto integrand = [&](double x) { return std::pow(x, alpha) * std::exp(-(A / (x * x) + b2 * x)); };
    const auto q = integrate_adaptive(integrand, t, T, 1e-13, 20);
    out.value = q.value;
    out.quadrature_error = q.error;

    if (B == 0.0) return out;

    // Published form: (B^2)^{alpha+1} sum (-1)^m/m! (B^2)^{2m}
    //   {Gamma(-(alpha+m+1), B/T) - Gamma(-(alpha+m+1), B/t)}
    const double prefactor = std::pow(b2, alpha + 1.0);
    out.printed_series = sum_series(
        [&](std::size_t m) {
            const double md = static_cast<double>(m);
            const double order = -(alpha + md + 1.0);
            const double log_coef = 2.0 * md * std::log(b2) - std::lgamma(md + 1.0);
            const double diff = upper_incomplete_gamma(order, B / T) - upper_incomplete_gamma(order, B / t);
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            return sign * prefactor * std::exp(log_coef) * diff;
        },
        rel_tol);

    out.expanded_series = sum_series(
        [&](std::size_t m) {
            const double md = static_cast<double>(m);
            if (A == 0.0 && m > 0) return 0.0;
            const double order = alpha - 2.0 * md + 1.0;
            const double log_coef = (A > 0.0 ? md * std::log(A) : 0.0) - std::lgamma(md + 1.0) -
                                    order * std::log(b2);
            const double diff = upper_incomplete_gamma(order, b2 * t) - upper_incomplete_gamma(order, b2 * T);
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            return sign * std::exp(log_coef) * diff;
        },
        rel_tol);
    return out;
}

}  // namespace censorlab
