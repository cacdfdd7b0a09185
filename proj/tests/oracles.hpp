#pragma once

// Reference computations used only by the tests. None of them calls into the
// library code they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace oracle {

/// Fixed-order composite Gauss-Legendre (30 nodes per panel).
template <class F>
double composite_gauss(F f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + h * i;
        total += boost::math::quadrature::gauss<double, 30>::integrate(f, lo, lo + h);
    }
    return total;
}

/// Gamma(s, x) by direct integration of w^(s-1) e^(-w) on [x, inf).
inline double upper_gamma_by_quadrature(double s, double x) {
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [s](double w) { return std::exp((s - 1.0) * std::log(w) - w); };
    return integrator.integrate(f, x, std::numeric_limits<double>::infinity());
}

/// N(x) as 1/2 + int_0^x phi.
inline double normal_cdf_by_quadrature(double x) {
    auto phi = [](double w) { return std::exp(-0.5 * w * w) / std::sqrt(2.0 * std::numbers::pi); };
    const double part = composite_gauss(phi, 0.0, std::fabs(x), 64);
    return x >= 0.0 ? 0.5 + part : 0.5 - part;
}

/// Integral of x^alpha exp(-(A/x^2 + B^2 x)) over [t, T] by composite Gauss.
inline double bessel_integral_by_quadrature(double alpha, double A, double B, double t, double T, int panels) {
    auto f = [=](double x) { return std::pow(x, alpha) * std::exp(-(A / (x * x) + B * B * x)); };
    return composite_gauss(f, t, T, panels);
}

/// Maximised Cobb-Douglas profit p x1^a x2^b - w1 x1 - w2 x2 by grid search:
/// a coarse logarithmic scan locates the optimum, then an n x n grid on
/// [x*/4, 4 x*] in each coordinate refines it.
inline double cobb_douglas_grid_max(double a, double b, double p, double w1, double w2, int n = 2000) {
    auto profit = [=](double x1, double x2) { return p * std::pow(x1, a) * std::pow(x2, b) - w1 * x1 - w2 * x2; };
    double best = -std::numeric_limits<double>::infinity();
    double bx1 = 1.0;
    double bx2 = 1.0;
    for (int i = 0; i <= 400; ++i) {
        const double x1 = std::pow(10.0, -8.0 + 16.0 * i / 400.0);
        for (int j = 0; j <= 400; ++j) {
            const double x2 = std::pow(10.0, -8.0 + 16.0 * j / 400.0);
            const double v = profit(x1, x2);
            if (v > best) {
                best = v;
                bx1 = x1;
                bx2 = x2;
            }
        }
    }
    const double lo1 = bx1 / 4.0;
    const double lo2 = bx2 / 4.0;
    const double h1 = (4.0 * bx1 - lo1) / n;
    const double h2 = (4.0 * bx2 - lo2) / n;
    for (int i = 0; i <= n; ++i) {
        const double x1 = lo1 + h1 * i;
        for (int j = 0; j <= n; ++j) best = std::max(best, profit(x1, lo2 + h2 * j));
    }
    return best;
}

/// P(max_{u <= horizon} (mu u + sigma W_u) >= level) through the standard
/// normal form of the first-passage law (different arrangement from the
/// library's erfc form).
inline double running_max_tail(double mu, double sigma, double horizon, double level) {
    if (level <= 0.0) return 1.0;
    const double sd = sigma * std::sqrt(horizon);
    const double phi1 = 0.5 * std::erfc((level - mu * horizon) / (sd * std::numbers::sqrt2));
    const double phi2 = 0.5 * std::erfc((level + mu * horizon) / (sd * std::numbers::sqrt2));
    return phi1 + std::exp(2.0 * mu * level / (sigma * sigma)) * phi2;
}

}  // namespace oracle
