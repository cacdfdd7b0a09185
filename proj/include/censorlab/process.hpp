#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace censorlab {

/// Geometric Brownian motion S_{t0+u} = S_{t0} exp(mu u + sigma W_u).
/// `mu` is the drift of the log; see from_arithmetic_drift for the
/// X_{t+s} = X_t exp((m - sigma^2/2) s + sigma W_s) parameterisation.
struct GbmParams {
    double mu = 0.0;
    double sigma = 0.0;
    double start_value = 1.0;
    double start_time = 0.0;

    GbmParams() = default;
    GbmParams(double mu, double sigma, double start_value = 1.0, double start_time = 0.0);

    /// Risk-neutral tracker: mu = r - delta - sigma^2 / 2.
    static GbmParams market(double r, double delta, double sigma, double start_value = 1.0,
                            double start_time = 0.0);

    /// Process whose mean grows like exp(m s).
    static GbmParams from_arithmetic_drift(double m, double sigma, double start_value = 1.0,
                                           double start_time = 0.0);

    double arithmetic_drift() const { return mu + 0.5 * sigma * sigma; }
};

struct GbmPath {
    std::vector<double> times;
    std::vector<double> values;
    std::uint64_t seed = 0;
};

enum class PerformanceIndex { RunningMax, RunningMin, RunningAverage };

std::string_view to_string(PerformanceIndex index);
PerformanceIndex parse_performance_index(std::string_view name);

/// Exact-in-distribution sampling on a uniform grid of `steps` intervals.
GbmPath sample_path(const GbmParams& params, double horizon, std::size_t steps, std::uint64_t seed);

/// Same construction from caller-supplied standard normal increments, one per step.
GbmPath path_from_normals(const GbmParams& params, double horizon, std::span<const double> normals);

/// Standard normal increments sample_path uses for `seed`.
std::vector<double> draw_normals(std::size_t steps, std::uint64_t seed);

double index_of_path(const GbmPath& path, PerformanceIndex index);

/// Index over values on a uniform grid (average by the trapezoid rule).
double index_of_values(std::span<const double> values, PerformanceIndex index);

/// Largest relative deviation |Sigma(scale S) - scale Sigma(S)| / (scale Sigma(S))
/// over all restart windows [t_k, t_end] of a seed-fixed path.
double check_scaling(const GbmParams& params, double horizon, std::size_t steps, std::uint64_t seed,
                     double scale, PerformanceIndex index);

}  // namespace censorlab
