#include "censorlab/process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "censorlab/errors.hpp"
#include "censorlab/rng.hpp"

namespace censorlab {

GbmParams::GbmParams(double mu_, double sigma_, double start_value_, double start_time_)
    : mu(mu_), sigma(sigma_), start_value(start_value_), start_time(start_time_) {
    if (!std::isfinite(mu) || !std::isfinite(start_time)) throw DomainError("GbmParams: non-finite drift or time");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("GbmParams: sigma must be > 0");
    if (!(start_value > 0.0) || !std::isfinite(start_value)) {
        throw DomainError("GbmParams: start_value must be > 0");
    }
}

GbmParams GbmParams::market(double r, double delta, double sigma, double start_value, double start_time) {
    return {r - delta - 0.5 * sigma * sigma, sigma, start_value, start_time};
}

GbmParams GbmParams::from_arithmetic_drift(double m, double sigma, double start_value, double start_time) {
    return {m - 0.5 * sigma * sigma, sigma, start_value, start_time};
}

std::string_view to_string(PerformanceIndex index) {
    switch (index) {
        case PerformanceIndex::RunningMax: return "running_max";
        case PerformanceIndex::RunningMin: return "running_min";
        case PerformanceIndex::RunningAverage: return "running_average";
    }
    return "unknown";
}

PerformanceIndex parse_performance_index(std::string_view name) {
    if (name == "running_max" || name == "max") return PerformanceIndex::RunningMax;
    if (name == "running_min" || name == "min") return PerformanceIndex::RunningMin;
    if (name == "running_average" || name == "average") return PerformanceIndex::RunningAverage;
    throw DomainError("unknown performance index '" + std::string(name) + "'");
}

std::vector<double> draw_normals(std::size_t steps, std::uint64_t seed) {
    NormalSource normal(make_engine(seed));
    std::vector<double> z(steps);
    for (auto& v : z) v = normal();
    return z;
}

GbmPath path_from_normals(const GbmParams& params, double horizon, std::span<const double> normals) {
    if (!(horizon > 0.0)) throw DomainError("path_from_normals: horizon must be > 0");
    if (normals.empty()) throw DomainError("path_from_normals: need at least one step");
    const std::size_t steps = normals.size();
    const double dt = horizon / static_cast<double>(steps);
    const double drift = params.mu * dt;
    const double vol = params.sigma * std::sqrt(dt);

    GbmPath path;
    path.times.resize(steps + 1);
    path.values.resize(steps + 1);
    path.times[0] = params.start_time;
    path.values[0] = params.start_value;
    double log_level = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        log_level += drift + vol * normals[k];
        path.times[k + 1] = params.start_time + horizon * static_cast<double>(k + 1) / static_cast<double>(steps);
        path.values[k + 1] = params.start_value * std::exp(log_level);
    }
    return path;
}

GbmPath sample_path(const GbmParams& params, double horizon, std::size_t steps, std::uint64_t seed) {
    if (steps == 0) throw DomainError("sample_path: steps must be >= 1");
    auto path = path_from_normals(params, horizon, draw_normals(steps, seed));
    path.seed = seed;
    return path;
}

double index_of_values(std::span<const double> values, PerformanceIndex index) {
    if (values.empty()) throw DomainError("index_of_path: empty path");
    switch (index) {
        case PerformanceIndex::RunningMax: return *std::max_element(values.begin(), values.end());
        case PerformanceIndex::RunningMin: return *std::min_element(values.begin(), values.end());
        case PerformanceIndex::RunningAverage: {
            if (values.size() == 1) return values.front();
            double sum = 0.5 * (values.front() + values.back());
            for (std::size_t k = 1; k + 1 < values.size(); ++k) sum += values[k];
            return sum / static_cast<double>(values.size() - 1);
        }
    }
    return 0.0;
}

double index_of_path(const GbmPath& path, PerformanceIndex index) { return index_of_values(path.values, index); }

double check_scaling(const GbmParams& params, double horizon, std::size_t steps, std::uint64_t seed,
                     double scale, PerformanceIndex index) {
    if (!(scale > 0.0)) throw DomainError("check_scaling: scale must be > 0");
    const auto path = sample_path(params, horizon, steps, seed);
    std::vector<double> scaled(path.values.size());
    std::transform(path.values.begin(), path.values.end(), scaled.begin(), [&](double v) { return scale * v; });

    double worst = 0.0;
    const std::span<const double> base(path.values);
    const std::span<const double> big(scaled);
    for (std::size_t k = 0; k < base.size(); ++k) {
        const double reference = scale * index_of_values(base.subspan(k), index);
        const double direct = index_of_values(big.subspan(k), index);
        worst = std::max(worst, std::fabs(direct - reference) / reference);
    }
    return worst;
}

}  // namespace censorlab
