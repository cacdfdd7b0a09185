#include "censorlab/profits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "censorlab/errors.hpp"

namespace censorlab {

void CobbDouglasParams::validate() const {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("CobbDouglasParams: a and b must be > 0");
    if (!(a + b < 1.0)) throw DomainError("CobbDouglasParams: a + b must be < 1 (decreasing returns)");
    if (!(p > 0.0) || !(w1 > 0.0) || !(w2 > 0.0)) throw DomainError("CobbDouglasParams: prices must be > 0");
}

double cobb_douglas_kappa(const CobbDouglasParams& params, CobbDouglasVariant variant) {
    params.validate();
    const double s = params.a + params.b;
    const double ratio = params.a / params.b;
    const double norm = std::pow(std::pow(1.0 - params.a, params.a - 1.0) / std::pow(params.a, params.a), 1.0 / s);
    const double first_exponent = variant == CobbDouglasVariant::CostFunctionForm ? params.a / s : params.b / s;
    return (std::pow(ratio, first_exponent) + std::pow(ratio, -params.a / s)) / norm;
}

double cobb_douglas_profit(const CobbDouglasParams& params, CobbDouglasVariant variant) {
    const double kappa = cobb_douglas_kappa(params, variant);
    const double s = params.a + params.b;
    auto braces = [s](double k) {
        const double base = s / k;
        return std::pow(base, s / (1.0 - s)) - k * std::pow(base, 1.0 / (1.0 - s));
    };
    if (variant == CobbDouglasVariant::CostFunctionForm) {
        const double cost = std::pow(std::pow(params.w1, params.a) * std::pow(params.w2, params.b), 1.0 / s);
        return std::pow(params.p, 1.0 / (1.0 - s)) * braces(kappa * cost);
    }
    return std::pow(params.w1, params.a / (s - 1.0)) * std::pow(params.w2, params.b / (s - 1.0)) *
           std::pow(params.p, s - 1.0) * braces(kappa);
}

void ProfitPath::validate() const {
    if (times.size() < 2) throw DomainError("ProfitPath: need at least two grid points");
    if (times.size() != pi_values.size()) throw DomainError("ProfitPath: times and pi_values differ in length");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw DomainError("ProfitPath: times must be strictly increasing");
    }
    if (!(lag >= 0.0)) throw DomainError("ProfitPath: lag must be >= 0");
}

namespace {

// Integral over [from, to] of the piecewise-linear interpolant through (x_i, f_i).
double linear_integral(const std::vector<double>& x, const std::vector<double>& f, double from, double to) {
    if (to <= from) return 0.0;
    auto value_at = [&](std::size_t i, double s) {
        const double w = (s - x[i]) / (x[i + 1] - x[i]);
        return f[i] + w * (f[i + 1] - f[i]);
    };
    auto first = std::upper_bound(x.begin(), x.end(), from);
    std::size_t i = first == x.begin() ? 0 : static_cast<std::size_t>(first - x.begin()) - 1;
    i = std::min(i, x.size() - 2);
    double total = 0.0;
    double left = from;
    while (left < to && i + 1 < x.size()) {
        const double right = std::min(to, x[i + 1]);
        if (right > left) total += 0.5 * (right - left) * (value_at(i, left) + value_at(i, right));
        left = right;
        ++i;
    }
    return total;
}

void require_coverage(const std::vector<double>& x, double from, double to, const char* what) {
    const double slack = 1e-12 * std::max(1.0, std::fabs(x.back()));
    if (from < x.front() - slack || to > x.back() + slack) {
        throw DomainError(std::string(what) + ": window [" + std::to_string(from) + ", " + std::to_string(to) +
                          "] not covered by the path");
    }
}

}  // namespace

ValueDecomposition accrue(const ProfitPath& path, double vc, double u) {
    path.validate();
    const double t0 = path.times.front();
    if (u < t0 || u > path.times.back()) throw DomainError("accrue: u outside [T0, T1]");
    const double cut = std::max(t0, u - path.lag);
    ValueDecomposition out;
    out.vc = vc;
    out.delta_ns = linear_integral(path.times, path.pi_values, t0, cut);
    out.delta_s = linear_integral(path.times, path.pi_values, cut, u);
    out.v_u = vc + out.delta_ns + out.delta_s;
    return out;
}

DriverPath log_driver(const GbmPath& path) {
    DriverPath out;
    out.times = path.times;
    out.values.reserve(path.values.size());
    for (double v : path.values) out.values.push_back(std::log(v));
    return out;
}

double stochastic_profit_integral(double alpha, double beta, const DriverPath& y, double from, double to) {
    if (!(alpha > 0.0)) throw DomainError("stochastic_profit_integral: alpha must be > 0");
    if (y.times.size() < 2 || y.times.size() != y.values.size()) {
        throw DomainError("stochastic_profit_integral: malformed driver path");
    }
    if (to < from) throw DomainError("stochastic_profit_integral: empty window");
    require_coverage(y.times, from, to, "stochastic_profit_integral");
    std::vector<double> integrand;
    integrand.reserve(y.values.size());
    for (double v : y.values) integrand.push_back(alpha * std::exp(beta * v));
    return linear_integral(y.times, integrand, std::max(from, y.times.front()), std::min(to, y.times.back()));
}

double stochastic_profit_value(double alpha, double beta, const DriverPath& y, double lag, double u, double t0) {
    if (!(lag >= 0.0)) throw DomainError("stochastic_profit_value: lag must be >= 0");
    if (u < t0) throw DomainError("stochastic_profit_value: u before T0");
    return stochastic_profit_integral(alpha, beta, y, std::max(t0, u - lag), u);
}

ProfitPath profit_path_from_gbm(double pi0, const GbmPath& driver, double lag) {
    if (driver.values.empty()) throw DomainError("profit_path_from_gbm: empty driver");
    ProfitPath out;
    out.times = driver.times;
    out.lag = lag;
    out.pi_values.reserve(driver.values.size());
    for (double v : driver.values) out.pi_values.push_back(pi0 * v / driver.values.front());
    out.validate();
    return out;
}

}  // namespace censorlab
