#pragma once

#include <span>
#include <vector>

#include "censorlab/process.hpp"

namespace censorlab {

/// Two-factor Cobb-Douglas technology with decreasing returns, output price p
/// and input prices w1, w2.
struct CobbDouglasParams {
    double a = 0.3;
    double b = 0.4;
    double p = 1.0;
    double w1 = 1.0;
    double w2 = 1.0;

    void validate() const;
};

/// Two candidate closed forms for the maximised profit. They differ in
/// the first exponent of kappa and in how prices enter.
enum class CobbDouglasVariant { CostFunctionForm, FactorPriceForm };

double cobb_douglas_kappa(const CobbDouglasParams& params, CobbDouglasVariant variant);
double cobb_douglas_profit(const CobbDouglasParams& params,
                           CobbDouglasVariant variant = CobbDouglasVariant::FactorPriceForm);

/// Profit flow rate pi_w sampled on [T0, T1].
struct ProfitPath {
    std::vector<double> times;
    std::vector<double> pi_values;
    double lag = 0.0;

    void validate() const;
};

struct ValueDecomposition {
    double v_u = 0.0;
    double delta_ns = 0.0;  // accrual certain at u
    double delta_s = 0.0;   // accrual within the reporting lag
    double vc = 0.0;
};

/// V_u = VC + int_{T0}^{max(T0, u - lag)} pi + int_{max(T0, u - lag)}^{u} pi, trapezoid rule.
ValueDecomposition accrue(const ProfitPath& path, double vc, double u);

/// Log price driver Y sampled on a grid.
struct DriverPath {
    std::vector<double> times;
    std::vector<double> values;
};

DriverPath log_driver(const GbmPath& path);

/// alpha int_from^to exp(beta Y_w) dw, piecewise-linear in the integrand.
double stochastic_profit_integral(double alpha, double beta, const DriverPath& y, double from,
                                  double to);

/// Uncertain part of V_u: the integral over [max(t0, u - lag), u].
double stochastic_profit_value(double alpha, double beta, const DriverPath& y, double lag, double u,
                               double t0);

/// Instantaneous profits following a GBM from pi0 on the path's grid.
ProfitPath profit_path_from_gbm(double pi0, const GbmPath& driver, double lag);

}  // namespace censorlab
