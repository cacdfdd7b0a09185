#pragma once

#include <optional>

#include "censorlab/process.hpp"
#include "censorlab/rules.hpp"

namespace censorlab {

struct McConfig;

/// Market state at valuation time t for the next mandatory date t1.
struct SentimentInputs {
    double s_star_t = 1.0;  // current tracker value
    double vt = 1.0;        // declared target
    double vc = 1.0;        // declared current value (tracker restart value)
    DecisionRule market_rule = DecisionRule::good(0.0);
    double r = 0.0;
    double t = 0.0;
    double t1 = 1.0;
    GbmParams market_params{0.0, 0.2};
    PerformanceIndex index = PerformanceIndex::RunningMax;

    void validate() const;

    double horizon() const { return t1 - t; }
    /// (1 + a*) VT, the level the performance index is compared with.
    double threshold() const { return market_rule.factor() * vt; }
    /// log((1 + a*) VT / S*_t).
    double a_star_log() const;
};

struct SentimentValue {
    double v_star = 0.0;
    double prob_good = 0.0;
    double prob_bad = 0.0;
    double e_star = 0.0;
    double discount = 1.0;
};

// Closed forms for X_u = mu u + sigma W_u on [0, horizon], X_0 = 0.

/// P(max X >= level): 1 for level <= 0, otherwise the Girsanov-corrected
/// reflection formula in erfc.
double max_exceed_probability(double mu, double sigma, double horizon, double level);

/// P(max X < level) through normal_cdf; complements max_exceed_probability.
double max_below_probability(double mu, double sigma, double horizon, double level);

/// P(min X >= level): 0 for level >= 0.
double min_exceed_probability(double mu, double sigma, double horizon, double level);

/// Horizons below this are treated as instantaneous.
inline constexpr double kMinHorizon = 1e-12;

/// Q*(max S* >= (1 + a*) VT | F*_t). Requires index == RunningMax.
double prob_running_max_trigger(const SentimentInputs& inputs);

/// Q*(min S* >= (1 + a*) VT | F*_t). Requires index == RunningMin.
double prob_running_min_trigger(const SentimentInputs& inputs);

/// Good-news probability for the configured index; RunningAverage falls back
/// to the Monte Carlo oracle with `mc` (or its defaults).
double trigger_probability(const SentimentInputs& inputs, const McConfig* mc = nullptr);

SentimentValue sentiment_value(const SentimentInputs& inputs, const McConfig* mc = nullptr);

}  // namespace censorlab
