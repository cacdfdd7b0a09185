#include "censorlab/sentiment.hpp"

#include <algorithm>
#include <cmath>

#include "censorlab/errors.hpp"
#include "censorlab/oracle.hpp"
#include "censorlab/specialfn.hpp"

namespace censorlab {

void SentimentInputs::validate() const {
    if (!(t < t1)) throw DomainError("SentimentInputs: need t < t1");
    if (!(s_star_t > 0.0)) throw DomainError("SentimentInputs: s_star_t must be > 0");
    if (!(vt > 0.0)) throw DomainError("SentimentInputs: vt must be > 0");
    if (!(vc > 0.0)) throw DomainError("SentimentInputs: vc must be > 0");
    if (!(market_params.sigma > 0.0)) throw DomainError("SentimentInputs: market sigma must be > 0");
    if (!std::isfinite(r)) throw DomainError("SentimentInputs: r must be finite");
}

double SentimentInputs::a_star_log() const {
    const double level = threshold();
    if (!(level > 0.0) || !(s_star_t > 0.0)) {
        throw DomainError("a_star_log: log of a non-positive ratio");
    }
    return std::log(level / s_star_t);
}

namespace {

void check_process_args(double sigma, double horizon, double level) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("closed form: sigma must be > 0");
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("closed form: horizon must be >= 0");
    if (std::isnan(level)) throw DomainError("closed form: level is NaN");
}

}  // namespace

double max_exceed_probability(double mu, double sigma, double horizon, double level) {
    check_process_args(sigma, horizon, level);
    if (level <= 0.0) return 1.0;
    if (horizon < kMinHorizon) return 0.0;
    const double scale = sigma * std::sqrt(2.0 * horizon);
    const double drift = horizon * mu;
    const double girsanov = 2.0 * mu * level / (sigma * sigma);
    const double p = 0.5 * erfc((level - drift) / scale) + 0.5 * scaled_erfc(girsanov, (level + drift) / scale);
    return std::clamp(p, 0.0, 1.0);
}

double max_below_probability(double mu, double sigma, double horizon, double level) {
    check_process_args(sigma, horizon, level);
    if (level <= 0.0) return 0.0;
    if (horizon < kMinHorizon) return 1.0;
    const double sd = sigma * std::sqrt(horizon);
    const double drift = horizon * mu;
    const double girsanov = 2.0 * mu * level / (sigma * sigma);
    // N(-(level + drift)/sd) = erfc((level + drift)/(sd sqrt 2)) / 2
    const double reflected = 0.5 * scaled_erfc(girsanov, (level + drift) / (sd * std::sqrt(2.0)));
    const double p = normal_cdf((level - drift) / sd) - reflected;
    return std::clamp(p, 0.0, 1.0);
}

double min_exceed_probability(double mu, double sigma, double horizon, double level) {
    check_process_args(sigma, horizon, level);
    if (level >= 0.0) return 0.0;
    if (horizon < kMinHorizon) return 1.0;
    const double scale = sigma * std::sqrt(2.0 * horizon);
    const double drift = horizon * mu;
    const double girsanov = 2.0 * mu * level / (sigma * sigma);
    const double p = 0.5 * erfc((level - drift) / scale) - 0.5 * scaled_erfc(girsanov, -(level + drift) / scale);
    return std::clamp(p, 0.0, 1.0);
}

double prob_running_max_trigger(const SentimentInputs& inputs) {
    if (inputs.index != PerformanceIndex::RunningMax) {
        throw DomainError("prob_running_max_trigger: index must be running_max");
    }
    inputs.validate();
    return max_exceed_probability(inputs.market_params.mu, inputs.market_params.sigma, inputs.horizon(),
                                  inputs.a_star_log());
}

double prob_running_min_trigger(const SentimentInputs& inputs) {
    if (inputs.index != PerformanceIndex::RunningMin) {
        throw DomainError("prob_running_min_trigger: index must be running_min");
    }
    inputs.validate();
    return min_exceed_probability(inputs.market_params.mu, inputs.market_params.sigma, inputs.horizon(),
                                  inputs.a_star_log());
}

double trigger_probability(const SentimentInputs& inputs, const McConfig* mc) {
    switch (inputs.index) {
        case PerformanceIndex::RunningMax: return prob_running_max_trigger(inputs);
        case PerformanceIndex::RunningMin: return prob_running_min_trigger(inputs);
        case PerformanceIndex::RunningAverage: {
            inputs.validate();
            const McConfig cfg = mc ? *mc : McConfig{};
            return mc_trigger_probability(inputs, cfg).mean;
        }
    }
    return 0.0;
}

namespace {

// Probability of the complementary (bad-news) event, by a route independent
// of the good-news formula where one exists.
double complementary_probability(const SentimentInputs& inputs, double prob_good) {
    const double mu = inputs.market_params.mu;
    const double sigma = inputs.market_params.sigma;
    switch (inputs.index) {
        case PerformanceIndex::RunningMax:
            return max_below_probability(mu, sigma, inputs.horizon(), inputs.a_star_log());
        case PerformanceIndex::RunningMin:
            // {min X < A} is {max(-X) > -A}, and -X is a Brownian motion with drift -mu.
            return max_exceed_probability(-mu, sigma, inputs.horizon(), -inputs.a_star_log());
        case PerformanceIndex::RunningAverage: return 1.0 - prob_good;
    }
    return 1.0 - prob_good;
}

}  // namespace

SentimentValue sentiment_value(const SentimentInputs& inputs, const McConfig* mc) {
    inputs.validate();
    SentimentValue out;
    out.prob_good = trigger_probability(inputs, mc);
    out.prob_bad = complementary_probability(inputs, out.prob_good);
    out.e_star = indifference_value(inputs.market_rule, inputs.vt);
    out.discount = std::exp(-inputs.r * inputs.horizon());
    const double branch = inputs.market_rule.signature() == Signature::Good ? out.prob_good : out.prob_bad;
    out.v_star = out.e_star * branch * out.discount;
    return out;
}

}  // namespace censorlab
