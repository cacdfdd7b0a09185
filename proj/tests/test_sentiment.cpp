#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "censorlab/errors.hpp"
#include "censorlab/sentiment.hpp"
#include "censorlab/specialfn.hpp"
#include "oracles.hpp"

using namespace censorlab;

namespace {

SentimentInputs inputs(double mu, double sigma, double horizon, double s0, double threshold,
                       PerformanceIndex index = PerformanceIndex::RunningMax) {
    SentimentInputs in;
    in.s_star_t = s0;
    in.vt = threshold;
    in.t = 0.0;
    in.t1 = horizon;
    in.market_params = GbmParams(mu, sigma);
    in.index = index;
    return in;
}

}  // namespace

TEST(SentimentInputs, Validation) {
    auto in = inputs(0.0, 0.2, 1.0, 1.0, 1.0);
    in.t1 = 0.0;
    EXPECT_THROW(in.validate(), DomainError);
    in = inputs(0.0, 0.2, 1.0, 1.0, 1.0);
    in.vt = 0.0;
    EXPECT_THROW(in.validate(), DomainError);
    in = inputs(0.0, 0.2, 1.0, 2.0, 1.0);
    in.market_rule = DecisionRule::good(0.2);
    EXPECT_NEAR(in.a_star_log(), std::log(1.2 / 2.0), 1e-15);
}

TEST(RunningMax, Examples) {
    EXPECT_EQ(prob_running_max_trigger(inputs(0.05, 0.3, 1.0, 2.0, 1.0)), 1.0);
    const double a = std::log(1.3);
    const double p = prob_running_max_trigger(inputs(0.0, 0.3, 0.7, 1.0, 1.3));
    EXPECT_NEAR(p, std::erfc(a / (0.3 * std::sqrt(2.0 * 0.7))), 1e-15);
    EXPECT_THROW(prob_running_max_trigger(inputs(0.0, 0.3, 1.0, 1.0, 1.3, PerformanceIndex::RunningMin)), DomainError);
}

TEST(RunningMax, MatchesIndependentArrangement) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> mu(-0.2, 0.2), sigma(0.1, 0.6), h(0.05, 3.0), a(1e-3, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double m = mu(rng), s = sigma(rng), d = h(rng), A = a(rng);
        const double ref = oracle::running_max_tail(m, s, d, A);
        EXPECT_NEAR(max_exceed_probability(m, s, d, A), ref, 1e-12) << m << " " << s << " " << d << " " << A;
    }
}

TEST(RunningMax, BoundaryContinuityAtZeroLevel) {
    for (double mu : {-0.1, 0.0, 0.1}) {
        EXPECT_NEAR(max_exceed_probability(mu, 0.3, 1.0, 1e-13), 1.0, 1e-9);
    }
}

TEST(RunningMax, TinyHorizonIsIndicator) {
    EXPECT_EQ(max_exceed_probability(0.1, 0.3, 1e-13, 0.01), 0.0);
    EXPECT_EQ(max_exceed_probability(0.1, 0.3, 1e-13, -0.01), 1.0);
}

TEST(RunningMax, Monotonicity) {
    for (double sigma : {0.1, 0.3, 0.6}) {
        double prev = 2.0;
        for (double thr = 1.0; thr <= 3.0; thr += 0.05) {
            const double p = prob_running_max_trigger(inputs(0.02, sigma, 1.0, 1.0, thr));
            EXPECT_LE(p, prev);
            prev = p;
        }
        prev = -1.0;
        for (double s0 = 0.3; s0 <= 1.5; s0 += 0.05) {
            const double p = prob_running_max_trigger(inputs(0.02, sigma, 1.0, s0, 1.0));
            EXPECT_GE(p, prev);
            prev = p;
        }
    }
}

TEST(RunningMin, Examples) {
    EXPECT_EQ(prob_running_min_trigger(inputs(0.0, 0.3, 1.0, 1.0, 1.5, PerformanceIndex::RunningMin)), 0.0);
    const double p = prob_running_min_trigger(inputs(-0.02, 0.25, 0.5, 1.4, 1.0, PerformanceIndex::RunningMin));
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
}

TEST(RunningMin, DualityWithRunningMax) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> mu(-0.2, 0.2), sigma(0.1, 0.6), h(0.05, 3.0), a(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double m = mu(rng), s = sigma(rng), d = h(rng), A = a(rng);
        EXPECT_NEAR(min_exceed_probability(m, s, d, A), 1.0 - max_exceed_probability(-m, s, d, -A), 1e-12);
    }
}

TEST(SentimentValue, Complementarity) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> mu(-0.2, 0.2), sigma(0.1, 0.6), h(0.05, 3.0), s0(0.5, 2.0), vt(0.5, 2.0);
    for (auto idx : {PerformanceIndex::RunningMax, PerformanceIndex::RunningMin}) {
        for (int i = 0; i < 300; ++i) {
            const auto v = sentiment_value(inputs(mu(rng), sigma(rng), h(rng), s0(rng), vt(rng), idx));
            EXPECT_NEAR(v.prob_good + v.prob_bad, 1.0, 1e-12);
        }
    }
}

TEST(SentimentValue, Examples) {
    auto in = inputs(0.05, 0.3, 2.0, 2.0, 1.0);
    in.market_rule = DecisionRule::good(0.1);
    in.r = 0.03;
    auto v = sentiment_value(in);
    EXPECT_DOUBLE_EQ(v.v_star, 1.1 * std::exp(-0.03 * 2.0));
    in.r = 0.0;
    v = sentiment_value(in);
    EXPECT_DOUBLE_EQ(v.v_star, 1.1);
}

TEST(SentimentValue, ComponentsCompose) {
    for (Signature sig : {Signature::Good, Signature::Bad}) {
        auto in = inputs(0.05, 0.3, 1.0, 1.0, 1.0);
        in.market_rule = DecisionRule(sig, 0.1);
        in.r = 0.02;
        const auto v = sentiment_value(in);
        EXPECT_NEAR(v.e_star, 1.1, 1e-15);
        EXPECT_NEAR(v.discount, std::exp(-0.02), 1e-15);
        const double branch = sig == Signature::Good ? v.prob_good : v.prob_bad;
        EXPECT_NEAR(v.v_star, v.e_star * branch * v.discount, 1e-12);
    }
}

TEST(SentimentValue, MarketAndFirmCallSitesAgree) {
    // Same evaluator serves both measures: identical parameters, identical probabilities.
    const auto a = inputs(0.03, 0.25, 0.8, 1.0, 1.2);
    const auto b = inputs(0.03, 0.25, 0.8, 1.0, 1.2);
    EXPECT_EQ(prob_running_max_trigger(a), trigger_probability(b));
}
