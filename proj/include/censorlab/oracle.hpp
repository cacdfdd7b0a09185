#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "censorlab/censor.hpp"
#include "censorlab/sentiment.hpp"

namespace censorlab {

struct McConfig {
    std::size_t n_paths = 100000;
    std::size_t steps_per_unit = 2000;
    std::uint64_t base_seed = 20240101;
    std::size_t batches = 16;
    /// Count crossings between grid points with the Brownian-bridge law. Off
    /// gives plain discrete monitoring, which under-counts running-max hits.
    bool bridge_correction = true;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Worker threads for MC batches: CENSOR_LAB_THREADS if set, else the
/// hardware concurrency.
std::size_t mc_thread_count();

/// Frequency of {Sigma(S*) >= (1+a*) VT} over simulated tracker paths.
McEstimate mc_trigger_probability(const SentimentInputs& inputs, const McConfig& cfg);

/// The per-batch estimates behind mc_trigger_probability, in batch order.
std::vector<McEstimate> mc_trigger_probability_batches(const SentimentInputs& inputs, const McConfig& cfg);

/// E* 1{branch event} e^{-r(T1-t)}, on the draws mc_trigger_probability uses.
McEstimate mc_sentiment(const SentimentInputs& inputs, const McConfig& cfg);

/// Direct simulation of the censor right-hand side at l: firm values drawn at
/// the scheme's dates, payoffs weighted as in rhs, plus the
/// unmonitored term.
McEstimate mc_censor_rhs(const CensorProblem& problem, double l, const McConfig& cfg);

struct McExpectations {
    McEstimate mean;
    McEstimate tail_prob_ge;
    McEstimate tail_prob_le;
    McEstimate partial_mean_ge;
    McEstimate partial_mean_le;
};

/// Lognormal sampling of X at lag s, for the five gbm_expectations quantities.
McExpectations mc_gbm_expectations(const GbmParams& firm, const DecisionRule& rule, double l,
                                   double s, const McConfig& cfg);

}  // namespace censorlab
