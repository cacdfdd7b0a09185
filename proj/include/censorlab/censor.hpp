#pragma once

#include <string>
#include <utility>
#include <vector>

#include "censorlab/process.hpp"
#include "censorlab/rules.hpp"

namespace censorlab {

/// Deterministic observation scheme on [t, T]: continuously monitored
/// intervals C, discrete monitoring dates D, and the unmonitored rest.
class ObservationScheme {
public:
    using Interval = std::pair<double, double>;

    ObservationScheme(double t, double T, std::vector<Interval> continuous_intervals = {},
                      std::vector<double> discrete_times = {});

    double start() const { return t_; }
    double end() const { return T_; }
    double length() const { return T_ - t_; }
    const std::vector<Interval>& continuous_intervals() const { return continuous_; }
    const std::vector<double>& discrete_times() const { return discrete_; }

    /// Total length of C.
    double continuous_volume() const;
    /// 1 / #D, or 0 when D is empty.
    double discrete_weight() const;
    bool fully_continuous() const;

private:
    double t_;
    double T_;
    std::vector<Interval> continuous_;
    std::vector<double> discrete_;
};

/// Censor equation for a firm value normalised to 1 at the start of the window.
/// Values are read as already discounted to t; the only rate is the firm drift.
struct CensorProblem {
    ObservationScheme scheme;
    DecisionRule rule;
    GbmParams firm_params;  // start_value must be 1
    double vt_label = 1.0;

    void validate() const;
};

/// Valuation after observing x with censor l: x if the rule fires, l otherwise,
/// written as level + vanilla option + digital correction.
double z_payoff(const DecisionRule& rule, double x, double l);

/// The same payoff from the indicator form x 1{fire} + l 1{no fire}.
double z_payoff_indicator(const DecisionRule& rule, double x, double l);

struct GbmExpectations {
    double mean = 0.0;             // E[X_u]
    double tail_prob_ge = 0.0;     // P(X_u >= (1+a) l)
    double tail_prob_le = 0.0;     // P(X_u <= (1+a) l)
    double partial_mean_ge = 0.0;  // E[X_u 1{X_u >= (1+a) l}]
    double partial_mean_le = 0.0;  // E[X_u 1{X_u <= (1+a) l}]
};

/// Lognormal moments of X at lag s after the window start (s = 0 is the
/// deterministic start value).
GbmExpectations gbm_expectations(const GbmParams& firm, const DecisionRule& rule, double l, double s);

struct RhsComponents {
    double n_term = 0.0;   // (1 - vol(C)/(T - t)) l
    double s1_term = 0.0;  // partial-mean functional (GS1 / BS1)
    double s2_term = 0.0;  // censored-mass functional (GS2 / BS2)

    double sum() const { return n_term + s1_term + s2_term; }
};

/// Right-hand side of the censor equation at l, weights du/(T - t) on C and
/// 1/#D on D. Continuous parts use adaptive quadrature in time.
RhsComponents rhs(const CensorProblem& problem, double l);

/// The partial-mean functional as l -> infinity (first moments only).
double s1_at_infinity(const CensorProblem& problem);

struct ExistenceReport {
    bool continuity = true;  // holds by construction of the GBM functionals
    bool s1_infinity_finite = true;
    bool monitoring_not_full = true;  // vol(C) != T - t
    bool rhs_zero_condition = true;   // 1 >= S1(0)
    double s1_at_infinity = 0.0;
    double s1_at_zero = 0.0;
    double rhs_at_zero = 0.0;
    std::vector<std::string> notes;

    bool all_hold() const {
        return continuity && s1_infinity_finite && monitoring_not_full && rhs_zero_condition;
    }
};

ExistenceReport check_existence(const CensorProblem& problem);

struct CensorSolution {
    double l_vt = 0.0;
    double residual = 0.0;  // rhs_sum(l_vt) - 1
    Signature branch = Signature::Good;
    std::size_t iterations = 0;
    RhsComponents rhs_components;
    /// The new target VT+.
    double new_target() const { return l_vt; }
};

/// Bisection on [0, l_hi] with l_hi doubled from 1 until the right-hand side
/// exceeds 1. Throws ExistenceError naming the failed sufficient condition.
CensorSolution solve_censor(const CensorProblem& problem, double tol = 1e-10);

}  // namespace censorlab
