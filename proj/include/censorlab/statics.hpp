#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "censorlab/rules.hpp"
#include "censorlab/sentiment.hpp"

namespace censorlab {

/// Firm-side disclosure test at time T = inputs.t against the market proxy
/// for the window [T, inputs.t1].
struct TriggerState {
    double v_t = 1.0;
    SentimentInputs inputs;
    DecisionRule firm_rule = DecisionRule::good(0.0);
    /// E*_T; defaults to (1 + a*) VT. Overridable so E*_T can be varied on its own.
    std::optional<double> e_star;

    double effective_e_star() const;
    void validate() const;
};

/// Right-hand side of the trigger inequality: (1+a) e^{-r(T1-T)} E*_T times
/// Q*(Sigma >= (1+a*)VT) for good news, or times its complement for bad news.
double trigger_rhs(const TriggerState& state);

/// Good news fires iff V_T >= rhs, bad news iff V_T <= rhs.
bool disclosure_fires(const TriggerState& state);

enum class Monotonicity { Increasing, Decreasing, Constant, NonMonotone };
std::string_view to_string(Monotonicity m);

enum class StaticsParam { AStar, Vt, R, A, EStar };
std::string_view to_string(StaticsParam p);
StaticsParam parse_statics_param(std::string_view name);

struct MonotonicityReport {
    StaticsParam param;
    std::vector<double> grid;
    std::vector<double> rhs_values;
    Monotonicity rhs_trend;
    /// Likelihood proxy: rhs for good news, -rhs for bad news.
    Monotonicity proxy_trend;
    /// Asserted direction of disclosure likelihood as the parameter grows (+1 / -1).
    int asserted_direction;
    bool matches_assertion;
    /// Direction in which the actual trigger set {V_T >= rhs} / {V_T <= rhs} grows.
    Monotonicity trigger_set_trend;
    /// True when trigger_set_trend opposes asserted_direction.
    bool tension;
    std::optional<std::string> violation;
};

/// Sweeps one parameter over an increasing grid (>= 3 points). When a* or VT
/// is swept, E*_T stays pinned at the base state's value.
MonotonicityReport disclosure_monotonicity(const TriggerState& state, StaticsParam param,
                                            std::span<const double> grid);

enum class Branch { Max, Min };

/// (1+a) E*_T e^{-r(T1-T)} Q*_branch, Q*_branch from the running max / min closed forms.
double v_star_branch(const TriggerState& state, Branch branch);

struct StaticsReport {
    double v_star_branch = 0.0;
    double partial_analytic = 0.0;
    double partial_fd = 0.0;
    double rel_err = 0.0;
    int sign_analytic = 0;
    double eta = 0.0;
    double a_star_log = 0.0;
};

inline constexpr double kRelErrFloor = 1e-12;

/// d V*_max / d(T1 - T) analytically (two regimes in the sign of A*_T) and by
/// a central difference.
StaticsReport partial_t1_minus_t(const TriggerState& state);

struct RatePartials {
    double d_r = 0.0;              // at fixed r - delta (market drift held)
    double d_r_minus_delta = 0.0;  // varying delta at fixed r
    bool d_r_negative = false;
    bool d_r_minus_delta_negative = false;
    std::string sign_note;
};

RatePartials partials_rates(const TriggerState& state, Branch branch = Branch::Max);

/// d/dS*_T of the trigger probability for the state's index.
double partial_s_star(const TriggerState& state);

}  // namespace censorlab
