#include "censorlab/statics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "censorlab/errors.hpp"

namespace censorlab {

double TriggerState::effective_e_star() const {
    return e_star ? *e_star : indifference_value(inputs.market_rule, inputs.vt);
}

void TriggerState::validate() const {
    inputs.validate();
    if (!(v_t > 0.0)) throw DomainError("TriggerState: v_t must be > 0");
    if (e_star && !(*e_star > 0.0)) throw DomainError("TriggerState: e_star must be > 0");
}

namespace {

double discount(const TriggerState& s) { return std::exp(-s.inputs.r * s.inputs.horizon()); }

double closed_form_probability(const SentimentInputs& in) {
    switch (in.index) {
        case PerformanceIndex::RunningMax: return prob_running_max_trigger(in);
        case PerformanceIndex::RunningMin: return prob_running_min_trigger(in);
        case PerformanceIndex::RunningAverage: break;
    }
    throw DomainError("comparative statics need a running_max or running_min index");
}

}  // namespace

double trigger_rhs(const TriggerState& state) {
    state.validate();
    const double q = closed_form_probability(state.inputs);
    const double base = state.firm_rule.factor() * discount(state) * state.effective_e_star();
    return state.firm_rule.signature() == Signature::Good ? base * q : base * (1.0 - q);
}

bool disclosure_fires(const TriggerState& state) {
    const double rhs = trigger_rhs(state);
    return state.firm_rule.signature() == Signature::Good ? state.v_t >= rhs : state.v_t <= rhs;
}

std::string_view to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::Increasing: return "increasing";
        case Monotonicity::Decreasing: return "decreasing";
        case Monotonicity::Constant: return "constant";
        case Monotonicity::NonMonotone: return "non_monotone";
    }
    return "unknown";
}

std::string_view to_string(StaticsParam p) {
    switch (p) {
        case StaticsParam::AStar: return "a_star";
        case StaticsParam::Vt: return "vt";
        case StaticsParam::R: return "r";
        case StaticsParam::A: return "a";
        case StaticsParam::EStar: return "e_star";
    }
    return "unknown";
}

StaticsParam parse_statics_param(std::string_view name) {
    if (name == "a_star") return StaticsParam::AStar;
    if (name == "vt") return StaticsParam::Vt;
    if (name == "r") return StaticsParam::R;
    if (name == "a") return StaticsParam::A;
    if (name == "e_star") return StaticsParam::EStar;
    throw DomainError("unknown comparative-statics parameter '" + std::string(name) + "'");
}

namespace {

Monotonicity classify(const std::vector<double>& values) {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-13 * std::max(scale, 1e-300);
    bool up = false;
    bool down = false;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        if (d > tol) up = true;
        if (d < -tol) down = true;
    }
    if (up && down) return Monotonicity::NonMonotone;
    if (up) return Monotonicity::Increasing;
    if (down) return Monotonicity::Decreasing;
    return Monotonicity::Constant;
}

Monotonicity negate(Monotonicity m) {
    switch (m) {
        case Monotonicity::Increasing: return Monotonicity::Decreasing;
        case Monotonicity::Decreasing: return Monotonicity::Increasing;
        default: return m;
    }
}

int direction(Monotonicity m) {
    switch (m) {
        case Monotonicity::Increasing: return 1;
        case Monotonicity::Decreasing: return -1;
        default: return 0;
    }
}

// Likelihood direction asserted for disclosure as the parameter increases.
int asserted_direction(StaticsParam p, Signature branch) {
    const int good = branch == Signature::Good ? 1 : -1;
    switch (p) {
        case StaticsParam::AStar:
        case StaticsParam::Vt: return -1;
        case StaticsParam::R: return -good;
        case StaticsParam::A:
        case StaticsParam::EStar: return good;
    }
    return 0;
}

TriggerState with_param(const TriggerState& base, StaticsParam p, double value, double pinned_e_star) {
    TriggerState s = base;
    switch (p) {
        case StaticsParam::AStar:
            s.inputs.market_rule = s.inputs.market_rule.with_markup(value);
            s.e_star = pinned_e_star;
            break;
        case StaticsParam::Vt:
            s.inputs.vt = value;
            s.e_star = pinned_e_star;
            break;
        case StaticsParam::R: s.inputs.r = value; break;
        case StaticsParam::A: s.firm_rule = s.firm_rule.with_markup(value); break;
        case StaticsParam::EStar: s.e_star = value; break;
    }
    return s;
}

}  // namespace

MonotonicityReport disclosure_monotonicity(const TriggerState& state, StaticsParam param,
                                            std::span<const double> grid) {
    state.validate();
    if (grid.size() < 3) throw DomainError("disclosure_monotonicity: grid needs at least 3 points");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw DomainError("disclosure_monotonicity: grid must be strictly increasing");
    }

    MonotonicityReport rep{};
    rep.param = param;
    rep.grid.assign(grid.begin(), grid.end());
    const double pinned = state.effective_e_star();
    for (double v : grid) rep.rhs_values.push_back(trigger_rhs(with_param(state, param, v, pinned)));

    const Signature branch = state.firm_rule.signature();
    rep.rhs_trend = classify(rep.rhs_values);
    rep.proxy_trend = branch == Signature::Good ? rep.rhs_trend : negate(rep.rhs_trend);
    // The trigger set {V >= rhs} grows as rhs falls; {V <= rhs} grows as rhs rises.
    rep.trigger_set_trend = branch == Signature::Good ? negate(rep.rhs_trend) : rep.rhs_trend;
    rep.asserted_direction = asserted_direction(param, branch);

    const int proxy_dir = direction(rep.proxy_trend);
    rep.matches_assertion = rep.proxy_trend == Monotonicity::Constant || proxy_dir == rep.asserted_direction;
    const int trigger_dir = direction(rep.trigger_set_trend);
    rep.tension = trigger_dir != 0 && trigger_dir != rep.asserted_direction;

    if (!rep.matches_assertion) {
        std::ostringstream msg;
        msg << "likelihood proxy is " << to_string(rep.proxy_trend) << " in " << to_string(param)
            << ", expected direction " << rep.asserted_direction;
        rep.violation = msg.str();
    }
    return rep;
}

double v_star_branch(const TriggerState& state, Branch branch) {
    state.validate();
    const auto& in = state.inputs;
    const double a_star = in.a_star_log();
    const double mu = in.market_params.mu;
    const double sigma = in.market_params.sigma;
    const double q = branch == Branch::Max ? max_exceed_probability(mu, sigma, in.horizon(), a_star)
                                           : min_exceed_probability(mu, sigma, in.horizon(), a_star);
    return state.firm_rule.factor() * state.effective_e_star() * discount(state) * q;
}

namespace {

TriggerState with_horizon(const TriggerState& s, double horizon) {
    TriggerState out = s;
    out.inputs.t1 = s.inputs.t + horizon;
    return out;
}

}  // namespace

StaticsReport partial_t1_minus_t(const TriggerState& state) {
    state.validate();
    const double horizon = state.inputs.horizon();
    if (horizon < 1e-10) throw DomainError("partial_t1_minus_t: T1 - T below 1e-10");

    const double mu = state.inputs.market_params.mu;
    const double sigma = state.inputs.market_params.sigma;
    const double r = state.inputs.r;

    StaticsReport rep;
    rep.a_star_log = state.inputs.a_star_log();
    rep.v_star_branch = v_star_branch(state, Branch::Max);
    rep.partial_analytic = -r * rep.v_star_branch;
    rep.eta = (rep.a_star_log - horizon * mu) / (sigma * std::sqrt(2.0 * horizon));
    if (rep.a_star_log > 0.0) {
        // First-passage density of mu u + sigma W_u to the level A at time horizon.
        const double density = rep.a_star_log * std::exp(-rep.eta * rep.eta) /
                               (sigma * std::sqrt(2.0 * std::numbers::pi * horizon * horizon * horizon));
        rep.partial_analytic += state.firm_rule.factor() * state.effective_e_star() * std::exp(-r * horizon) * density;
    }

    const double h = std::min(std::max(1e-6, 1e-6 * horizon), 0.5 * horizon);
    rep.partial_fd = (v_star_branch(with_horizon(state, horizon + h), Branch::Max) -
                      v_star_branch(with_horizon(state, horizon - h), Branch::Max)) /
                     (2.0 * h);
    rep.rel_err = std::fabs(rep.partial_analytic - rep.partial_fd) / std::max(std::fabs(rep.partial_analytic), kRelErrFloor);
    rep.sign_analytic = (rep.partial_analytic > 0.0) - (rep.partial_analytic < 0.0);
    return rep;
}

RatePartials partials_rates(const TriggerState& state, Branch branch) {
    state.validate();
    RatePartials out;

    const double r = state.inputs.r;
    const double hr = 1e-6 * std::max(1.0, std::fabs(r));
    auto at_rate = [&](double rate) {
        TriggerState s = state;
        s.inputs.r = rate;
        return v_star_branch(s, branch);
    };
    out.d_r = (at_rate(r + hr) - at_rate(r - hr)) / (2.0 * hr);

    // r - delta enters only through the market drift mu* = r - delta - sigma^2 / 2.
    const double mu = state.inputs.market_params.mu;
    const double hm = 1e-6 * std::max(1.0, std::fabs(mu));
    auto at_drift = [&](double drift) {
        TriggerState s = state;
        s.inputs.market_params.mu = drift;
        return v_star_branch(s, branch);
    };
    out.d_r_minus_delta = (at_drift(mu + hm) - at_drift(mu - hm)) / (2.0 * hm);

    out.d_r_negative = out.d_r < 0.0;
    out.d_r_minus_delta_negative = out.d_r_minus_delta < 0.0;

    std::ostringstream note;
    note << "d_r " << (out.d_r_negative ? "< 0" : ">= 0") << ", d_(r-delta) "
         << (out.d_r_minus_delta_negative ? "< 0" : ">= 0");
    if (!out.d_r_minus_delta_negative && out.d_r_minus_delta > 0.0) {
        note << "; raising r - delta raises the market drift and with it the crossing probability";
    }
    out.sign_note = note.str();
    return out;
}

double partial_s_star(const TriggerState& state) {
    state.validate();
    const double s = state.inputs.s_star_t;
    const double h = 1e-6 * std::max(1.0, std::fabs(s));
    auto prob_at = [&](double value) {
        SentimentInputs in = state.inputs;
        in.s_star_t = value;
        return closed_form_probability(in);
    };
    return (prob_at(s + h) - prob_at(s - h)) / (2.0 * h);
}

}  // namespace censorlab
