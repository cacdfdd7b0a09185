#include "censorlab/censor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "censorlab/errors.hpp"
#include "censorlab/quadrature.hpp"
#include "censorlab/specialfn.hpp"

namespace censorlab {

ObservationScheme::ObservationScheme(double t, double T, std::vector<Interval> continuous_intervals,
                                     std::vector<double> discrete_times)
    : t_(t), T_(T), continuous_(std::move(continuous_intervals)), discrete_(std::move(discrete_times)) {
    if (!std::isfinite(t_) || !std::isfinite(T_) || !(t_ < T_)) {
        throw DomainError("ObservationScheme: window must satisfy t < T");
    }
    std::sort(continuous_.begin(), continuous_.end());
    for (std::size_t i = 0; i < continuous_.size(); ++i) {
        const auto [a, b] = continuous_[i];
        if (!(a < b)) throw DomainError("ObservationScheme: continuous interval must have a < b");
        if (a < t_ || b > T_) throw DomainError("ObservationScheme: continuous interval outside [t, T]");
        if (i > 0 && a <= continuous_[i - 1].second) {
            throw DomainError("ObservationScheme: continuous intervals must be disjoint");
        }
    }
    for (std::size_t i = 0; i < discrete_.size(); ++i) {
        const double u = discrete_[i];
        if (u < t_ || u > T_) throw DomainError("ObservationScheme: discrete time outside [t, T]");
        if (i > 0 && !(u > discrete_[i - 1])) {
            throw DomainError("ObservationScheme: discrete times must be strictly increasing");
        }
        for (const auto& [a, b] : continuous_) {
            if (u > a && u < b) {
                throw DomainError("ObservationScheme: discrete time inside a continuous interval");
            }
        }
    }
}

double ObservationScheme::continuous_volume() const {
    double vol = 0.0;
    for (const auto& [a, b] : continuous_) vol += b - a;
    return vol;
}

double ObservationScheme::discrete_weight() const {
    return discrete_.empty() ? 0.0 : 1.0 / static_cast<double>(discrete_.size());
}

bool ObservationScheme::fully_continuous() const { return continuous_volume() >= length(); }

void CensorProblem::validate() const {
    if (firm_params.start_value != 1.0) {
        throw DomainError("CensorProblem: firm value must be normalised to 1 at the window start");
    }
    if (!(vt_label > 0.0)) throw DomainError("CensorProblem: vt_label must be > 0");
}

double z_payoff(const DecisionRule& rule, double x, double l) {
    const double a = rule.markup();
    const double strike = rule.factor() * l;
    if (rule.signature() == Signature::Good) {
        return l + std::max(x - strike, 0.0) + (x >= strike ? a * l : 0.0);
    }
    return l - std::max(strike - x, 0.0) + (x <= strike ? a * l : 0.0);
}

double z_payoff_indicator(const DecisionRule& rule, double x, double l) {
    return triggers(rule, x, l) ? x : l;
}

GbmExpectations gbm_expectations(const GbmParams& firm, const DecisionRule& rule, double l, double s) {
    if (!(l >= 0.0)) throw DomainError("gbm_expectations: l must be >= 0");
    if (!(s >= 0.0)) throw DomainError("gbm_expectations: s must be >= 0");
    const double x0 = firm.start_value;
    const double m = firm.arithmetic_drift();
    const double sigma = firm.sigma;
    const double strike = rule.factor() * l;

    GbmExpectations e;
    e.mean = x0 * std::exp(m * s);
    if (strike <= 0.0) {
        e.tail_prob_ge = 1.0;
        e.partial_mean_ge = e.mean;
        return e;
    }
    if (s == 0.0) {
        const bool above = x0 >= strike;
        const bool below = x0 <= strike;
        e.tail_prob_ge = above ? 1.0 : 0.0;
        e.tail_prob_le = below ? 1.0 : 0.0;
        e.partial_mean_ge = above ? x0 : 0.0;
        e.partial_mean_le = below ? x0 : 0.0;
        return e;
    }
    // Level of the driving Brownian motion at which X_s crosses the strike:
    // log X_s = log x0 + (m - sigma^2/2) s + sigma W_s.
    const double crossing = (std::log(strike / x0) - (m - 0.5 * sigma * sigma) * s) / sigma;
    const double root = std::sqrt(2.0 * s);
    e.tail_prob_ge = 0.5 * erfc(crossing / root);
    e.tail_prob_le = 0.5 * erfc(-crossing / root);
    const double shifted = (crossing - sigma * s) / root;
    e.partial_mean_ge = 0.5 * e.mean * erfc(shifted);
    e.partial_mean_le = 0.5 * e.mean * erfc(-shifted);
    return e;
}

namespace {

constexpr double kRhsQuadTol = 1e-12;

struct WeightedSums {
    double partial_mean = 0.0;  // weighted E[X 1{fire}]
    double censored = 0.0;      // weighted P(no fire)
};

WeightedSums weighted_sums(const CensorProblem& problem, double l,
                           double (*partial)(const GbmExpectations&), double (*censored)(const GbmExpectations&)) {
    const auto& scheme = problem.scheme;
    const double t = scheme.start();
    WeightedSums out;
    for (const auto& [a, b] : scheme.continuous_intervals()) {
        // s = v^2 removes the sqrt(s) behaviour of the lognormal tails near s = 0.
        auto f_partial = [&](double v) {
            return 2.0 * v * partial(gbm_expectations(problem.firm_params, problem.rule, l, v * v));
        };
        auto f_censored = [&](double v) {
            return 2.0 * v * censored(gbm_expectations(problem.firm_params, problem.rule, l, v * v));
        };
        const double v0 = std::sqrt(a - t);
        const double v1 = std::sqrt(b - t);
        const auto qp = integrate_adaptive(f_partial, v0, v1, kRhsQuadTol, 20);
        const auto qc = integrate_adaptive(f_censored, v0, v1, kRhsQuadTol, 20);
        for (const auto* q : {&qp, &qc}) {
            if (!(q->error <= 1e-8 * std::max(q->l1, 1.0)) || !std::isfinite(q->value)) {
                std::ostringstream msg;
                msg << "rhs: quadrature did not converge on [" << a << ", " << b << "] (error " << q->error << ")";
                throw NumericError(msg.str());
            }
        }
        out.partial_mean += qp.value / scheme.length();
        out.censored += qc.value / scheme.length();
    }
    const double q = scheme.discrete_weight();
    for (double u : scheme.discrete_times()) {
        const auto e = gbm_expectations(problem.firm_params, problem.rule, l, u - t);
        out.partial_mean += q * partial(e);
        out.censored += q * censored(e);
    }
    return out;
}

}  // namespace

RhsComponents rhs(const CensorProblem& problem, double l) {
    problem.validate();
    if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("rhs: l must be finite and >= 0");
    const auto& scheme = problem.scheme;

    RhsComponents out;
    out.n_term = (1.0 - scheme.continuous_volume() / scheme.length()) * l;
    // Atomless law: P(X < k l) = P(X <= k l), so the closed tails serve both strict and weak events.
    WeightedSums sums;
    if (problem.rule.signature() == Signature::Good) {
        sums = weighted_sums(
            problem, l, [](const GbmExpectations& e) { return e.partial_mean_ge; },
            [](const GbmExpectations& e) { return e.tail_prob_le; });
    } else {
        sums = weighted_sums(
            problem, l, [](const GbmExpectations& e) { return e.partial_mean_le; },
            [](const GbmExpectations& e) { return e.tail_prob_ge; });
    }
    out.s1_term = sums.partial_mean;
    out.s2_term = l * sums.censored;
    return out;
}

double s1_at_infinity(const CensorProblem& problem) {
    problem.validate();
    const auto& scheme = problem.scheme;
    const double m = problem.firm_params.arithmetic_drift();
    const double t = scheme.start();
    double total = 0.0;
    for (const auto& [a, b] : scheme.continuous_intervals()) {
        const double integral = m == 0.0 ? (b - a) : (std::exp(m * (b - t)) - std::exp(m * (a - t))) / m;
        total += integral / scheme.length();
    }
    for (double u : scheme.discrete_times()) total += scheme.discrete_weight() * std::exp(m * (u - t));
    return problem.firm_params.start_value * total;
}

ExistenceReport check_existence(const CensorProblem& problem) {
    problem.validate();
    ExistenceReport report;
    report.notes.emplace_back("continuity: GBM functionals are continuous in l by construction");
    report.s1_at_infinity = s1_at_infinity(problem);
    report.s1_infinity_finite = std::isfinite(report.s1_at_infinity);
    report.monitoring_not_full = !problem.scheme.fully_continuous();
    const auto at_zero = rhs(problem, 0.0);
    report.s1_at_zero = at_zero.s1_term;
    report.rhs_at_zero = at_zero.sum();
    report.rhs_zero_condition = 1.0 >= report.s1_at_zero;
    if (problem.rule.signature() == Signature::Good && !report.monitoring_not_full) {
        report.notes.emplace_back(
            "full continuous monitoring: not required for good news, the censored term grows without bound");
    }
    const double c_weight = problem.scheme.continuous_volume() / problem.scheme.length();
    if (c_weight > 0.0 && !problem.scheme.discrete_times().empty()) {
        report.notes.emplace_back("weights on C and D are not normalised jointly; total monitoring mass exceeds 1");
    }
    return report;
}

CensorSolution solve_censor(const CensorProblem& problem, double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("solve_censor: tol must be > 0");
    problem.validate();
    const bool good = problem.rule.signature() == Signature::Good;
    if (!good && problem.scheme.fully_continuous()) {
        throw ExistenceError("full_continuous_monitoring",
                             "solve_censor: vol(C) = T - t; bad-news right-hand side stays bounded");
    }

    CensorSolution sol;
    sol.branch = problem.rule.signature();
    auto f = [&](double l) { return rhs(problem, l).sum() - 1.0; };

    const double f0 = f(0.0);
    if (std::fabs(f0) <= tol) {
        sol.l_vt = 0.0;
        sol.rhs_components = rhs(problem, 0.0);
        sol.residual = f0;
        return sol;
    }
    if (f0 > 0.0) {
        std::ostringstream msg;
        msg << "solve_censor: right-hand side at l = 0 is " << f0 + 1.0 << " > 1; no bracket";
        throw ExistenceError("rhs_at_zero_exceeds_one", msg.str());
    }

    double lo = 0.0;
    double hi = 1.0;
    double f_hi = f(hi);
    const double cap = std::ldexp(1.0, 60);
    while (f_hi <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap) {
            throw ExistenceError(good ? "unbounded_growth" : "full_continuous_monitoring",
                                 "solve_censor: right-hand side did not exceed 1 below l = 2^60");
        }
        f_hi = f(hi);
    }
    if (std::fabs(f_hi) <= tol) {
        sol.l_vt = hi;
        sol.residual = f_hi;
        sol.rhs_components = rhs(problem, hi);
        return sol;
    }

    double mid = 0.5 * (lo + hi);
    double f_mid = f(mid);
    std::size_t it = 1;
    for (; it < 400 && std::fabs(f_mid) > tol; ++it) {
        if (f_mid > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
        const double next = 0.5 * (lo + hi);
        if (next == lo || next == hi) break;
        mid = next;
        f_mid = f(mid);
    }
    if (std::fabs(f_mid) > tol) {
        std::ostringstream msg;
        msg << "solve_censor: bisection stalled at l = " << mid << " with residual " << f_mid;
        throw NumericError(msg.str());
    }
    sol.l_vt = mid;
    sol.residual = f_mid;
    sol.iterations = it;
    sol.rhs_components = rhs(problem, mid);
    return sol;
}

}  // namespace censorlab
