// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "censorlab/censor.hpp"
#include "censorlab/errors.hpp"
#include "censorlab/oracle.hpp"
#include "censorlab/process.hpp"
#include "censorlab/profits.hpp"
#include "censorlab/sentiment.hpp"
#include "censorlab/statics.hpp"
#include "oracles.hpp"

using namespace censorlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;  // 0 when the criterion has no runtime bound
    std::function<Outcome()> body;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

SentimentInputs tracker(double mu, double sigma, double horizon, double s0, double vt, PerformanceIndex index) {
    SentimentInputs in;
    in.s_star_t = s0;
    in.vt = vt;
    in.t = 0.0;
    in.t1 = horizon;
    in.market_params = GbmParams(mu, sigma);
    in.index = index;
    return in;
}

// 1. Closed-form running-max probability against simulation.
Outcome running_max_vs_simulation() {
    McConfig cfg;
    cfg.n_paths = 1000000;
    cfg.steps_per_unit = 2000;
    Outcome out;
    out.pass = true;
    double worst = 0.0;
    int failed = 0;
    for (double mu : {-0.1, 0.0, 0.05}) {
        for (double sigma : {0.2, 0.4}) {
            for (double a_star : {-0.3, 0.2}) {
                const auto in = tracker(mu, sigma, 1.0, 1.0, std::exp(a_star), PerformanceIndex::RunningMax);
                const double closed = prob_running_max_trigger(in);
                const McEstimate est = mc_trigger_probability(in, cfg);
                const double diff = std::fabs(closed - est.mean);
                const double band = 3.0 * est.std_error + 5e-3;
                worst = std::max(worst, diff / band);
                std::printf("    mu=%5.2f sigma=%.1f A=%5.2f closed=%.6f mc=%.6f se=%.6f diff=%.2e band=%.2e\n", mu, sigma,
                            a_star, closed, est.mean, est.std_error, diff, band);
                if (!(diff <= band)) {
                    out.pass = false;
                    ++failed;
                }
            }
        }
    }
    out.detail = "12 cases, " + std::to_string(failed) + " outside band, worst diff/band " + fmt("%.3f", worst);
    return out;
}

// 2. Min-branch closed form against the reflected max-branch closed form.
Outcome running_min_duality() {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double mu = -0.3 + 0.6 * u(gen);
        const double sigma = 0.1 + 0.5 * u(gen);
        const double horizon = 0.1 + 2.9 * u(gen);
        const double s0 = 0.5 + 1.5 * u(gen);
        const double vt = 0.5 + 1.5 * u(gen);
        const auto in = tracker(mu, sigma, horizon, s0, vt, PerformanceIndex::RunningMin);
        const double a = std::log(vt / s0);
        // {min X >= A} is the complement of {max(-X) > -A}; -X drifts at -mu.
        const double reflected = a >= 0.0 ? 0.0 : 1.0 - max_exceed_probability(-mu, sigma, horizon, -a);
        worst = std::max(worst, std::fabs(prob_running_min_trigger(in) - reflected));
    }
    return {worst <= 1e-12, "100 points, max abs diff " + fmt("%.2e", worst)};
}

// 3. Good and bad probabilities sum to one.
Outcome complementarity() {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (auto index : {PerformanceIndex::RunningMax, PerformanceIndex::RunningMin}) {
        for (int k = 0; k < 100; ++k) {
            auto in = tracker(-0.3 + 0.6 * u(gen), 0.1 + 0.5 * u(gen), 0.1 + 2.9 * u(gen), 0.5 + 1.5 * u(gen),
                              0.5 + 1.5 * u(gen), index);
            in.market_rule = DecisionRule::good(0.2 * u(gen));
            const SentimentValue v = sentiment_value(in);
            worst = std::max(worst, std::fabs(v.prob_good + v.prob_bad - 1.0));
        }
    }
    return {worst <= 1e-12, "100 draws per index, max |good + bad - 1| " + fmt("%.2e", worst)};
}

// 4. Censor threshold in the degenerate limits.
Outcome censor_degenerate_limits() {
    const CensorProblem none{ObservationScheme(0.0, 1.0), DecisionRule::good(0.0), GbmParams::from_arithmetic_drift(0.05, 0.3),
                             1.0};
    const ObservationScheme single(0.0, 1.0, {}, {0.5});
    const GbmParams unit = GbmParams::from_arithmetic_drift(0.0, 1e-12);
    const CensorProblem good{single, DecisionRule::good(0.0), unit, 1.0};
    const CensorProblem bad{single, DecisionRule::bad(0.0), unit, 1.0};
    const double e1 = std::fabs(solve_censor(none).l_vt - 1.0);
    const double e0 = std::fabs(solve_censor(good).l_vt - 0.0);
    const double eh = std::fabs(solve_censor(bad).l_vt - 0.5);
    std::ostringstream d;
    d << "|L-1| " << fmt("%.1e", e1) << ", |L-0| " << fmt("%.1e", e0) << ", |L-0.5| " << fmt("%.1e", eh);
    return {e1 <= 1e-8 && e0 <= 1e-8 && eh <= 1e-8, d.str()};
}

// 5. Censor solver on generic problems, re-checked by simulation.
Outcome censor_generic() {
    struct Case {
        ObservationScheme scheme;
        DecisionRule rule;
        double m, sigma;
    };
    const std::vector<Case> cases{
        {ObservationScheme(0.0, 1.0, {{0.2, 0.6}}), DecisionRule::good(0.0), 0.05, 0.3},
        {ObservationScheme(0.0, 1.0, {{0.0, 0.3}}, {0.6, 0.9}), DecisionRule::good(0.1), -0.5, 0.3},
        {ObservationScheme(0.0, 2.0, {{0.5, 1.0}, {1.5, 1.8}}), DecisionRule::good(0.1), 0.1, 0.4},
        {ObservationScheme(0.0, 1.0, {}, {0.5}), DecisionRule::good(0.0), -0.2, 0.3},
        {ObservationScheme(0.0, 1.0, {{0.0, 0.3}}, {0.6, 0.9}), DecisionRule::bad(0.0), 0.05, 0.3},
        {ObservationScheme(0.0, 1.0, {{0.0, 0.3}}, {0.6, 0.9}), DecisionRule::bad(0.1), -0.3, 0.6},
        {ObservationScheme(0.0, 2.0, {{0.5, 1.0}}, {1.5}), DecisionRule::bad(0.1), 0.1, 0.4},
        {ObservationScheme(0.0, 1.0, {{0.1, 0.4}, {0.5, 0.7}}), DecisionRule::bad(0.0), -0.1, 0.5},
    };
    McConfig cfg;
    cfg.n_paths = 100000;
    Outcome out;
    out.pass = true;
    double worst_resid = 0.0;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& c = cases[k];
        const CensorProblem p{c.scheme, c.rule, GbmParams::from_arithmetic_drift(c.m, c.sigma), 1.0};
        const CensorSolution sol = solve_censor(p);
        const double resid = std::fabs(rhs(p, sol.l_vt).sum() - 1.0);
        const McEstimate est = mc_censor_rhs(p, sol.l_vt, cfg);
        const double z = std::fabs(est.mean - 1.0) / est.std_error;
        std::printf("    case %zu %s a=%.1f L=%.8f resid=%.1e mc=%.6f se=%.2e z=%.2f\n", k + 1,
                    c.rule.signature() == Signature::Good ? "good" : "bad ", c.rule.markup(), sol.l_vt, resid, est.mean,
                    est.std_error, z);
        worst_resid = std::max(worst_resid, resid);
        worst_z = std::max(worst_z, z);
        if (!(resid <= 1e-8) || !(std::fabs(est.mean - 1.0) <= 3.0 * est.std_error)) out.pass = false;
    }
    out.detail = "8 problems, max residual " + fmt("%.1e", worst_resid) + ", max |mc - 1|/se " + fmt("%.2f", worst_z);
    return out;
}

TriggerState random_state(std::mt19937_64& gen, double a_sign) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TriggerState st;
    st.v_t = 1.0;
    st.inputs.s_star_t = 1.0;
    const double a = a_sign * (0.001 + 0.6 * u(gen));  // |A*| >= 1e-3
    const double markup = 0.2 * u(gen);
    st.inputs.market_rule = DecisionRule::good(markup);
    st.inputs.vt = std::exp(a) / (1.0 + markup);
    st.inputs.r = 0.005 + 0.095 * u(gen);
    st.inputs.t = 0.0;
    st.inputs.t1 = 0.25 + 1.75 * u(gen);
    st.inputs.market_params = GbmParams(-0.2 + 0.4 * u(gen), 0.15 + 0.45 * u(gen));
    st.firm_rule = DecisionRule::good(0.1 * u(gen));
    return st;
}

// 6. Horizon partial of the max-branch value against finite differences.
Outcome horizon_partials() {
    std::mt19937_64 gen(6);
    double worst_rel = 0.0;
    double worst_identity = 0.0;
    int n = 0;
    for (double sign : {1.0, -1.0}) {
        for (int k = 0; k < 25; ++k, ++n) {
            const TriggerState st = random_state(gen, sign);
            const StaticsReport rep = partial_t1_minus_t(st);
            worst_rel = std::max(worst_rel, rep.rel_err);
            if (rep.a_star_log < 0.0) {
                worst_identity = std::max(worst_identity,
                                          std::fabs(rep.partial_analytic + st.inputs.r * rep.v_star_branch));
            }
        }
    }
    std::ostringstream d;
    d << n << " points, max rel err " << fmt("%.2e", worst_rel) << ", max |d + rV| (A<0) " << fmt("%.2e", worst_identity);
    return {worst_rel <= 1e-4 && worst_identity <= 1e-10, d.str()};
}

// 7. Signs of the rate partials and of the tracker-level partial.
Outcome sign_assertions() {
    std::mt19937_64 gen(7);
    int d_r_neg = 0;
    int d_drift_neg = 0;
    int s_pos = 0;
    int n = 0;
    while (n < 50) {
        const TriggerState st = random_state(gen, 1.0);
        const double q = prob_running_max_trigger(st.inputs);
        if (q < 1e-3 || q > 1.0 - 1e-3) continue;
        const RatePartials rp = partials_rates(st, Branch::Max);
        if (rp.d_r < 0.0) ++d_r_neg;
        if (rp.d_r_minus_delta < 0.0) ++d_drift_neg;
        if (partial_s_star(st) > 0.0) ++s_pos;
        ++n;
    }
    std::ostringstream d;
    d << "interior points 50: d_r<0 on " << d_r_neg << ", d_(r-delta)<0 on " << d_drift_neg << ", d_S*>0 on " << s_pos;
    return {d_r_neg == 50 && d_drift_neg == 50 && s_pos == 50, d.str()};
}

// 8. Path-wise scaling of the performance indices.
Outcome scaling_invariance() {
    const GbmParams params(0.03, 0.35);
    double worst = 0.0;
    for (auto index : {PerformanceIndex::RunningMax, PerformanceIndex::RunningMin, PerformanceIndex::RunningAverage}) {
        for (double lambda : {0.5, 1.0, 2.0}) {
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                worst = std::max(worst, check_scaling(params, 1.0, 500, seed, lambda, index));
            }
        }
    }
    return {worst <= 1e-12, "3 indices x 3 scales x 10 paths, max rel err " + fmt("%.2e", worst)};
}

// 9. Published profit formulas against brute-force maximisation.
Outcome cobb_douglas_adjudication() {
    const std::vector<CobbDouglasParams> points{
        {0.3, 0.4, 1.0, 1.0, 1.0}, {0.3, 0.4, 2.0, 1.0, 1.0}, {0.2, 0.5, 1.5, 0.8, 1.2},
        {0.4, 0.3, 1.0, 1.5, 0.7}, {0.25, 0.25, 3.0, 2.0, 1.0}};
    std::string detail;
    bool any = false;
    for (auto variant : {CobbDouglasVariant::CostFunctionForm, CobbDouglasVariant::FactorPriceForm}) {
        const char* name = variant == CobbDouglasVariant::CostFunctionForm ? "cost-function form" : "factor-price form";
        bool matches = true;
        double worst = 0.0;
        for (const auto& p : points) {
            const double brute = oracle::cobb_douglas_grid_max(p.a, p.b, p.p, p.w1, p.w2);
            const double formula = cobb_douglas_profit(p, variant);
            const double rel = std::fabs(formula - brute) / brute;
            std::printf("    %-18s a=%.2f b=%.2f p=%.1f w=(%.1f,%.1f) formula=%.6g brute=%.6g rel=%.3g\n", name, p.a, p.b, p.p,
                        p.w1, p.w2, formula, brute, rel);
            worst = std::max(worst, rel);
            if (!(rel <= 0.01)) matches = false;
        }
        double homog = 0.0;
        for (const auto& p : points) {
            CobbDouglasParams q = p;
            q.p *= 2.0;
            q.w1 *= 2.0;
            q.w2 *= 2.0;
            const double f1 = cobb_douglas_profit(p, variant);
            homog = std::max(homog, std::fabs(cobb_douglas_profit(q, variant) - 2.0 * f1) / std::fabs(2.0 * f1));
        }
        if (matches && homog <= 1e-10) any = true;
        detail += std::string(detail.empty() ? "" : "; ") + name + ": max rel err " + fmt("%.3g", worst) +
                  ", homogeneity err " + fmt("%.2e", homog);
    }
    return {any, detail};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

// 10. Repeated verify runs give identical bytes.
Outcome verify_determinism() {
    const auto base = std::filesystem::temp_directory_path() / "censor_lab_acceptance_determinism";
    std::filesystem::remove_all(base);
    std::string out[2];
    const char* threads[2] = {"1", "4"};
    for (int k = 0; k < 2; ++k) {
        const auto dir = base / ("run" + std::to_string(k));
        const std::string cmd = std::string("CENSOR_LAB_THREADS=") + threads[k] + " \"" + CENSOR_LAB_BINARY +
                                "\" verify --paths 16000 --steps 500 --seed 20240101 --out \"" + dir.string() +
                                "\" >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            return {false, "verify run " + std::to_string(k + 1) + " exited with status " + std::to_string(status)};
        }
        out[k] = slurp(dir / "verify.results.json");
    }
    const bool same = !out[0].empty() && out[0] == out[1];
    return {same, std::string(same ? "identical" : "different") + " JSON across two runs (1 and 4 threads), " +
                      std::to_string(out[0].size()) + " bytes"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "running-max closed form vs simulation", 300.0, running_max_vs_simulation},
        {2, "running-min duality", 1.0, running_min_duality},
        {3, "good/bad complementarity", 1.0, complementarity},
        {4, "censor degenerate limits", 1.0, censor_degenerate_limits},
        {5, "censor generic soundness", 120.0, censor_generic},
        {6, "horizon partial vs finite differences", 5.0, horizon_partials},
        {7, "sign assertions", 5.0, sign_assertions},
        {8, "scaling invariance", 1.0, scaling_invariance},
        {9, "Cobb-Douglas adjudication", 30.0, cobb_douglas_adjudication},
        {10, "verify determinism", 0.0, verify_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_seconds <= 0.0 || secs <= c.budget_seconds;
        const bool pass = o.pass && in_time;
        if (!pass) ++failures;
        std::string timing = fmt("%.2f s", secs);
        if (c.budget_seconds > 0.0) timing += fmt(" of %.0f s", c.budget_seconds);
        if (!in_time) timing += " OVER BUDGET";
        std::printf("%s %2d %s: %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(), timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
