#include "censorlab/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "censorlab/errors.hpp"
#include "censorlab/rng.hpp"

namespace censorlab {

void McConfig::validate() const {
    if (n_paths < 1) throw DomainError("McConfig: n_paths must be >= 1");
    if (steps_per_unit < 1) throw DomainError("McConfig: steps_per_unit must be >= 1");
    if (batches < 1) throw DomainError("McConfig: batches must be >= 1");
    if (n_paths % batches != 0) throw DomainError("McConfig: batches must divide n_paths");
}

std::size_t mc_thread_count() {
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CENSOR_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return hw;
}

namespace {

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double total = na + nb;
        const double d = o.mean - mean;
        mean += d * nb / total;
        m2 += o.m2 + d * d * na * nb / total;
        n += o.n;
    }

    McEstimate estimate() const {
        McEstimate e;
        e.n = n;
        e.mean = mean;
        if (n > 1) {
            const double var = std::max(m2, 0.0) / static_cast<double>(n - 1);
            e.std_error = std::sqrt(var / static_cast<double>(n));
        }
        return e;
    }
};

// Runs cfg.batches batches of n_paths / batches paths each. `path_fn(source,
// out)` writes `outputs` per-path values. Returns per-batch moments in batch order.
template <class PathFn>
std::vector<std::vector<Moments>> run_batches(const McConfig& cfg, std::size_t outputs, PathFn path_fn) {
    cfg.validate();
    const std::size_t per_batch = cfg.n_paths / cfg.batches;
    std::vector<std::vector<Moments>> results(cfg.batches, std::vector<Moments>(outputs));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        std::vector<double> values(outputs);
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= cfg.batches) return;
            try {
                NormalSource source(make_engine(cfg.base_seed, b));
                auto& acc = results[b];
                for (std::size_t i = 0; i < per_batch; ++i) {
                    path_fn(source, values.data());
                    for (std::size_t k = 0; k < outputs; ++k) acc[k].add(values[k]);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(cfg.batches);
                return;
            }
        }
    };

    const std::size_t n_threads = std::min(mc_thread_count(), cfg.batches);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<McEstimate> pooled(const std::vector<std::vector<Moments>>& batches) {
    std::vector<Moments> total(batches.empty() ? 0 : batches.front().size());
    for (const auto& batch : batches) {
        for (std::size_t k = 0; k < batch.size(); ++k) total[k].merge(batch[k]);
    }
    std::vector<McEstimate> out;
    for (const auto& m : total) out.push_back(m.estimate());
    return out;
}

std::size_t grid_steps(double horizon, std::size_t steps_per_unit) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon * static_cast<double>(steps_per_unit) - 1e-9)));
}

// Probability that a Brownian bridge between x0 and x1 over dt stays on one
// side of `level`, both endpoints on that side.
double bridge_stays(double gap0, double gap1, double two_over_sigma2_dt) {
    const double exponent = two_over_sigma2_dt * gap0 * gap1;
    // exp(-40) is below half an ulp of 1, so the factor rounds to exactly 1.
    return exponent > 40.0 ? 1.0 : -std::expm1(-exponent);
}

// Indicator of {Sigma >= (1+a*) VT} on one simulated tracker path, in log
// units relative to S*_t.
struct TriggerSampler {
    PerformanceIndex index;
    double level;  // A* = log((1+a*) VT / S*_t)
    double drift;  // mu dt
    double vol;    // sigma sqrt(dt)
    double two_over_sigma2_dt;
    std::size_t steps;
    bool bridge;

    double operator()(NormalSource& z) const {
        switch (index) {
            case PerformanceIndex::RunningMax: return running_max(z);
            case PerformanceIndex::RunningMin: return running_min(z);
            case PerformanceIndex::RunningAverage: return running_average(z);
        }
        return 0.0;
    }

    double running_max(NormalSource& z) const {
        if (level <= 0.0) return 1.0;
        double x = 0.0;
        double stay = 1.0;
        for (std::size_t i = 0; i < steps; ++i) {
            const double x1 = x + drift + vol * z();
            if (x1 >= level) return 1.0;
            if (bridge) stay *= bridge_stays(level - x, level - x1, two_over_sigma2_dt);
            x = x1;
        }
        if (!bridge) return 0.0;
        return z.uniform() >= stay ? 1.0 : 0.0;
    }

    double running_min(NormalSource& z) const {
        if (level > 0.0) return 0.0;
        double x = 0.0;
        double stay = 1.0;
        for (std::size_t i = 0; i < steps; ++i) {
            const double x1 = x + drift + vol * z();
            if (x1 < level) return 0.0;
            if (bridge) stay *= bridge_stays(x - level, x1 - level, two_over_sigma2_dt);
            x = x1;
        }
        if (!bridge) return 1.0;
        return z.uniform() < stay ? 1.0 : 0.0;
    }

    double running_average(NormalSource& z) const {
        double x = 0.0;
        double prev = 1.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < steps; ++i) {
            x += drift + vol * z();
            const double cur = std::exp(x);
            sum += 0.5 * (prev + cur);
            prev = cur;
        }
        return std::log(sum / static_cast<double>(steps)) >= level ? 1.0 : 0.0;
    }
};

TriggerSampler make_trigger_sampler(const SentimentInputs& inputs, const McConfig& cfg) {
    inputs.validate();
    const double horizon = inputs.horizon();
    const std::size_t steps = grid_steps(horizon, cfg.steps_per_unit);
    const double dt = horizon / static_cast<double>(steps);
    const double sigma = inputs.market_params.sigma;
    return TriggerSampler{inputs.index,   inputs.a_star_log(), inputs.market_params.mu * dt, sigma * std::sqrt(dt),
                          2.0 / (sigma * sigma * dt), steps,           cfg.bridge_correction};
}

}  // namespace

McEstimate mc_trigger_probability(const SentimentInputs& inputs, const McConfig& cfg) {
    const auto sampler = make_trigger_sampler(inputs, cfg);
    auto batches = run_batches(cfg, 1, [&](NormalSource& z, double* out) { out[0] = sampler(z); });
    return pooled(batches).front();
}

std::vector<McEstimate> mc_trigger_probability_batches(const SentimentInputs& inputs, const McConfig& cfg) {
    const auto sampler = make_trigger_sampler(inputs, cfg);
    auto batches = run_batches(cfg, 1, [&](NormalSource& z, double* out) { out[0] = sampler(z); });
    std::vector<McEstimate> out;
    for (const auto& b : batches) out.push_back(b.front().estimate());
    return out;
}

McEstimate mc_sentiment(const SentimentInputs& inputs, const McConfig& cfg) {
    const McEstimate p = mc_trigger_probability(inputs, cfg);
    const double e_star = indifference_value(inputs.market_rule, inputs.vt);
    const double scale = e_star * std::exp(-inputs.r * inputs.horizon());
    McEstimate out = p;
    out.mean = scale * (inputs.market_rule.signature() == Signature::Good ? p.mean : 1.0 - p.mean);
    out.std_error = scale * p.std_error;
    return out;
}

McEstimate mc_censor_rhs(const CensorProblem& problem, double l, const McConfig& cfg) {
    problem.validate();
    if (!(l >= 0.0)) throw DomainError("mc_censor_rhs: l must be >= 0");
    const auto& scheme = problem.scheme;
    const double t = scheme.start();
    const double length = scheme.length();

    // Observation dates with their weights: trapezoid nodes on each continuous
    // interval (weight ds / (T - t)) and the discrete dates (weight 1/#D).
    std::vector<std::pair<double, double>> nodes;
    for (const auto& [a, b] : scheme.continuous_intervals()) {
        const std::size_t n = grid_steps(b - a, cfg.steps_per_unit);
        const double h = (b - a) / static_cast<double>(n);
        for (std::size_t i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n ? 0.5 : 1.0) * h / length;
            nodes.emplace_back(i == n ? b - t : (a - t) + h * static_cast<double>(i), w);
        }
    }
    for (double u : scheme.discrete_times()) nodes.emplace_back(u - t, scheme.discrete_weight());
    std::stable_sort(nodes.begin(), nodes.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    const double n_term = (1.0 - scheme.continuous_volume() / length) * l;
    const double log_drift = problem.firm_params.mu;
    const double sigma = problem.firm_params.sigma;
    const double x0 = problem.firm_params.start_value;
    const DecisionRule rule = problem.rule;

    auto batches = run_batches(cfg, 1, [&](NormalSource& z, double* out) {
        double s_prev = 0.0;
        double log_x = 0.0;
        double total = n_term;
        for (const auto& [s, w] : nodes) {
            const double ds = s - s_prev;
            if (ds > 0.0) log_x += log_drift * ds + sigma * std::sqrt(ds) * z();
            s_prev = s;
            total += w * z_payoff(rule, x0 * std::exp(log_x), l);
        }
        out[0] = total;
    });
    return pooled(batches).front();
}

McExpectations mc_gbm_expectations(const GbmParams& firm, const DecisionRule& rule, double l, double s,
                                   const McConfig& cfg) {
    if (!(l >= 0.0)) throw DomainError("mc_gbm_expectations: l must be >= 0");
    if (!(s >= 0.0)) throw DomainError("mc_gbm_expectations: s must be >= 0");
    const double strike = rule.factor() * l;
    const double drift = firm.mu * s;
    const double vol = firm.sigma * std::sqrt(s);
    auto batches = run_batches(cfg, 5, [&](NormalSource& z, double* out) {
        const double x = firm.start_value * std::exp(drift + vol * z());
        const bool ge = x >= strike;
        const bool le = x <= strike;
        out[0] = x;
        out[1] = ge ? 1.0 : 0.0;
        out[2] = le ? 1.0 : 0.0;
        out[3] = ge ? x : 0.0;
        out[4] = le ? x : 0.0;
    });
    const auto est = pooled(batches);
    return McExpectations{est[0], est[1], est[2], est[3], est[4]};
}

}  // namespace censorlab
