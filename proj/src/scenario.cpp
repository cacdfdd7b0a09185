#include "censorlab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "censorlab/errors.hpp"

namespace censorlab {

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

const Json* find(const Json& obj, const std::string& key) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number_at(const Json& obj, const std::string& prefix, const std::string& key) {
    const Json* v = find(obj, key);
    if (!v) throw ValidationError(join(prefix, key), "missing required key '" + join(prefix, key) + "'");
    if (!v->is_number()) throw ValidationError(join(prefix, key), "'" + join(prefix, key) + "' must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ValidationError(join(prefix, key), "'" + join(prefix, key) + "' must be finite");
    return x;
}

double number_or(const Json& obj, const std::string& prefix, const std::string& key, double fallback) {
    return find(obj, key) ? number_at(obj, prefix, key) : fallback;
}

double positive_at(const Json& obj, const std::string& prefix, const std::string& key) {
    const double x = number_at(obj, prefix, key);
    if (!(x > 0.0)) throw ValidationError(join(prefix, key), "'" + join(prefix, key) + "' must be > 0");
    return x;
}

const Json& object_at(const Json& obj, const std::string& prefix, const std::string& key) {
    const Json* v = find(obj, key);
    if (!v) throw ValidationError(join(prefix, key), "missing required key '" + join(prefix, key) + "'");
    if (!v->is_object()) throw ValidationError(join(prefix, key), "'" + join(prefix, key) + "' must be an object");
    return *v;
}

std::size_t count_at(const Json& obj, const std::string& prefix, const std::string& key, std::size_t fallback) {
    const Json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<long long>() < 1) {
        throw ValidationError(join(prefix, key), "'" + join(prefix, key) + "' must be a positive integer");
    }
    return v->get<std::size_t>();
}

std::vector<double> number_list(const Json& v, const std::string& key) {
    if (!v.is_array()) throw ValidationError(key, "'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ValidationError(key + "." + std::to_string(i), "'" + key + "' entries must be numbers");
        out.push_back(v[i].get<double>());
    }
    return out;
}

DecisionRule parse_rule(const Json& params, const std::string& prefix, const std::string& key) {
    const Json* v = find(params, key);
    if (!v) return DecisionRule::good(0.0);
    const std::string here = join(prefix, key);
    if (!v->is_object()) throw ValidationError(here, "'" + here + "' must be an object");
    Signature sig = Signature::Good;
    if (const Json* s = find(*v, "signature")) {
        if (s->is_string() && (*s == "good" || *s == "bad")) {
            sig = *s == "good" ? Signature::Good : Signature::Bad;
        } else if (s->is_number_integer() && (s->get<int>() == 1 || s->get<int>() == -1)) {
            sig = s->get<int>() == 1 ? Signature::Good : Signature::Bad;
        } else {
            throw ValidationError(here + ".signature", "'" + here + ".signature' must be \"good\", \"bad\", 1 or -1");
        }
    }
    const double markup = number_or(*v, here, "markup", 0.0);
    if (!(markup > -1.0)) throw ValidationError(here + ".markup", "'" + here + ".markup' must be > -1");
    return DecisionRule(sig, markup);
}

std::string_view to_string(ScenarioMode mode) {
    switch (mode) {
        case ScenarioMode::Sentiment: return "sentiment";
        case ScenarioMode::Censor: return "censor";
        case ScenarioMode::Statics: return "statics";
        case ScenarioMode::Verify: return "verify";
        case ScenarioMode::Sweep: return "sweep";
    }
    return "unknown";
}

ScenarioMode parse_mode(const Json& v, const std::string& key) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "sentiment") return ScenarioMode::Sentiment;
        if (s == "censor") return ScenarioMode::Censor;
        if (s == "statics") return ScenarioMode::Statics;
        if (s == "verify") return ScenarioMode::Verify;
        if (s == "sweep") return ScenarioMode::Sweep;
    }
    throw ValidationError(key, "'" + key + "' must be one of sentiment, censor, statics, verify, sweep");
}

Json estimate_json(const McEstimate& e) {
    return Json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}};
}

Json mc_config_json(const McConfig& cfg) {
    return Json{{"n_paths", cfg.n_paths},
                {"steps_per_unit", cfg.steps_per_unit},
                {"base_seed", cfg.base_seed},
                {"batches", cfg.batches},
                {"bridge_correction", cfg.bridge_correction}};
}

std::string_view branch_name(Signature s) { return s == Signature::Good ? "good" : "bad"; }

}  // namespace

SentimentInputs parse_sentiment_inputs(const Json& params) {
    SentimentInputs in;
    in.s_star_t = positive_at(params, "", "s_star_t");
    in.vt = positive_at(params, "", "vt");
    in.vc = find(params, "vc") ? positive_at(params, "", "vc") : 1.0;
    in.market_rule = parse_rule(params, "", "market_rule");
    in.r = number_or(params, "", "r", 0.0);
    in.t = number_or(params, "", "t", 0.0);
    in.t1 = number_at(params, "", "t1");
    if (!(in.t1 > in.t)) throw ValidationError("t1", "'t1' must exceed 't'");

    const Json& mp = object_at(params, "", "market_params");
    const double sigma = positive_at(mp, "market_params", "sigma");
    if (find(mp, "mu")) {
        in.market_params = GbmParams(number_at(mp, "market_params", "mu"), sigma);
    } else if (find(mp, "delta")) {
        in.market_params = GbmParams::market(in.r, number_at(mp, "market_params", "delta"), sigma);
    } else {
        throw ValidationError("market_params.mu", "missing required key 'market_params.mu' (or 'market_params.delta')");
    }

    if (const Json* idx = find(params, "index")) {
        if (!idx->is_string()) throw ValidationError("index", "'index' must be a string");
        try {
            in.index = parse_performance_index(idx->get<std::string>());
        } catch (const DomainError& e) {
            throw ValidationError("index", e.what());
        }
    }
    return in;
}

CensorProblem parse_censor_problem(const Json& params) {
    const Json& sch = object_at(params, "", "scheme");
    const Json* window = find(sch, "window");
    if (!window) throw ValidationError("scheme.window", "missing required key 'scheme.window'");
    const auto w = number_list(*window, "scheme.window");
    if (w.size() != 2) throw ValidationError("scheme.window", "'scheme.window' must be [t, T]");

    std::vector<ObservationScheme::Interval> intervals;
    if (const Json* c = find(sch, "continuous_intervals")) {
        if (!c->is_array()) throw ValidationError("scheme.continuous_intervals", "'scheme.continuous_intervals' must be an array");
        for (std::size_t i = 0; i < c->size(); ++i) {
            const std::string key = "scheme.continuous_intervals." + std::to_string(i);
            const auto iv = number_list((*c)[i], key);
            if (iv.size() != 2) throw ValidationError(key, "'" + key + "' must be [a, b]");
            intervals.emplace_back(iv[0], iv[1]);
        }
    }
    std::vector<double> discrete;
    if (const Json* d = find(sch, "discrete_times")) discrete = number_list(*d, "scheme.discrete_times");

    std::optional<ObservationScheme> scheme;
    try {
        scheme.emplace(w[0], w[1], intervals, discrete);
    } catch (const DomainError& e) {
        throw ValidationError("scheme", e.what());
    }

    const Json& fp = object_at(params, "", "firm_params");
    const double sigma = positive_at(fp, "firm_params", "sigma");
    const double m = number_at(fp, "firm_params", "mu");
    const double vt_label = find(params, "vt_label") ? positive_at(params, "", "vt_label") : 1.0;
    return CensorProblem{*scheme, parse_rule(params, "", "rule"), GbmParams::from_arithmetic_drift(m, sigma), vt_label};
}

TriggerState parse_trigger_state(const Json& params) {
    TriggerState st;
    st.inputs = parse_sentiment_inputs(params);
    st.v_t = positive_at(params, "", "v_t");
    st.firm_rule = parse_rule(params, "", "firm_rule");
    if (find(params, "e_star")) st.e_star = positive_at(params, "", "e_star");
    return st;
}

McConfig parse_mc_config(const Json& params, const McConfig& defaults) {
    McConfig cfg = defaults;
    if (params.is_null()) return cfg;
    if (!params.is_object()) throw ValidationError("mc", "'mc' must be an object");
    cfg.n_paths = count_at(params, "mc", "n_paths", defaults.n_paths);
    cfg.steps_per_unit = count_at(params, "mc", "steps_per_unit", defaults.steps_per_unit);
    if (const Json* s = find(params, "base_seed")) {
        if (!s->is_number_integer() || s->get<long long>() < 0) {
            throw ValidationError("mc.base_seed", "'mc.base_seed' must be a nonnegative integer");
        }
        cfg.base_seed = s->get<std::uint64_t>();
    }
    cfg.batches = find(params, "batches") ? count_at(params, "mc", "batches", defaults.batches)
                                          : std::gcd(cfg.n_paths, defaults.batches);
    if (const Json* b = find(params, "bridge_correction")) {
        if (!b->is_boolean()) throw ValidationError("mc.bridge_correction", "'mc.bridge_correction' must be a boolean");
        cfg.bridge_correction = b->get<bool>();
    }
    if (cfg.n_paths % cfg.batches != 0) throw ValidationError("mc.batches", "'mc.batches' must divide 'mc.n_paths'");
    return cfg;
}

Scenario parse_scenario(const Json& doc) {
    if (!doc.is_object()) throw ValidationError("", "scenario must be a JSON object");
    Scenario sc;
    const Json* name = find(doc, "name");
    if (!name) throw ValidationError("name", "missing required key 'name'");
    if (!name->is_string() || name->get<std::string>().empty()) throw ValidationError("name", "'name' must be a non-empty string");
    sc.name = name->get<std::string>();
    if (sc.name.find_first_of("/\\") != std::string::npos) throw ValidationError("name", "'name' must not contain path separators");

    const Json* mode = find(doc, "mode");
    if (!mode) throw ValidationError("mode", "missing required key 'mode'");
    sc.mode = parse_mode(*mode, "mode");

    if (const Json* p = find(doc, "parameters")) {
        if (!p->is_object()) throw ValidationError("parameters", "'parameters' must be an object");
        sc.parameters = *p;
    }

    if (const Json* sw = find(doc, "sweep")) {
        if (!sw->is_object()) throw ValidationError("sweep", "'sweep' must be an object");
        const Json* param = find(*sw, "parameter");
        if (!param || !param->is_string() || param->get<std::string>().empty()) {
            throw ValidationError("sweep.parameter", "'sweep.parameter' must name a parameter");
        }
        const Json* grid = find(*sw, "grid");
        if (!grid) throw ValidationError("sweep.grid", "missing required key 'sweep.grid'");
        SweepAxis axis{param->get<std::string>(), number_list(*grid, "sweep.grid")};
        if (axis.grid.empty()) throw ValidationError("sweep.grid", "'sweep.grid' must not be empty");
        sc.sweep_axis = axis;
    }

    if (sc.mode == ScenarioMode::Sweep) {
        if (!sc.sweep_axis) throw ValidationError("sweep", "sweep mode needs a 'sweep' axis");
        const Json* target = find(sc.parameters, "target");
        if (!target) throw ValidationError("parameters.target", "missing required key 'parameters.target'");
        const ScenarioMode tm = parse_mode(*target, "parameters.target");
        if (tm == ScenarioMode::Sweep || tm == ScenarioMode::Verify) {
            throw ValidationError("parameters.target", "'parameters.target' must be sentiment, censor or statics");
        }
    }
    if (sc.mode == ScenarioMode::Verify && sc.sweep_axis) {
        throw ValidationError("sweep", "verify mode does not take a sweep axis");
    }
    return sc;
}

namespace {

Json sentiment_result(const Json& params) {
    const SentimentInputs in = parse_sentiment_inputs(params);
    std::optional<McConfig> mc;
    if (const Json* m = find(params, "mc")) mc = parse_mc_config(*m);
    const SentimentValue v = sentiment_value(in, mc ? &*mc : nullptr);
    Json out{{"v_star", v.v_star},
             {"prob_good", v.prob_good},
             {"prob_bad", v.prob_bad},
             {"e_star", v.e_star},
             {"discount", v.discount},
             {"a_star_log", in.a_star_log()},
             {"index", std::string(to_string(in.index))}};
    if (mc) {
        out["mc"] = Json{{"config", mc_config_json(*mc)},
                         {"trigger_probability", estimate_json(mc_trigger_probability(in, *mc))},
                         {"sentiment", estimate_json(mc_sentiment(in, *mc))}};
    }
    return out;
}

Json existence_json(const ExistenceReport& r) {
    return Json{{"continuity", r.continuity},
                {"s1_infinity_finite", r.s1_infinity_finite},
                {"monitoring_not_full", r.monitoring_not_full},
                {"rhs_zero_condition", r.rhs_zero_condition},
                {"s1_at_infinity", r.s1_at_infinity},
                {"s1_at_zero", r.s1_at_zero},
                {"rhs_at_zero", r.rhs_at_zero},
                {"all_hold", r.all_hold()},
                {"notes", r.notes}};
}

Json rhs_json(const RhsComponents& c) {
    return Json{{"n_term", c.n_term}, {"s1_term", c.s1_term}, {"s2_term", c.s2_term}, {"sum", c.sum()}};
}

Json censor_result(const Json& params) {
    const CensorProblem problem = parse_censor_problem(params);
    const double tol = find(params, "tol") ? positive_at(params, "", "tol") : 1e-10;
    const ExistenceReport existence = check_existence(problem);
    const CensorSolution sol = solve_censor(problem, tol);
    Json out{{"existence", existence_json(existence)},
             {"solution",
              Json{{"l_vt", sol.l_vt},
                   {"residual", sol.residual},
                   {"branch", std::string(branch_name(sol.branch))},
                   {"iterations", sol.iterations},
                   {"rhs_components", rhs_json(sol.rhs_components)},
                   {"new_target", sol.new_target()}}}};
    if (const Json* m = find(params, "mc")) {
        const McConfig cfg = parse_mc_config(*m);
        const McEstimate e = mc_censor_rhs(problem, sol.l_vt, cfg);
        out["mc"] = Json{{"config", mc_config_json(cfg)},
                         {"rhs_at_l_vt", estimate_json(e)},
                         {"within_3se_of_one", std::fabs(e.mean - 1.0) <= 3.0 * e.std_error}};
    }
    return out;
}

Json monotonicity_json(const MonotonicityReport& r) {
    Json out{{"param", std::string(to_string(r.param))},
             {"grid", r.grid},
             {"rhs_values", r.rhs_values},
             {"rhs_trend", std::string(to_string(r.rhs_trend))},
             {"proxy_trend", std::string(to_string(r.proxy_trend))},
             {"asserted_direction", r.asserted_direction},
             {"matches_assertion", r.matches_assertion},
             {"trigger_set_trend", std::string(to_string(r.trigger_set_trend))},
             {"tension", r.tension}};
    if (r.violation) out["violation"] = *r.violation;
    return out;
}

Json statics_result(const Json& params) {
    const TriggerState st = parse_trigger_state(params);
    Json out{{"trigger_rhs", trigger_rhs(st)},
             {"disclosure_fires", disclosure_fires(st)},
             {"e_star", st.effective_e_star()},
             {"v_star_max", v_star_branch(st, Branch::Max)},
             {"v_star_min", v_star_branch(st, Branch::Min)},
             {"partial_s_star", partial_s_star(st)}};
    if (st.inputs.horizon() >= 1e-10) {
        const StaticsReport rep = partial_t1_minus_t(st);
        out["partial_t1_minus_t"] = Json{{"v_star_branch", rep.v_star_branch},
                                         {"partial_analytic", rep.partial_analytic},
                                         {"partial_fd", rep.partial_fd},
                                         {"rel_err", rep.rel_err},
                                         {"sign_analytic", rep.sign_analytic},
                                         {"eta", rep.eta},
                                         {"a_star_log", rep.a_star_log}};
    }
    const Branch branch = st.inputs.index == PerformanceIndex::RunningMin ? Branch::Min : Branch::Max;
    const RatePartials rp = partials_rates(st, branch);
    out["partials_rates"] = Json{{"d_r", rp.d_r},
                                 {"d_r_minus_delta", rp.d_r_minus_delta},
                                 {"d_r_negative", rp.d_r_negative},
                                 {"d_r_minus_delta_negative", rp.d_r_minus_delta_negative},
                                 {"sign_note", rp.sign_note}};
    if (const Json* m = find(params, "monotonicity")) {
        const Json* p = find(*m, "param");
        if (!p || !p->is_string()) throw ValidationError("monotonicity.param", "'monotonicity.param' must be a string");
        StaticsParam param;
        try {
            param = parse_statics_param(p->get<std::string>());
        } catch (const DomainError& e) {
            throw ValidationError("monotonicity.param", e.what());
        }
        const Json* g = find(*m, "grid");
        if (!g) throw ValidationError("monotonicity.grid", "missing required key 'monotonicity.grid'");
        const auto grid = number_list(*g, "monotonicity.grid");
        out["monotonicity"] = monotonicity_json(disclosure_monotonicity(st, param, grid));
    }
    return out;
}

Json evaluate_mode(ScenarioMode mode, const Json& params) {
    switch (mode) {
        case ScenarioMode::Sentiment: return sentiment_result(params);
        case ScenarioMode::Censor: return censor_result(params);
        case ScenarioMode::Statics: return statics_result(params);
        case ScenarioMode::Verify: {
            VerifyOptions opts;
            opts.se_multiplier = number_or(params, "", "se_multiplier", opts.se_multiplier);
            opts.allowance = number_or(params, "", "allowance", opts.allowance);
            return verify_battery(parse_mc_config(find(params, "mc") ? params["mc"] : Json()), opts);
        }
        case ScenarioMode::Sweep: break;
    }
    throw ValidationError("mode", "sweep scenarios are evaluated row by row");
}

void set_dotted(Json& obj, const std::string& path, double value) {
    Json* cur = &obj;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ValidationError("sweep.parameter", "malformed parameter path '" + path + "'");
        if (dot == std::string::npos) {
            (*cur)[part] = value;
            return;
        }
        Json& next = (*cur)[part];
        if (next.is_null()) next = Json::object();
        if (!next.is_object()) throw ValidationError("sweep.parameter", "'" + path + "' does not address a number");
        cur = &next;
        start = dot + 1;
    }
}

}  // namespace

Json evaluate_scenario(const Scenario& scenario) {
    if (!scenario.sweep_axis) return evaluate_mode(scenario.mode, scenario.parameters);
    ScenarioMode target = scenario.mode;
    if (target == ScenarioMode::Sweep) target = parse_mode(scenario.parameters.at("target"), "parameters.target");
    Json rows = Json::array();
    for (double v : scenario.sweep_axis->grid) {
        Json params = scenario.parameters;
        set_dotted(params, scenario.sweep_axis->parameter, v);
        rows.push_back(Json{{"value", v}, {"result", evaluate_mode(target, params)}});
    }
    return Json{{"parameter", scenario.sweep_axis->parameter}, {"rows", rows}};
}

Json flatten(const Json& value) {
    Json out = Json::object();
    auto walk = [&](auto&& self, const Json& v, const std::string& prefix) -> void {
        if (v.is_object()) {
            for (const auto& [k, child] : v.items()) self(self, child, join(prefix, k));
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) self(self, v[i], join(prefix, std::to_string(i)));
        } else {
            out[prefix] = v;
        }
    };
    walk(walk, value, "");
    return out;
}

namespace {

std::string csv_cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }
    return v.dump();
}

// One CSV row per entry of `rows` (already flat); columns are the sorted union of keys.
std::string csv_table(const std::vector<Json>& rows, const std::vector<std::string>& leading) {
    std::set<std::string> rest;
    for (const auto& r : rows) {
        for (const auto& [k, _] : r.items()) rest.insert(k);
    }
    std::vector<std::string> columns = leading;
    for (const auto& k : leading) rest.erase(k);
    columns.insert(columns.end(), rest.begin(), rest.end());

    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_cell(Json(columns[i]));
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            auto it = r.find(columns[i]);
            os << (i ? "," : "") << (it == r.end() ? std::string() : csv_cell(*it));
        }
        os << '\n';
    }
    return os.str();
}

std::string results_csv(const Scenario& sc, const Json& results) {
    std::vector<Json> rows;
    std::vector<std::string> leading;
    if (sc.sweep_axis) {
        const std::string& p = sc.sweep_axis->parameter;
        leading.push_back(p);
        for (const auto& row : results.at("rows")) {
            Json flat = flatten(row.at("result"));
            flat[p] = row.at("value");
            rows.push_back(flat);
        }
    } else if (sc.mode == ScenarioMode::Verify) {
        leading = {"case", "kind"};
        for (const auto& c : results.at("cases")) rows.push_back(flatten(c));
    } else {
        rows.push_back(flatten(results));
    }
    return csv_table(rows, leading);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

Json scenario_json(const Scenario& sc) {
    Json doc{{"name", sc.name}, {"mode", std::string(to_string(sc.mode))}, {"parameters", sc.parameters}};
    if (sc.sweep_axis) doc["sweep"] = Json{{"parameter", sc.sweep_axis->parameter}, {"grid", sc.sweep_axis->grid}};
    return doc;
}

int report_failure(const std::filesystem::path& out_dir, const std::string& name, int code, Json diag) {
    diag["exit_code"] = code;
    diag["name"] = name;
    std::cerr << "censor-lab: " << diag.dump() << '\n';
    try {
        std::filesystem::create_directories(out_dir);
        write_text(out_dir / (name + ".diagnostic.json"), diag.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "censor-lab: could not write diagnostic: " << e.what() << '\n';
    }
    return code;
}

}  // namespace

int run_scenario(const std::filesystem::path& config_path, const std::filesystem::path& out_dir) {
    std::string name = config_path.stem().string();
    Json doc;
    {
        std::ifstream is(config_path, std::ios::binary);
        if (!is) {
            return report_failure(out_dir, name, kExitValidation,
                                  Json{{"error", "validation"}, {"key", ""}, {"message", "cannot open " + config_path.string()}});
        }
        try {
            doc = Json::parse(is);
        } catch (const Json::parse_error& e) {
            return report_failure(out_dir, name, kExitValidation,
                                  Json{{"error", "validation"}, {"key", ""}, {"message", e.what()}});
        }
    }
    if (doc.is_object() && doc.contains("name") && doc["name"].is_string() && !doc["name"].get<std::string>().empty() &&
        doc["name"].get<std::string>().find_first_of("/\\") == std::string::npos) {
        name = doc["name"].get<std::string>();
    }

    try {
        const Scenario sc = parse_scenario(doc);
        const Json results = evaluate_scenario(sc);
        Json out = scenario_json(sc);
        out["results"] = results;
        std::filesystem::create_directories(out_dir);
        write_text(out_dir / (sc.name + ".results.json"), out.dump(2) + "\n");
        write_text(out_dir / (sc.name + ".results.csv"), results_csv(sc, results));
        if (sc.mode == ScenarioMode::Verify && !results.at("all_pass").get<bool>()) {
            Json failed = Json::array();
            for (const auto& c : results.at("cases")) {
                if (!c.at("pass").get<bool>()) failed.push_back(c);
            }
            return report_failure(out_dir, name, kExitNumeric,
                                  Json{{"error", "verification"}, {"message", "oracle comparison outside band"}, {"cases", failed}});
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        return report_failure(out_dir, name, kExitValidation, Json{{"error", "validation"}, {"key", e.key()}, {"message", e.what()}});
    } catch (const DomainError& e) {
        return report_failure(out_dir, name, kExitValidation, Json{{"error", "domain"}, {"message", e.what()}});
    } catch (const ExistenceError& e) {
        return report_failure(out_dir, name, kExitNumeric, Json{{"error", "existence"}, {"flag", e.flag()}, {"message", e.what()}});
    } catch (const NumericError& e) {
        return report_failure(out_dir, name, kExitNumeric, Json{{"error", "numeric"}, {"message", e.what()}});
    }
}

namespace {

struct Comparison {
    std::string id;
    std::string kind;
    double closed = 0.0;
    McEstimate mc;
    // SE not taken from the run's own draws: implied by the closed form for
    // Bernoulli cases, from a reference run for small skewed samples, else 0.
    double null_se = 0.0;
    bool extremum = false;
};

Json compare(const Comparison& c, const VerifyOptions& opts) {
    const double se = std::max(c.mc.std_error, c.null_se);
    const double band = opts.se_multiplier * se + (c.extremum ? opts.allowance : 0.0);
    const double diff = std::fabs(c.closed - c.mc.mean);
    return Json{{"case", c.id},     {"kind", c.kind},         {"closed_form", c.closed}, {"mc_mean", c.mc.mean},
                {"mc_std_error", c.mc.std_error}, {"null_std_error", c.null_se}, {"n", c.mc.n},
                {"abs_diff", diff}, {"band", band},           {"pass", diff <= band}};
}

double bernoulli_se(double p, std::size_t n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n)); }

// Below this many paths the sample SE of a skewed payoff is unreliable; the
// per-path spread is then taken from a reference run on its own seed.
constexpr std::size_t kReferencePaths = 20000;

McConfig reference_config(const McConfig& cfg) {
    McConfig ref = cfg;
    ref.n_paths = kReferencePaths;
    ref.batches = 16;
    ref.base_seed = cfg.base_seed ^ 0x9e3779b97f4a7c15ULL;
    return ref;
}

// SE at cfg.n_paths implied by the reference run's estimate.
double reference_se(const McEstimate& ref, std::size_t n) {
    return ref.std_error * std::sqrt(static_cast<double>(ref.n) / static_cast<double>(n));
}

SentimentInputs tracker_case(double mu, double sigma, double horizon, double s0, double threshold,
                             PerformanceIndex index) {
    SentimentInputs in;
    in.s_star_t = s0;
    in.vt = threshold;
    in.market_rule = DecisionRule::good(0.0);
    in.t = 0.0;
    in.t1 = horizon;
    in.market_params = GbmParams(mu, sigma);
    in.index = index;
    return in;
}

}  // namespace

Json verify_battery(const McConfig& cfg, const VerifyOptions& options) {
    cfg.validate();
    std::vector<Comparison> cases;

    // Running-maximum trigger probabilities.
    for (double mu : {-0.1, 0.0, 0.05}) {
        for (double sigma : {0.2, 0.4}) {
            for (double a_star : {-0.3, 0.2}) {
                const auto in = tracker_case(mu, sigma, 1.0, 1.0, std::exp(a_star), PerformanceIndex::RunningMax);
                const double p = prob_running_max_trigger(in);
                std::ostringstream id;
                id << "running_max mu=" << mu << " sigma=" << sigma << " A=" << a_star;
                cases.push_back({id.str(), "trigger_probability", p, mc_trigger_probability(in, cfg),
                                 bernoulli_se(p, cfg.n_paths), true});
            }
        }
    }

    // Running-minimum trigger probabilities.
    struct MinCase { double mu, sigma, horizon, s0, threshold; };
    for (const auto& m : {MinCase{-0.02, 0.25, 0.5, 1.4, 1.0}, MinCase{0.05, 0.3, 1.0, 1.2, 1.0}}) {
        const auto in = tracker_case(m.mu, m.sigma, m.horizon, m.s0, m.threshold, PerformanceIndex::RunningMin);
        const double p = prob_running_min_trigger(in);
        std::ostringstream id;
        id << "running_min mu=" << m.mu << " sigma=" << m.sigma << " horizon=" << m.horizon << " S=" << m.s0;
        cases.push_back({id.str(), "trigger_probability", p, mc_trigger_probability(in, cfg),
                         bernoulli_se(p, cfg.n_paths), true});
    }

    // Sentiment value, both signatures.
    for (Signature sig : {Signature::Good, Signature::Bad}) {
        SentimentInputs in = tracker_case(0.05, 0.3, 1.0, 1.0, 1.0, PerformanceIndex::RunningMax);
        in.market_rule = DecisionRule(sig, 0.1);
        in.r = 0.02;
        const SentimentValue v = sentiment_value(in);
        const double p = sig == Signature::Good ? v.prob_good : v.prob_bad;
        cases.push_back({std::string("sentiment ") + std::string(branch_name(sig)), "sentiment", v.v_star,
                         mc_sentiment(in, cfg), v.e_star * v.discount * bernoulli_se(p, cfg.n_paths), true});
    }

    // Lognormal expectations behind the censor functionals.
    {
        const GbmParams firm = GbmParams::from_arithmetic_drift(0.05, 0.3);
        const DecisionRule rule = DecisionRule::good(0.0);
        const auto e = gbm_expectations(firm, rule, 1.1, 0.5);
        const auto m = mc_gbm_expectations(firm, rule, 1.1, 0.5, cfg);
        const std::size_t n = cfg.n_paths;
        McExpectations ref;
        if (n < kReferencePaths) ref = mc_gbm_expectations(firm, rule, 1.1, 0.5, reference_config(cfg));
        cases.push_back({"gbm mean", "gbm_expectation", e.mean, m.mean, reference_se(ref.mean, n), false});
        cases.push_back({"gbm tail_prob_ge", "gbm_expectation", e.tail_prob_ge, m.tail_prob_ge, bernoulli_se(e.tail_prob_ge, n), false});
        cases.push_back({"gbm tail_prob_le", "gbm_expectation", e.tail_prob_le, m.tail_prob_le, bernoulli_se(e.tail_prob_le, n), false});
        cases.push_back({"gbm partial_mean_ge", "gbm_expectation", e.partial_mean_ge, m.partial_mean_ge, reference_se(ref.partial_mean_ge, n), false});
        cases.push_back({"gbm partial_mean_le", "gbm_expectation", e.partial_mean_le, m.partial_mean_le, reference_se(ref.partial_mean_le, n), false});
    }

    // Censor equation at the solved threshold.
    {
        const ObservationScheme scheme(0.0, 1.0, {{0.0, 0.3}}, {0.6, 0.9});
        const CensorProblem good{scheme, DecisionRule::good(0.0), GbmParams::from_arithmetic_drift(-0.5, 0.3), 1.0};
        const CensorProblem bad{scheme, DecisionRule::bad(0.1), GbmParams::from_arithmetic_drift(-0.3, 0.6), 1.0};
        for (const auto* p : {&good, &bad}) {
            const CensorSolution sol = solve_censor(*p);
            const McEstimate ref = cfg.n_paths < kReferencePaths ? mc_censor_rhs(*p, sol.l_vt, reference_config(cfg))
                                                                 : McEstimate{};
            cases.push_back({std::string("censor ") + std::string(branch_name(p->rule.signature())), "censor_rhs", 1.0,
                             mc_censor_rhs(*p, sol.l_vt, cfg), reference_se(ref, cfg.n_paths), false});
        }
    }

    Json rows = Json::array();
    std::size_t n_pass = 0;
    for (const auto& c : cases) {
        Json row = compare(c, options);
        if (row["pass"].get<bool>()) ++n_pass;
        rows.push_back(std::move(row));
    }
    return Json{{"config", mc_config_json(cfg)},
                {"options", Json{{"se_multiplier", options.se_multiplier}, {"allowance", options.allowance}}},
                {"cases", rows},
                {"n_pass", n_pass},
                {"n_fail", cases.size() - n_pass},
                {"all_pass", n_pass == cases.size()}};
}

int verify_all(const McConfig& cfg, const std::filesystem::path& out_dir, const VerifyOptions& options) {
    Scenario sc;
    sc.name = "verify";
    sc.mode = ScenarioMode::Verify;
    sc.parameters = Json{{"mc", mc_config_json(cfg)},
                         {"se_multiplier", options.se_multiplier},
                         {"allowance", options.allowance}};
    try {
        const Json results = verify_battery(cfg, options);
        Json out = scenario_json(sc);
        out["results"] = results;
        std::filesystem::create_directories(out_dir);
        write_text(out_dir / "verify.results.json", out.dump(2) + "\n");
        write_text(out_dir / "verify.results.csv", results_csv(sc, results));
        if (!results.at("all_pass").get<bool>()) {
            Json failed = Json::array();
            for (const auto& c : results.at("cases")) {
                if (!c.at("pass").get<bool>()) failed.push_back(c);
            }
            return report_failure(out_dir, sc.name, kExitNumeric,
                                  Json{{"error", "verification"}, {"message", "oracle comparison outside band"}, {"cases", failed}});
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        return report_failure(out_dir, sc.name, kExitValidation, Json{{"error", "validation"}, {"key", e.key()}, {"message", e.what()}});
    } catch (const DomainError& e) {
        return report_failure(out_dir, sc.name, kExitValidation, Json{{"error", "domain"}, {"message", e.what()}});
    } catch (const ExistenceError& e) {
        return report_failure(out_dir, sc.name, kExitNumeric, Json{{"error", "existence"}, {"flag", e.flag()}, {"message", e.what()}});
    } catch (const NumericError& e) {
        return report_failure(out_dir, sc.name, kExitNumeric, Json{{"error", "numeric"}, {"message", e.what()}});
    }
}

}  // namespace censorlab
