#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "censorlab/censor.hpp"
#include "censorlab/oracle.hpp"
#include "censorlab/sentiment.hpp"
#include "censorlab/statics.hpp"

namespace censorlab {

using Json = nlohmann::json;

enum class ScenarioMode { Sentiment, Censor, Statics, Verify, Sweep };

struct SweepAxis {
    std::string parameter;  // dotted path into `parameters`
    std::vector<double> grid;
};

struct Scenario {
    std::string name;
    ScenarioMode mode = ScenarioMode::Sentiment;
    Json parameters = Json::object();
    std::optional<SweepAxis> sweep_axis;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

/// Parses and validates a scenario document. Throws ValidationError naming
/// the offending key.
Scenario parse_scenario(const Json& doc);

// Parameter decoding shared by the CLI and tests.
SentimentInputs parse_sentiment_inputs(const Json& params);
CensorProblem parse_censor_problem(const Json& params);
TriggerState parse_trigger_state(const Json& params);
McConfig parse_mc_config(const Json& params, const McConfig& defaults = {});

/// Evaluates a scenario to its structured result (no files written).
Json evaluate_scenario(const Scenario& scenario);

/// Flattens nested objects to dotted keys; arrays are indexed.
Json flatten(const Json& value);

/// run: writes <name>.results.json and <name>.results.csv to out_dir.
/// Returns 0, 2 (validation) or 3 (numeric / existence failure); errors are
/// also written as <name>.diagnostic.json and echoed to stderr.
int run_scenario(const std::filesystem::path& config_path, const std::filesystem::path& out_dir);

struct VerifyOptions {
    double se_multiplier = 3.0;
    double allowance = 5e-3;  // discretisation allowance for extremum indices
};

/// Runs the pinned closed-form-vs-oracle battery; writes verify.results.json
/// and verify.results.csv. Returns 0 iff every comparison passes, else 3.
int verify_all(const McConfig& cfg, const std::filesystem::path& out_dir,
               const VerifyOptions& options = {});

/// The battery itself, for callers that want the matrix without files.
Json verify_battery(const McConfig& cfg, const VerifyOptions& options);

}  // namespace censorlab
