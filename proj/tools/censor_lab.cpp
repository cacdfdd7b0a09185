#include <exception>
#include <iostream>
#include <numeric>
#include <string>

#include <CLI11.hpp>

#include "censorlab/errors.hpp"
#include "censorlab/scenario.hpp"

int main(int argc, char** argv) {
    using namespace censorlab;

    CLI::App app{"censor-lab: disclosure-threshold numerics with Monte Carlo cross-checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Evaluate one scenario config");
    run->add_option("config", config_path, "Scenario JSON file")->required();
    run->add_option("--out", run_out, "Output directory")->required();

    McConfig cfg;
    std::string verify_out;
    VerifyOptions opts;
    bool discrete = false;
    auto* verify = app.add_subcommand("verify", "Run the closed-form vs Monte Carlo battery");
    verify->add_option("--paths", cfg.n_paths, "Paths per comparison")->required()->check(CLI::PositiveNumber);
    verify->add_option("--steps", cfg.steps_per_unit, "Time steps per unit time")->required()->check(CLI::PositiveNumber);
    verify->add_option("--seed", cfg.base_seed, "Base seed")->required();
    verify->add_option("--out", verify_out, "Output directory")->required();
    verify->add_option("--batches", cfg.batches, "Batches (must divide --paths; default gcd(paths, 16))");
    verify->add_option("--se-mult", opts.se_multiplier, "Band width in standard errors")->check(CLI::NonNegativeNumber);
    verify->add_option("--allowance", opts.allowance, "Discretisation allowance for extremum indices")
        ->check(CLI::NonNegativeNumber);
    verify->add_flag("--discrete", discrete, "Monitor extrema on the grid only (no bridge correction)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*run) return run_scenario(config_path, run_out);
        if (verify->count("--batches") == 0) cfg.batches = std::gcd(cfg.n_paths, std::size_t{16});
        if (cfg.n_paths % cfg.batches != 0) {
            std::cerr << "censor-lab: --batches must divide --paths\n";
            return kExitValidation;
        }
        cfg.bridge_correction = !discrete;
        return verify_all(cfg, verify_out, opts);
    } catch (const std::exception& e) {
        std::cerr << "censor-lab: " << e.what() << '\n';
        return kExitNumeric;
    }
}
