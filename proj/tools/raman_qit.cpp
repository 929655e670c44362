// raman_qit — batch front end: single runs, parameter sweeps and
// effective-vs-full model validation, all emitting CSV.
#include "raman_qit/cli/commands.hpp"
#include "raman_qit/cli/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

using namespace raman_qit::cli;

int main(int argc, char** argv) {
    CLI::App app{"Degenerate-Raman atom-to-field qubit transfer simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;

    auto* run = app.add_subcommand("run", "Run the transfer protocol once; CSV row on stdout");
    run->add_option("--config", config_path, "Config file")->required();

    std::string param;
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter; CSV file");
    sweep->add_option("--config", config_path, "Base config file")->required();
    sweep->add_option("--param", param, "alpha_abs | delta | time")->required();
    sweep->add_option("--start", start, "First value")->required();
    sweep->add_option("--stop", stop, "Last value")->required();
    sweep->add_option("--steps", steps, "Number of points (>= 2)")->required();
    sweep->add_option("--out", out_path, "Output CSV path");

    double t_max = 0.0;
    int samples = 0;
    auto* validate = app.add_subcommand("validate", "Compare effective and full models; CSV file");
    validate->add_option("--config", config_path, "Config file")->required();
    validate->add_option("--tmax", t_max, "End of the time grid")->required();
    validate->add_option("--samples", samples, "Grid points (>= 2)")->required();
    validate->add_option("--out", out_path, "Output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const raman_qit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    if (out_path.empty()) out_path = cfg.output;

    if (run->parsed()) {
        return cmd_run(cfg, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
        try {
            const SweepSpec spec{parse_sweep_param(param), start, stop, steps, cfg};
            return cmd_sweep(spec, out_path, threads_from_env(), std::cerr);
        } catch (const raman_qit::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitInputError;
        }
    }
    return cmd_validate(cfg, t_max, samples, out_path, std::cerr);
}
