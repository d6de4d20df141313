// nmdyn.cpp — command-line front end.
//
//   nmdyn simulate|check|compare|cutoff-study|sweep --config <path> [--out <dir>]
//         [--rtol <f>] [--atol <f>] [--oracle-steps <n>] [--threshold <f>]
//         [--jobs <n>] [--unrenormalized-init]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nmdyn/runner.hpp"

int main(int argc, char** argv) {
    using namespace nmdyn::cli;

    CLI::App app{"Non-Markovian pseudomode dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<double> rtol, atol;
    std::optional<std::size_t> oracle_steps;
    RunOptions options;
    bool unrenormalized = false;

    for (const char* name : {"simulate", "check", "compare", "cutoff-study", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--rtol", rtol, "integrator relative tolerance");
        sub->add_option("--atol", atol, "integrator absolute tolerance");
        sub->add_option("--oracle-steps", oracle_steps, "oracle step count");
        sub->add_option("--threshold", options.threshold, "compare: maximum sup deviation");
        sub->add_option("--jobs", options.jobs, "sweep: parallel points")->check(CLI::PositiveNumber);
        sub->add_flag("--unrenormalized-init", unrenormalized, "start the system part at psi(0) instead of c psi(0)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    const auto command = parse_command(app.get_subcommands().front()->get_name());
    if (!command) return kExitUsage;

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot read config " << config_path << "\n";
        return kExitConfig;
    }
    std::ostringstream text;
    text << in.rdbuf();

    try {
        RunConfig cfg = parse_config(text.str());
        if (rtol) cfg.solver.rtol = *rtol;
        if (atol) cfg.solver.atol = *atol;
        if (oracle_steps) cfg.solver.oracle_steps = *oracle_steps;
        if (unrenormalized) cfg.unrenormalized_init = true;
        if (!(cfg.solver.rtol > 0.0) || !(cfg.solver.atol > 0.0) || cfg.solver.oracle_steps < 10) {
            std::cerr << "solver overrides out of range\n";
            return kExitConfig;
        }
        options.out_dir = out_dir;
        return run(*command, cfg, options, std::cout, std::cerr);
    } catch (const nmdyn::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const nmdyn::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitNumerical;
    }
}
