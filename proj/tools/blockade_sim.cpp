#include <CLI11.hpp>
#include <iostream>

#include "blockade/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"blockade-sim: collective single-photon excitation under Rydberg "
                 "dipole blockade"};
    app.require_subcommand(1);

    std::string config_path;
    blockade::RunOptions options;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration file")
            ->required();
        cmd->add_option("--out", options.out_dir,
                        "output directory (overrides [output] directory)");
        cmd->add_option("--jobs", options.jobs,
                        "worker threads for sweeps (default: processors)");
        cmd->add_flag("--no-timestamp", options.no_timestamp,
                      "omit the timestamp header line from CSV files");
        return cmd;
    };

    auto* simulate = add_common(app.add_subcommand(
        "simulate", "one propagation, report.csv plus optional trajectory.csv"));
    auto* sweep = add_common(app.add_subcommand(
        "sweep", "one run per [sweep] value, one CSV row each"));
    auto* design = add_common(app.add_subcommand(
        "design-pulse", "solve the pulse parameter for full population transfer"));
    auto* validate = add_common(app.add_subcommand(
        "validate", "compare the symmetric engine against the exact oracle"));
    auto* rsn = add_common(app.add_subcommand(
        "rsn", "print the coherent/incoherent signal-to-noise estimate"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "ERROR: " << e.what() << "\n";
        return 1;
    }

    try {
        const blockade::RunConfig config = blockade::load_config(config_path);
        if (simulate->parsed())
            return blockade::run_simulate(config, options, std::cout, std::cerr);
        if (sweep->parsed())
            return blockade::run_sweep(config, options, std::cout, std::cerr);
        if (design->parsed())
            return blockade::run_design_pulse(config, options, std::cout, std::cerr);
        if (validate->parsed())
            return blockade::run_validate(config, options, std::cout, std::cerr);
        if (rsn->parsed())
            return blockade::run_rsn(config, options, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
