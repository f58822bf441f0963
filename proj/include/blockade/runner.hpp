#ifndef BLOCKADE_RUNNER_HPP
#define BLOCKADE_RUNNER_HPP

#include <iosfwd>
#include <string>

#include "blockade/config.hpp"
#include "blockade/observables.hpp"

namespace blockade {

struct RunOptions {
    std::string out_dir;       // empty: use the config's output directory
    int jobs = 0;              // 0: hardware concurrency
    bool no_timestamp = false; // suppress the '#' header line in CSV files
};

// Exit codes: 0 success, 1 hard error, 2 validation threshold exceeded.
// Hard errors are written to `err` with an "ERROR:" prefix.
int run_simulate(const RunConfig& config, const RunOptions& options,
                 std::ostream& log, std::ostream& err);
int run_sweep(const RunConfig& config, const RunOptions& options,
              std::ostream& log, std::ostream& err);
int run_design_pulse(const RunConfig& config, const RunOptions& options,
                     std::ostream& log, std::ostream& err);
int run_validate(const RunConfig& config, const RunOptions& options,
                 std::ostream& log, std::ostream& err);
int run_rsn(const RunConfig& config, const RunOptions& options,
            std::ostream& log, std::ostream& err);

// Single source of truth for the report CSV column order.
std::string report_csv_header();
std::string report_csv_row(const RunReport& report);

// One simulate run: build, propagate, report. Shared by simulate and the
// sweep workers. Reads BLOCKADE_SIM_MAX_BASIS for the basis-size guard.
struct SimulateResult {
    RunReport report;
    Trajectory trajectory;
    std::vector<std::string> warnings;
};
SimulateResult simulate_once(const RunConfig& config);

}  // namespace blockade

#endif
