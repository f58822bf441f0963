#ifndef BLOCKADE_CONFIG_HPP
#define BLOCKADE_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "blockade/params.hpp"

namespace blockade {

struct SweepSpec {
    std::string parameter;        // numeric field name in [physical]/[envelope]/[grid]
    std::vector<double> values;
};

struct OutputSpec {
    std::string directory = ".";
    bool trajectory = false;
};

struct DesignSpec {
    std::string free_parameter = "duration";  // or "amplitude"
    std::optional<double> bracket_lo;
    std::optional<double> bracket_hi;
};

struct GridSpec {
    std::optional<double> t_start;
    std::optional<double> t_end;
    std::optional<double> dt;
    std::optional<int> record_stride;
};

struct RunConfig {
    PhysicalParams physical;
    PulseEnvelope envelope;
    GridSpec grid;
    ModelFlags flags;
    SweepSpec sweep;
    OutputSpec output;
    DesignSpec design;

    // Fills the unset grid fields from the envelope and parameters.
    SimulationGrid resolve_grid() const;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Strict key = value format with [section] headers, '#' comments,
// numbers, booleans, quoted strings and single-line numeric arrays
// (a TOML-compatible dialect). Unknown sections or keys are hard
// errors; physical-parameter validation errors are aggregated.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// Names accepted by [sweep] parameter, with their setters.
bool apply_sweep_value(RunConfig& config, const std::string& parameter, double value,
                       std::string* error);
bool is_sweep_parameter(const std::string& parameter);

// The solved envelope rendered as a config fragment.
std::string envelope_fragment(const PulseEnvelope& env);

}  // namespace blockade

#endif
