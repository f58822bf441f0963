#ifndef BLOCKADE_PULSE_DESIGN_HPP
#define BLOCKADE_PULSE_DESIGN_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blockade/observables.hpp"

namespace blockade {

enum class FreeParameter { amplitude, duration };

struct PiPulseResult {
    PulseEnvelope envelope;   // solved pulse
    double area = 0.0;        // achieved area, target pi/2
    double transfer = 0.0;    // achieved upper-state population
    SimulationGrid grid;      // verification grid
    std::vector<std::string> warnings;
};

// Two stages: bisection on the pulse area to hit pi/2 (the area theorem
// is exact for resonant real envelopes), then a propagation check. With
// compensate_stark off the residual Stark phase detunes the transfer, so
// the free parameter is re-optimized by golden-section maximization.
PiPulseResult solve_pi_pulse(
    const PulseEnvelope& shape, FreeParameter free_parameter,
    const PhysicalParams& p, ModelTier tier,
    std::optional<std::pair<double, double>> bracket = std::nullopt);

struct BlockadeRow {
    double blockade_shift = 0.0;
    double p_d = 0.0;      // max over time of P(n_r >= 2)
    double success = 0.0;  // final P(n_s = 1, n_ph = 1, n_r = 0)
    bool ok = true;
    std::string error;
};

// One full-tier propagation per blockade value; rows sorted by B.
std::vector<BlockadeRow> blockade_sweep(const PhysicalParams& p,
                                        std::vector<double> b_values,
                                        const PulseEnvelope& drive,
                                        const ModelFlags& flags,
                                        const SimulationGrid& grid);

}  // namespace blockade

#endif
