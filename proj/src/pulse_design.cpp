#include "blockade/pulse_design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blockade {

namespace {

PulseEnvelope with_parameter(const PulseEnvelope& shape, FreeParameter which,
                             double value) {
    PulseEnvelope env = shape;
    if (which == FreeParameter::amplitude) env.amplitude = value;
    else env.duration = value;
    return env;
}

// Fine fixed grid for area quadrature, independent of the propagation step.
SimulationGrid quadrature_grid(const PulseEnvelope& env) {
    SimulationGrid g;
    g.t_start = 0.0;
    g.t_end = std::max(env.duration, 1e-12);
    g.dt = g.t_end / 4096.0;
    g.record_stride = 4096;
    return g;
}

double area_of(const PulseEnvelope& shape, FreeParameter which, double value,
               const PhysicalParams& p) {
    const PulseEnvelope env = with_parameter(shape, which, value);
    return pulse_area(env, p, quadrature_grid(env));
}

double transfer_of(const PulseEnvelope& shape, FreeParameter which, double value,
                   const PhysicalParams& p, ModelTier tier, SimulationGrid* grid_out) {
    const PulseEnvelope env = with_parameter(shape, which, value);
    ModelFlags flags;
    flags.tier = tier;
    // The inversion target is the collective two-level pair; verify on
    // exactly that sector (|r> is eliminated, one signal quantum).
    flags.n_r_max = 0;
    flags.n_s_max = 1;
    flags.n_photon_max = 1;
    const SimulationGrid grid = make_grid(p, env, 0.0, env.duration);
    const HamiltonianModel model = build_model(p, flags, env, grid);
    const DenseVector psi0 =
        make_state(model.basis, {p.n_atoms, 0, 0, 0}).amps;
    const Trajectory traj = propagate(model, psi0, grid);
    if (grid_out) *grid_out = grid;
    return success_probability(traj);
}

}  // namespace

PiPulseResult solve_pi_pulse(const PulseEnvelope& shape, FreeParameter free_parameter,
                             const PhysicalParams& p, ModelTier tier,
                             std::optional<std::pair<double, double>> bracket) {
    if (tier != ModelTier::two_level && tier != ModelTier::raman)
        throw std::invalid_argument("pi-pulse solver runs in the two_level or raman tier");
    if (p.detuning == 0.0)
        throw std::invalid_argument("adiabatic elimination undefined: detuning is zero");
    if (shape.family == EnvelopeFamily::table)
        throw std::invalid_argument("table envelopes have no free parameter to solve");

    const double target = 0.5 * M_PI;
    auto area = [&](double x) { return area_of(shape, free_parameter, x, p); };

    double lo, hi;
    if (bracket) {
        lo = bracket->first;
        hi = bracket->second;
        if (!(hi > lo) || !(area(lo) <= target && area(hi) >= target)) {
            std::ostringstream os;
            os << "no root in the search bracket [" << lo << ", " << hi
               << "]: area(lo) = " << area(lo) << ", area(hi) = " << area(hi)
               << ", target = " << target;
            throw std::runtime_error(os.str());
        }
    } else {
        lo = 0.0;
        // Start from the square-pulse estimate and expand.
        const double rate = std::sqrt(static_cast<double>(p.n_atoms)) *
                            peak_amplitude(shape) * p.signal_coupling /
                            std::abs(p.detuning);
        hi = free_parameter == FreeParameter::duration
                 ? (rate > 0.0 ? target / rate : 1.0)
                 : std::max(shape.amplitude, 1.0);
        int expansions = 0;
        while (area(hi) < target && expansions++ < 80) hi *= 2.0;
        if (area(hi) < target) {
            std::ostringstream os;
            os << "no root in the search bracket [0, " << hi
               << "]: area(hi) = " << area(hi) << " never reaches " << target;
            throw std::runtime_error(os.str());
        }
    }

    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * std::max(std::abs(hi), 1.0); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (area(mid) < target) lo = mid;
        else hi = mid;
    }
    double solved = 0.5 * (lo + hi);

    PiPulseResult result;
    result.transfer = transfer_of(shape, free_parameter, solved, p, tier, &result.grid);

    if (!p.compensate_stark) {
        // The area theorem is no longer exact; maximize the transfer itself.
        double a = 0.5 * solved, b = 2.0 * solved;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = transfer_of(shape, free_parameter, x1, p, tier, nullptr);
        double f2 = transfer_of(shape, free_parameter, x2, p, tier, nullptr);
        for (int it = 0; it < 120 && (b - a) > 1e-5 * solved; ++it) {
            if (f1 > f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a);
                f1 = transfer_of(shape, free_parameter, x1, p, tier, nullptr);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a);
                f2 = transfer_of(shape, free_parameter, x2, p, tier, nullptr);
            }
        }
        solved = 0.5 * (a + b);
        result.transfer = transfer_of(shape, free_parameter, solved, p, tier, &result.grid);
    }

    result.envelope = with_parameter(shape, free_parameter, solved);
    result.area = area(solved);
    if (result.transfer < 0.5)
        result.warnings.push_back("regime not invertible: best transfer " +
                                  std::to_string(result.transfer));
    return result;
}

std::vector<BlockadeRow> blockade_sweep(const PhysicalParams& p,
                                        std::vector<double> b_values,
                                        const PulseEnvelope& drive,
                                        const ModelFlags& flags,
                                        const SimulationGrid& grid) {
    std::sort(b_values.begin(), b_values.end());
    std::vector<BlockadeRow> rows;
    rows.reserve(b_values.size());
    for (double b : b_values) {
        BlockadeRow row;
        row.blockade_shift = b;
        try {
            PhysicalParams pb = p;
            pb.blockade_shift = b;
            ModelFlags f = flags;
            f.tier = ModelTier::full;
            SimulationGrid g = grid;
            if (b > 0.0) {
                // keep the stiff blockade diagonal inside the stability region
                g.dt = std::min(grid.dt, 0.01 / b);
                g.record_stride = std::max(
                    1, static_cast<int>(std::lround(grid.record_stride * grid.dt / g.dt)));
            }
            const HamiltonianModel model = build_model(pb, f, drive, g);
            const DenseVector psi0 = make_state(model.basis, {pb.n_atoms, 0, 0, 0}).amps;
            const Trajectory traj = propagate(model, psi0, g);
            row.p_d = double_excitation_prob(traj).rydberg_max;
            row.success = success_probability(traj);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace blockade
