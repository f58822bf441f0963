#ifndef BLOCKADE_DYNAMICS_HPP
#define BLOCKADE_DYNAMICS_HPP

#include <functional>
#include <vector>

#include "blockade/hamiltonian.hpp"

namespace blockade {

struct Trajectory {
    std::vector<double> times;
    std::vector<DenseVector> states;
    std::vector<double> norms;
    BasisPtr basis;
    ModelTier tier = ModelTier::full;
    double dt = 0.0;
    long n_steps = 0;

    const DenseVector& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

// Fixed-step classic RK4 on dpsi/dt = -i H(t) psi. dt may be negative
// (backward integration). on_step fires after every accepted step.
void rk4_evolve(const PartedHamiltonian& h, DenseVector& psi, double t0, double dt,
                long n_steps,
                const std::function<void(long, double, const DenseVector&)>& on_step = {});

// Propagates psi0 over the grid and records every record_stride steps
// plus the final time. Without decay a norm above 1 + 1e-6 aborts with
// a step-size diagnostic.
Trajectory propagate(const HamiltonianModel& model, const DenseVector& psi0,
                     const SimulationGrid& grid);

struct ConvergenceReport {
    double estimate = 0.0;           // max-norm final-state difference, dt vs dt/2
    bool non_smooth_envelope = false;  // envelope kink off the grid nodes
};

// Richardson-style step-size probe: the same run at dt and dt/2.
ConvergenceReport convergence_check(const PhysicalParams& p, const ModelFlags& flags,
                                    const PulseEnvelope& env, const DenseVector& psi0,
                                    const SimulationGrid& grid);

}  // namespace blockade

#endif
