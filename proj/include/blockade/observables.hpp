#ifndef BLOCKADE_OBSERVABLES_HPP
#define BLOCKADE_OBSERVABLES_HPP

#include <functional>
#include <limits>

#include "blockade/dynamics.hpp"

namespace blockade {

using LabelPredicate = std::function<bool(const BasisLabel&)>;

// Sum of |amplitude|^2 over labels satisfying the predicate.
double population(const DenseVector& amps, const SymmetricBasis& basis,
                  const LabelPredicate& predicate);
double population(const StateVector& state, const LabelPredicate& predicate);

// P(n_s = 1, n_ph = 1, n_r = 0) at the final recorded time: the target
// single collective excitation plus its signal photon.
double success_probability(const Trajectory& traj);

struct DoubleExcitation {
    double rydberg_max = 0.0;   // max over time of P(n_r >= 2)
    double signal_final = 0.0;  // P(n_s >= 2 or n_ph >= 2) at the final time
};
DoubleExcitation double_excitation_prob(const Trajectory& traj);

// |<target|state>|^2 normalized on both sides.
double fidelity(const StateVector& state, const StateVector& target);

// R_sn = 3 rho L / k^2 with k = 2 pi / lambda: coherent collective rate
// over the incoherent single-atom rate.
double signal_to_noise(double density, double length, double wavelength);

// A = int sqrt(N_a) |Omega'(tau)| dtau over the grid window (Simpson).
// Full inversion of the collective two-level pair occurs at A = pi/2.
double pulse_area(const PulseEnvelope& env, const PhysicalParams& p,
                  const SimulationGrid& grid);

// Frequency of the sin^2(w t) oscillation of the upper-state population
// under a constant drive, from interpolated half-crossings refined by a
// least-squares scan. Throws if fewer than two periods were recorded.
double fitted_collective_rabi(const Trajectory& traj);

struct RunReport {
    double success_probability = 0.0;
    double fidelity = 0.0;
    double double_excitation_max = 0.0;
    double double_signal_final = 0.0;
    double single_rydberg_max = 0.0;
    double loss_probability = 0.0;
    double pulse_area = std::numeric_limits<double>::quiet_NaN();
    double rsn = 0.0;
    double fitted_collective_rabi = std::numeric_limits<double>::quiet_NaN();
};

RunReport make_run_report(const Trajectory& traj, const PhysicalParams& p,
                          const PulseEnvelope& env, const SimulationGrid& grid);

}  // namespace blockade

#endif
