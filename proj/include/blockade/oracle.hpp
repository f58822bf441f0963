#ifndef BLOCKADE_ORACLE_HPP
#define BLOCKADE_ORACLE_HPP

#include <vector>

#include "blockade/dynamics.hpp"

namespace blockade {

// Exact reference space: every per-atom configuration in {g,s,r}^N
// tensored with a photon number, base-3 encoded with the photon index
// minor. Deliberately capped small; this exists to validate the
// symmetric reduction, not to scale.
class FullBasis {
  public:
    static constexpr int kMaxAtoms = 6;
    static constexpr int kMaxPhotons = 2;

    FullBasis(int n_atoms, int n_photon_max);

    int n_atoms() const { return n_atoms_; }
    int n_photon_max() const { return n_photon_max_; }
    std::size_t size() const;
    long n_configs() const { return n_configs_; }

    std::size_t index(long config, int photon) const;
    long config_of(std::size_t index) const;
    int photon_of(std::size_t index) const;
    Level level_of(long config, int atom) const;
    long with_level(long config, int atom, Level lv) const;
    int count_level(long config, Level lv) const;

  private:
    int n_atoms_ = 1;
    int n_photon_max_ = 1;
    long n_configs_ = 3;
};

struct OracleModel {
    FullBasis basis;
    PhysicalParams params;
    PulseEnvelope envelope;
    PartedHamiltonian parts;
};

// Same physics as the full symmetric tier written atom by atom, with no
// symmetry assumption. pair_shifts optionally overrides the uniform B
// with per-pair values B_ij (row-major over i < j).
OracleModel oracle_build_model(const PhysicalParams& p, const PulseEnvelope& env,
                               int n_photon_max,
                               const std::vector<double>& pair_shifts = {});

SparseMatrix oracle_build_h(const OracleModel& model, double t);

struct FullTrajectory {
    std::vector<double> times;
    std::vector<DenseVector> states;
    std::vector<double> norms;
};

FullTrajectory oracle_propagate(const OracleModel& model, const DenseVector& psi0,
                                const SimulationGrid& grid);

DenseVector oracle_ground_state(const FullBasis& basis);

struct SymmetrizedState {
    StateVector state;      // projection onto the target symmetric basis
    double residual = 0.0;  // squared norm outside the Dicke sector
    double out_of_cap = 0.0;  // Dicke weight on labels the caps exclude
};

SymmetrizedState symmetrize(const DenseVector& full_state, const FullBasis& basis,
                            const BasisPtr& target);

struct CompareReport {
    double max_deviation = 0.0;  // elementwise amplitude difference
    double max_residual = 0.0;
    double max_out_of_cap = 0.0;
};

// Symmetrizes every recorded oracle state and compares amplitudes
// against the symmetric-engine trajectory on the shared record times.
CompareReport compare(const Trajectory& symmetric, const FullTrajectory& oracle,
                      const FullBasis& basis);

}  // namespace blockade

#endif
