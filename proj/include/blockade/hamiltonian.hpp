#ifndef BLOCKADE_HAMILTONIAN_HPP
#define BLOCKADE_HAMILTONIAN_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "blockade/basis.hpp"
#include "blockade/params.hpp"

namespace blockade {

// Cumulative integral of |Omega(tau)|^2 from the grid start, tabulated
// at grid nodes with a Simpson rule per step and evaluated anywhere in
// the window by a local Simpson segment. Pure after construction.
class StarkPhase {
  public:
    StarkPhase() = default;
    StarkPhase(const PulseEnvelope& env, const SimulationGrid& grid);

    double integral(double t) const;

  private:
    PulseEnvelope env_;
    double t_start_ = 0.0;
    double dt_ = 0.0;
    std::vector<double> node_values_;  // cumulative integral at each node
};

// Omega'(t) = Omega(t) g_s / Delta * exp(i phi(t)) with the Stark phase
// phi(t) = (1/Delta) int |Omega|^2. With compensate_stark the phase
// factor is identically 1 (pump and signal frequencies tracking the
// shifted two-photon resonance).
class EffectiveRabi {
  public:
    EffectiveRabi(const PulseEnvelope& env, const PhysicalParams& p,
                  const SimulationGrid& grid);

    cplx operator()(double t) const;
    double stark_phase(double t) const;

  private:
    PulseEnvelope env_;
    double detuning_ = 0.0;
    double signal_coupling_ = 0.0;
    bool compensate_ = true;
    StarkPhase phase_;
};

// H(t) = constant + c(t) * raising + conj(c(t)) * lowering [+ decay],
// with `lowering` the exact elementwise adjoint of `raising`, so the
// Hermitian part is paired by construction.
struct PartedHamiltonian {
    SparseMatrix constant_part;
    SparseMatrix drive_raising;
    SparseMatrix drive_lowering;
    SparseMatrix decay_part;
    bool has_decay = false;
    std::function<cplx(double)> drive_coeff;

    Eigen::Index dim() const { return constant_part.rows(); }
    // out = H(t) psi; scratch must be a distinct vector of the same size.
    void apply(double t, const DenseVector& psi, DenseVector& out,
               DenseVector& scratch) const;
    SparseMatrix assemble(double t, bool with_decay) const;
};

struct HamiltonianModel {
    ModelTier tier = ModelTier::full;
    PhysicalParams params;
    ModelFlags flags;
    PulseEnvelope envelope;
    SimulationGrid grid;
    BasisPtr basis;
    PartedHamiltonian parts;
    std::optional<EffectiveRabi> effective;  // raman / two_level tiers

    cplx effective_rabi(double t) const;
};

// Assembles the constant sparse parts once; per-time evaluation only
// scales the drive part. `basis` defaults to the tier's natural basis
// (capped symmetric enumeration, or the two-label collective pair).
HamiltonianModel build_model(const PhysicalParams& p, const ModelFlags& flags,
                             const PulseEnvelope& env, const SimulationGrid& grid,
                             BasisPtr basis = nullptr,
                             std::size_t max_basis = kDefaultMaxBasisSize);

// Contract views of H(t). Decay is never included here; it is a separate
// generator added during propagation when include_decay is set.
SparseOperator build_full_h(const HamiltonianModel& model, double t);
SparseOperator build_raman_h(const HamiltonianModel& model, double t);
Eigen::Matrix2cd build_two_level_h(const HamiltonianModel& model, double t);

// -i Gamma/2 * n_r on the diagonal; non-Hermitian loss on |r>.
SparseOperator decay_generator(const BasisPtr& basis, double gamma);

}  // namespace blockade

#endif
