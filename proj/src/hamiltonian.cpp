#include "blockade/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace blockade {

namespace {

double abs2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

// Segment integral of |Omega|^2 over [a, b]. Square pulses integrate in
// closed form; Simpson at the closed support edge would leak one node's
// weight past the discontinuity.
double simpson_abs2(const PulseEnvelope& env, double a, double b) {
    if (env.family == EnvelopeFamily::square) {
        const double lo = std::max(a, 0.0);
        const double hi = std::min(b, env.duration);
        return hi > lo ? env.amplitude * env.amplitude * (hi - lo) : 0.0;
    }
    const double mid = 0.5 * (a + b);
    return (b - a) / 6.0 *
           (abs2(sample_envelope(env, a)) + 4.0 * abs2(sample_envelope(env, mid)) +
            abs2(sample_envelope(env, b)));
}

}  // namespace

StarkPhase::StarkPhase(const PulseEnvelope& env, const SimulationGrid& grid)
    : env_(env), t_start_(grid.t_start), dt_(grid.dt) {
    const long n = grid.n_steps();
    node_values_.resize(static_cast<std::size_t>(n) + 1);
    node_values_[0] = 0.0;
    for (long k = 0; k < n; ++k) {
        const double a = grid.time_at(k);
        node_values_[static_cast<std::size_t>(k) + 1] =
            node_values_[static_cast<std::size_t>(k)] + simpson_abs2(env_, a, a + dt_);
    }
}

double StarkPhase::integral(double t) const {
    if (node_values_.empty() || dt_ <= 0.0) return 0.0;
    long k = static_cast<long>(std::floor((t - t_start_) / dt_));
    if (k < 0) k = 0;
    const long last = static_cast<long>(node_values_.size()) - 2;
    if (k > last) k = last;
    const double a = t_start_ + static_cast<double>(k) * dt_;
    if (t == a) return node_values_[static_cast<std::size_t>(k)];
    return node_values_[static_cast<std::size_t>(k)] + simpson_abs2(env_, a, t);
}

EffectiveRabi::EffectiveRabi(const PulseEnvelope& env, const PhysicalParams& p,
                             const SimulationGrid& grid)
    : env_(env),
      detuning_(p.detuning),
      signal_coupling_(p.signal_coupling),
      compensate_(p.compensate_stark) {
    if (detuning_ == 0.0)
        throw std::invalid_argument("adiabatic elimination undefined: detuning is zero");
    if (!compensate_) phase_ = StarkPhase(env, grid);
}

double EffectiveRabi::stark_phase(double t) const {
    if (compensate_) return 0.0;
    return phase_.integral(t) / detuning_;
}

cplx EffectiveRabi::operator()(double t) const {
    const cplx base = sample_envelope(env_, t) * (signal_coupling_ / detuning_);
    if (compensate_) return base;
    const double phi = stark_phase(t);
    return base * cplx(std::cos(phi), std::sin(phi));
}

void PartedHamiltonian::apply(double t, const DenseVector& psi, DenseVector& out,
                              DenseVector& scratch) const {
    out.noalias() = constant_part * psi;
    const cplx c = drive_coeff(t);
    if (c != cplx(0.0, 0.0)) {
        scratch.noalias() = drive_raising * psi;
        out += c * scratch;
        scratch.noalias() = drive_lowering * psi;
        out += std::conj(c) * scratch;
    }
    if (has_decay) {
        scratch.noalias() = decay_part * psi;
        out += scratch;
    }
}

SparseMatrix PartedHamiltonian::assemble(double t, bool with_decay) const {
    const cplx c = drive_coeff(t);
    SparseMatrix h = constant_part;
    h += (drive_raising * c).eval();
    h += (drive_lowering * std::conj(c)).eval();
    if (with_decay && has_decay) h += decay_part;
    h.prune(0.0, 0.0);
    return h;
}

cplx HamiltonianModel::effective_rabi(double t) const {
    if (!effective)
        throw std::logic_error("effective Rabi frequency only exists in reduced tiers");
    return (*effective)(t);
}

SparseOperator decay_generator(const BasisPtr& basis, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("decay rate must be >= 0");
    SparseOperator n_r = rydberg_number_diagonal(basis);
    n_r.mat *= cplx(0.0, -0.5 * gamma);
    n_r.mat.prune(0.0, 0.0);
    return n_r;
}

HamiltonianModel build_model(const PhysicalParams& p, const ModelFlags& flags,
                             const PulseEnvelope& env, const SimulationGrid& grid,
                             BasisPtr basis, std::size_t max_basis) {
    HamiltonianModel model;
    model.tier = flags.tier;
    model.params = p;
    model.flags = flags;
    model.envelope = env;
    model.grid = grid;

    if (basis) {
        model.basis = std::move(basis);
    } else if (flags.tier == ModelTier::two_level) {
        model.basis = SymmetricBasis::two_level(p.n_atoms);
    } else {
        model.basis = enumerate_basis(p.n_atoms, BasisCaps::from_flags(flags), max_basis);
    }
    const auto dim = static_cast<Eigen::Index>(model.basis->size());

    if (flags.tier != ModelTier::full)
        model.effective.emplace(env, p, grid);

    PartedHamiltonian& parts = model.parts;
    switch (flags.tier) {
        case ModelTier::full: {
            // H(t) = Delta N_r + B D_block + [Omega(t) T_rg + g_s a^dag T_sr + h.c.]
            SparseMatrix constant =
                (rydberg_number_diagonal(model.basis).mat * cplx(p.detuning, 0.0)).eval();
            constant += (blockade_diagonal(model.basis).mat * cplx(p.blockade_shift, 0.0)).eval();
            SparseMatrix emission =
                (photon_ladder(model.basis, PhotonDirection::create).mat *
                 collective_transition(model.basis, Level::r, Level::s).mat)
                    .eval();
            constant += (emission * cplx(p.signal_coupling, 0.0)).eval();
            constant += (SparseMatrix(emission.adjoint()) * cplx(p.signal_coupling, 0.0)).eval();
            parts.constant_part = constant;
            parts.drive_raising = collective_transition(model.basis, Level::g, Level::r).mat;
            parts.drive_lowering = parts.drive_raising.adjoint();
            const PulseEnvelope drive = env;
            parts.drive_coeff = [drive](double t) { return sample_envelope(drive, t); };
            break;
        }
        case ModelTier::raman: {
            // H(t) = -[Omega'(t) a^dag T_sg + h.c.]; the |g> Stark term is
            // already absorbed into the rotating frame of Omega'.
            parts.constant_part = SparseMatrix(dim, dim);
            parts.drive_raising =
                (photon_ladder(model.basis, PhotonDirection::create).mat *
                 collective_transition(model.basis, Level::g, Level::s).mat)
                    .eval();
            parts.drive_lowering = parts.drive_raising.adjoint();
            const EffectiveRabi eff = *model.effective;
            parts.drive_coeff = [eff](double t) { return -eff(t); };
            break;
        }
        case ModelTier::two_level: {
            // Coupling -sqrt(N) Omega'(t) between |0_a,0_p> and S_s^dag a_s^dag |0_a,0_p>.
            parts.constant_part = SparseMatrix(dim, dim);
            std::vector<Eigen::Triplet<cplx>> up{{1, 0, cplx(1.0, 0.0)}};
            SparseMatrix raising(dim, dim);
            raising.setFromTriplets(up.begin(), up.end());
            parts.drive_raising = raising;
            parts.drive_lowering = raising.adjoint();
            const EffectiveRabi eff = *model.effective;
            const double root_n = std::sqrt(static_cast<double>(p.n_atoms));
            parts.drive_coeff = [eff, root_n](double t) { return -root_n * eff(t); };
            break;
        }
    }

    if (flags.include_decay && p.rydberg_linewidth > 0.0) {
        parts.decay_part = decay_generator(model.basis, p.rydberg_linewidth).mat;
        parts.has_decay = parts.decay_part.nonZeros() > 0;
    }
    return model;
}

SparseOperator build_full_h(const HamiltonianModel& model, double t) {
    if (model.tier != ModelTier::full)
        throw std::logic_error("build_full_h requires the full tier");
    return {model.basis, model.parts.assemble(t, false)};
}

SparseOperator build_raman_h(const HamiltonianModel& model, double t) {
    if (model.tier != ModelTier::raman)
        throw std::logic_error("build_raman_h requires the raman tier");
    return {model.basis, model.parts.assemble(t, false)};
}

Eigen::Matrix2cd build_two_level_h(const HamiltonianModel& model, double t) {
    if (model.tier != ModelTier::two_level)
        throw std::logic_error("build_two_level_h requires the two_level tier");
    const cplx c = model.parts.drive_coeff(t);
    Eigen::Matrix2cd h;
    h << cplx(0.0, 0.0), std::conj(c), c, cplx(0.0, 0.0);
    return h;
}

}  // namespace blockade
