#include "blockade/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace blockade {

FullBasis::FullBasis(int n_atoms, int n_photon_max)
    : n_atoms_(n_atoms), n_photon_max_(n_photon_max) {
    if (n_atoms < 1 || n_atoms > kMaxAtoms)
        throw std::invalid_argument("oracle supports 1..6 atoms");
    if (n_photon_max < 0 || n_photon_max > kMaxPhotons)
        throw std::invalid_argument("oracle supports at most 2 photons");
    n_configs_ = 1;
    for (int i = 0; i < n_atoms; ++i) n_configs_ *= 3;
}

std::size_t FullBasis::size() const {
    return static_cast<std::size_t>(n_configs_) * (n_photon_max_ + 1);
}

std::size_t FullBasis::index(long config, int photon) const {
    return static_cast<std::size_t>(config) * (n_photon_max_ + 1) + photon;
}

long FullBasis::config_of(std::size_t index) const {
    return static_cast<long>(index) / (n_photon_max_ + 1);
}

int FullBasis::photon_of(std::size_t index) const {
    return static_cast<int>(index % (n_photon_max_ + 1));
}

Level FullBasis::level_of(long config, int atom) const {
    long c = config;
    for (int i = 0; i < atom; ++i) c /= 3;
    return static_cast<Level>(c % 3);
}

long FullBasis::with_level(long config, int atom, Level lv) const {
    long pow = 1;
    for (int i = 0; i < atom; ++i) pow *= 3;
    const long old = (config / pow) % 3;
    return config + (static_cast<long>(lv) - old) * pow;
}

int FullBasis::count_level(long config, Level lv) const {
    int count = 0;
    long c = config;
    for (int i = 0; i < n_atoms_; ++i, c /= 3)
        if (c % 3 == static_cast<long>(lv)) ++count;
    return count;
}

OracleModel oracle_build_model(const PhysicalParams& p, const PulseEnvelope& env,
                               int n_photon_max,
                               const std::vector<double>& pair_shifts) {
    OracleModel model{FullBasis(p.n_atoms, n_photon_max), p, env, {}};
    const FullBasis& basis = model.basis;
    const int n = p.n_atoms;
    const std::size_t n_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (!pair_shifts.empty() && pair_shifts.size() != n_pairs)
        throw std::invalid_argument("pair_shifts needs one entry per atom pair");

    const auto dim = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Triplet<cplx>> diag, drive, emit;

    for (long config = 0; config < basis.n_configs(); ++config) {
        // Diagonal: Delta per Rydberg atom plus the pairwise shift.
        double shift = p.detuning * basis.count_level(config, Level::r);
        std::size_t pair = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++pair)
                if (basis.level_of(config, i) == Level::r &&
                    basis.level_of(config, j) == Level::r)
                    shift += pair_shifts.empty() ? p.blockade_shift
                                                 : pair_shifts[pair];
        for (int ph = 0; ph <= basis.n_photon_max(); ++ph) {
            const auto k = static_cast<Eigen::Index>(basis.index(config, ph));
            if (shift != 0.0) diag.emplace_back(k, k, cplx(shift, 0.0));
        }

        for (int atom = 0; atom < n; ++atom) {
            const Level lv = basis.level_of(config, atom);
            if (lv == Level::g) {
                // pump |g> -> |r>, photon untouched
                const long up = basis.with_level(config, atom, Level::r);
                for (int ph = 0; ph <= basis.n_photon_max(); ++ph)
                    drive.emplace_back(static_cast<Eigen::Index>(basis.index(up, ph)),
                                       static_cast<Eigen::Index>(basis.index(config, ph)),
                                       cplx(1.0, 0.0));
            } else if (lv == Level::r) {
                // emission |r> -> |s| with a signal photon created
                const long down = basis.with_level(config, atom, Level::s);
                for (int ph = 0; ph < basis.n_photon_max(); ++ph)
                    emit.emplace_back(static_cast<Eigen::Index>(basis.index(down, ph + 1)),
                                      static_cast<Eigen::Index>(basis.index(config, ph)),
                                      cplx(std::sqrt(ph + 1.0), 0.0));
            }
        }
    }

    SparseMatrix diagonal(dim, dim), raising(dim, dim), emission(dim, dim);
    diagonal.setFromTriplets(diag.begin(), diag.end());
    raising.setFromTriplets(drive.begin(), drive.end());
    emission.setFromTriplets(emit.begin(), emit.end());

    PartedHamiltonian& parts = model.parts;
    parts.constant_part = diagonal;
    parts.constant_part += (emission * cplx(p.signal_coupling, 0.0)).eval();
    parts.constant_part +=
        (SparseMatrix(emission.adjoint()) * cplx(p.signal_coupling, 0.0)).eval();
    parts.drive_raising = raising;
    parts.drive_lowering = raising.adjoint();
    const PulseEnvelope pump = env;
    parts.drive_coeff = [pump](double t) { return sample_envelope(pump, t); };
    return model;
}

SparseMatrix oracle_build_h(const OracleModel& model, double t) {
    return model.parts.assemble(t, false);
}

DenseVector oracle_ground_state(const FullBasis& basis) {
    DenseVector psi = DenseVector::Zero(static_cast<Eigen::Index>(basis.size()));
    psi[static_cast<Eigen::Index>(basis.index(0, 0))] = cplx(1.0, 0.0);
    return psi;
}

FullTrajectory oracle_propagate(const OracleModel& model, const DenseVector& psi0,
                                const SimulationGrid& grid) {
    if (psi0.size() != static_cast<Eigen::Index>(model.basis.size()))
        throw std::invalid_argument("initial state dimension does not match the basis");
    const long n = grid.n_steps();
    const int stride = std::max(1, grid.record_stride);

    FullTrajectory traj;
    traj.times.push_back(grid.t_start);
    traj.states.push_back(psi0);
    traj.norms.push_back(psi0.norm());

    DenseVector psi = psi0;
    rk4_evolve(model.parts, psi, grid.t_start, grid.dt, n,
               [&](long step, double t, const DenseVector& current) {
                   if (step % stride == 0 || step == n) {
                       traj.times.push_back(t);
                       traj.states.push_back(current);
                       traj.norms.push_back(current.norm());
                   }
               });
    return traj;
}

namespace {

double multinomial(int n, int n_g, int n_s, int n_r) {
    // n <= 6: exact in double
    auto fact = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    return fact(n) / (fact(n_g) * fact(n_s) * fact(n_r));
}

}  // namespace

SymmetrizedState symmetrize(const DenseVector& full_state, const FullBasis& basis,
                            const BasisPtr& target) {
    if (full_state.size() != static_cast<Eigen::Index>(basis.size()))
        throw std::invalid_argument("state dimension does not match the oracle basis");
    if (target->n_atoms() != basis.n_atoms())
        throw std::invalid_argument("atom numbers differ between bases");

    const int n = basis.n_atoms();
    const int ph_max = basis.n_photon_max();
    // bucket[(n_s, n_r, ph)] accumulates sum of amplitudes over all
    // configurations with those occupations.
    const std::size_t n_occ = static_cast<std::size_t>(n + 1) * (n + 1);
    std::vector<cplx> buckets(n_occ * (ph_max + 1), cplx(0.0, 0.0));

    for (long config = 0; config < basis.n_configs(); ++config) {
        const int n_s = basis.count_level(config, Level::s);
        const int n_r = basis.count_level(config, Level::r);
        const std::size_t occ = static_cast<std::size_t>(n_r) * (n + 1) + n_s;
        for (int ph = 0; ph <= ph_max; ++ph)
            buckets[occ * (ph_max + 1) + ph] +=
                full_state[static_cast<Eigen::Index>(basis.index(config, ph))];
    }

    SymmetrizedState out;
    out.state = StateVector{
        target, DenseVector::Zero(static_cast<Eigen::Index>(target->size()))};
    double symmetric_norm2 = 0.0;
    for (int n_r = 0; n_r <= n; ++n_r)
        for (int n_s = 0; n_s + n_r <= n; ++n_s) {
            const double m = multinomial(n, n - n_s - n_r, n_s, n_r);
            const std::size_t occ = static_cast<std::size_t>(n_r) * (n + 1) + n_s;
            for (int ph = 0; ph <= ph_max; ++ph) {
                const cplx amp = buckets[occ * (ph_max + 1) + ph] / std::sqrt(m);
                const double w = std::norm(amp);
                symmetric_norm2 += w;
                const BasisLabel label{n - n_s - n_r, n_s, n_r, ph};
                if (auto idx = target->index_of(label))
                    out.state.amps[static_cast<Eigen::Index>(*idx)] = amp;
                else
                    out.out_of_cap += w;
            }
        }
    out.residual = std::max(0.0, full_state.squaredNorm() - symmetric_norm2);
    return out;
}

CompareReport compare(const Trajectory& symmetric, const FullTrajectory& oracle,
                      const FullBasis& basis) {
    if (symmetric.times.size() != oracle.times.size())
        throw std::invalid_argument("trajectories record different sample counts");
    CompareReport report;
    for (std::size_t i = 0; i < symmetric.times.size(); ++i) {
        if (std::abs(symmetric.times[i] - oracle.times[i]) > 1e-9)
            throw std::invalid_argument("trajectories record different times");
        const SymmetrizedState proj =
            symmetrize(oracle.states[i], basis, symmetric.basis);
        const double dev =
            (symmetric.states[i] - proj.state.amps).cwiseAbs().maxCoeff();
        report.max_deviation = std::max(report.max_deviation, dev);
        report.max_residual = std::max(report.max_residual, proj.residual);
        report.max_out_of_cap = std::max(report.max_out_of_cap, proj.out_of_cap);
    }
    return report;
}

}  // namespace blockade
