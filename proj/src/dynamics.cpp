#include "blockade/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blockade {

void rk4_evolve(const PartedHamiltonian& h, DenseVector& psi, double t0, double dt,
                long n_steps,
                const std::function<void(long, double, const DenseVector&)>& on_step) {
    const Eigen::Index dim = psi.size();
    DenseVector k1(dim), k2(dim), k3(dim), k4(dim), stage(dim), scratch(dim);
    const cplx minus_i(0.0, -1.0);

    for (long step = 0; step < n_steps; ++step) {
        const double t = t0 + static_cast<double>(step) * dt;

        h.apply(t, psi, k1, scratch);
        k1 *= minus_i;
        stage = psi + (0.5 * dt) * k1;
        h.apply(t + 0.5 * dt, stage, k2, scratch);
        k2 *= minus_i;
        stage = psi + (0.5 * dt) * k2;
        h.apply(t + 0.5 * dt, stage, k3, scratch);
        k3 *= minus_i;
        stage = psi + dt * k3;
        h.apply(t + dt, stage, k4, scratch);
        k4 *= minus_i;

        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (on_step) on_step(step + 1, t + dt, psi);
    }
}

Trajectory propagate(const HamiltonianModel& model, const DenseVector& psi0,
                     const SimulationGrid& grid) {
    if (psi0.size() != static_cast<Eigen::Index>(model.basis->size()))
        throw std::invalid_argument("initial state dimension does not match the basis");
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("initial state must be normalized");
    const long n = grid.n_steps();
    if (n < 1 || grid.dt <= 0.0) throw std::invalid_argument("invalid grid");
    const int stride = std::max(1, grid.record_stride);

    Trajectory traj;
    traj.basis = model.basis;
    traj.tier = model.tier;
    traj.dt = grid.dt;
    traj.n_steps = n;
    traj.times.reserve(static_cast<std::size_t>(n / stride) + 2);
    traj.times.push_back(grid.t_start);
    traj.states.push_back(psi0);
    traj.norms.push_back(psi0.norm());

    DenseVector psi = psi0;
    const bool decaying = model.parts.has_decay;
    rk4_evolve(model.parts, psi, grid.t_start, grid.dt, n,
               [&](long step, double t, const DenseVector& current) {
                   const double norm = current.norm();
                   if (!decaying && norm > 1.0 + 1e-6) {
                       std::ostringstream os;
                       os << "norm blow-up at t = " << t << " (|psi| = " << norm
                          << "); dt = " << grid.dt
                          << " is too large for the model's fastest scale, reduce it";
                       throw std::runtime_error(os.str());
                   }
                   if (step % stride == 0 || step == n) {
                       traj.times.push_back(t);
                       traj.states.push_back(current);
                       traj.norms.push_back(norm);
                   }
               });
    return traj;
}

ConvergenceReport convergence_check(const PhysicalParams& p, const ModelFlags& flags,
                                    const PulseEnvelope& env, const DenseVector& psi0,
                                    const SimulationGrid& grid) {
    auto run_at = [&](double dt_factor) {
        SimulationGrid g = grid;
        g.dt = grid.dt * dt_factor;
        g.record_stride = std::max(1L, g.n_steps());  // endpoints only
        HamiltonianModel model = build_model(p, flags, env, g);
        return propagate(model, psi0, g).final_state();
    };
    const DenseVector coarse = run_at(1.0);
    const DenseVector fine = run_at(0.5);

    ConvergenceReport report;
    report.estimate = (coarse - fine).cwiseAbs().maxCoeff();

    auto on_node = [&](double t) {
        const double k = (t - grid.t_start) / grid.dt;
        return std::abs(k - std::round(k)) < 1e-9;
    };
    if (env.family == EnvelopeFamily::square) {
        report.non_smooth_envelope = !(on_node(0.0) && on_node(env.duration));
    } else if (env.family == EnvelopeFamily::table) {
        for (double t : env.sample_times)
            if (t > grid.t_start && t < grid.t_end && !on_node(t)) {
                report.non_smooth_envelope = true;
                break;
            }
    }
    return report;
}

}  // namespace blockade
