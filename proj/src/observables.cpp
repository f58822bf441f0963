#include "blockade/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockade {

double population(const DenseVector& amps, const SymmetricBasis& basis,
                  const LabelPredicate& predicate) {
    double total = 0.0;
    const auto& labels = basis.labels();
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (predicate(labels[i])) total += std::norm(amps[static_cast<Eigen::Index>(i)]);
    return total;
}

double population(const StateVector& state, const LabelPredicate& predicate) {
    return population(state.amps, *state.basis, predicate);
}

namespace {

bool is_single_excitation(const BasisLabel& l) {
    return l.n_s == 1 && l.n_ph == 1 && l.n_r == 0;
}

}  // namespace

double success_probability(const Trajectory& traj) {
    return population(traj.final_state(), *traj.basis, is_single_excitation);
}

DoubleExcitation double_excitation_prob(const Trajectory& traj) {
    DoubleExcitation result;
    for (const auto& state : traj.states)
        result.rydberg_max =
            std::max(result.rydberg_max, population(state, *traj.basis,
                                                    [](const BasisLabel& l) {
                                                        return l.n_r >= 2;
                                                    }));
    result.signal_final = population(traj.final_state(), *traj.basis,
                                     [](const BasisLabel& l) {
                                         return l.n_s >= 2 || l.n_ph >= 2;
                                     });
    return result;
}

double fidelity(const StateVector& state, const StateVector& target) {
    const double n2 = state.amps.squaredNorm() * target.amps.squaredNorm();
    if (n2 == 0.0) return 0.0;
    return std::norm(overlap(target, state)) / n2;
}

double signal_to_noise(double density, double length, double wavelength) {
    const double k = 2.0 * M_PI / wavelength;
    return 3.0 * density * length / (k * k);
}

double pulse_area(const PulseEnvelope& env, const PhysicalParams& p,
                  const SimulationGrid& grid) {
    if (p.detuning == 0.0)
        throw std::invalid_argument("pulse area undefined at zero detuning");
    const double scale =
        std::sqrt(static_cast<double>(p.n_atoms)) * p.signal_coupling /
        std::abs(p.detuning);
    auto f = [&](double t) { return scale * std::abs(sample_envelope(env, t)); };
    const long n = grid.n_steps();
    double area = 0.0;
    for (long k = 0; k < n; ++k) {
        const double a = grid.time_at(k);
        const double b = a + grid.dt;
        area += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    }
    return area;
}

namespace {

double fit_sse(const std::vector<double>& t, const std::vector<double>& pop,
               double omega) {
    double sse = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double model = std::sin(omega * t[i]);
        const double d = pop[i] - model * model;
        sse += d * d;
    }
    return sse;
}

}  // namespace

double fitted_collective_rabi(const Trajectory& traj) {
    std::vector<double> pop(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i)
        pop[i] = population(traj.states[i], *traj.basis, is_single_excitation);

    // Interpolated 0.5-crossings: consecutive crossings of sin^2 are
    // pi/2 apart in phase.
    std::vector<double> crossings;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        const double a = pop[i - 1] - 0.5;
        const double b = pop[i] - 0.5;
        if (a == 0.0) crossings.push_back(traj.times[i - 1]);
        else if (a * b < 0.0)
            crossings.push_back(traj.times[i - 1] +
                                (traj.times[i] - traj.times[i - 1]) * a / (a - b));
    }
    if (crossings.size() < 4)
        throw std::runtime_error(
            "Rabi fit failure: fewer than 2 oscillation periods recorded");

    double omega = 0.5 * M_PI * static_cast<double>(crossings.size() - 1) /
                   (crossings.back() - crossings.front());

    // Golden-section refinement of the least-squares objective inside a
    // bracket narrow enough to stay unimodal (phase slip < 1 rad at the
    // last sample).
    const double span = std::max(traj.times.back(), 1e-300);
    const double delta = std::min(0.1, 1.0 / (omega * span));
    double lo = omega * (1.0 - delta);
    double hi = omega * (1.0 + delta);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = fit_sse(traj.times, pop, x1);
    double f2 = fit_sse(traj.times, pop, x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * omega; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = fit_sse(traj.times, pop, x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = fit_sse(traj.times, pop, x2);
        }
    }
    return 0.5 * (lo + hi);
}

RunReport make_run_report(const Trajectory& traj, const PhysicalParams& p,
                          const PulseEnvelope& env, const SimulationGrid& grid) {
    RunReport report;
    report.success_probability = success_probability(traj);

    const BasisLabel target{p.n_atoms - 1, 1, 0, 1};
    if (traj.basis->index_of(target)) {
        StateVector final_state{traj.basis, traj.final_state()};
        report.fidelity = fidelity(final_state, make_state(traj.basis, target));
    }

    const DoubleExcitation d = double_excitation_prob(traj);
    report.double_excitation_max = d.rydberg_max;
    report.double_signal_final = d.signal_final;

    for (const auto& state : traj.states)
        report.single_rydberg_max =
            std::max(report.single_rydberg_max,
                     population(state, *traj.basis,
                                [](const BasisLabel& l) { return l.n_r == 1; }));

    const double final_norm2 = traj.final_state().squaredNorm();
    report.loss_probability = std::max(0.0, 1.0 - final_norm2);

    if (p.detuning != 0.0) report.pulse_area = pulse_area(env, p, grid);
    report.rsn = signal_to_noise(p.density, p.length, p.wavelength);

    try {
        report.fitted_collective_rabi = fitted_collective_rabi(traj);
    } catch (const std::runtime_error&) {
        // not an oscillation run; leave NaN
    }
    return report;
}

}  // namespace blockade
