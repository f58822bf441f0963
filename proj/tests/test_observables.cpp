#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "blockade/observables.hpp"

using namespace blockade;

namespace {

SimulationGrid plain_grid(double t_end, double dt, int stride = 1) {
    SimulationGrid g;
    g.t_start = 0.0;
    g.t_end = t_end;
    g.dt = dt;
    g.record_stride = stride;
    return g;
}

Trajectory constant_drive_run(int n_atoms, double& omega_eff_out) {
    PhysicalParams p;
    p.n_atoms = n_atoms;
    p.detuning = 2000.0;
    p.signal_coupling = 5.0;
    p.compensate_stark = true;
    ModelFlags flags;
    flags.tier = ModelTier::two_level;
    const PulseEnvelope env = PulseEnvelope::make_square(40.0, 1e9);
    const double omega_prime = 40.0 * 5.0 / 2000.0;  // 0.1
    omega_eff_out = std::sqrt(static_cast<double>(n_atoms)) * omega_prime;
    // ~2.6 oscillation periods of sin^2, densely recorded
    const double t_end = 2.6 * M_PI / omega_eff_out;
    const SimulationGrid grid = plain_grid(t_end, 1e-3 / omega_eff_out, 5);
    const auto model = build_model(p, flags, env, grid);
    return propagate(model, make_state(model.basis, {n_atoms, 0, 0, 0}).amps, grid);
}

}  // namespace

TEST_CASE("population splits by predicate") {
    const BasisPtr basis = enumerate_basis(2, BasisCaps::uncapped(2));
    StateVector ground = make_state(basis, {2, 0, 0, 0});
    CHECK(population(ground, [](const BasisLabel& l) { return l.n_r >= 1; }) == 0.0);

    StateVector mixed{basis, DenseVector::Zero(static_cast<Eigen::Index>(basis->size()))};
    mixed.amps[static_cast<Eigen::Index>(*basis->index_of({2, 0, 0, 0}))] =
        cplx(1.0 / std::sqrt(2.0), 0.0);
    mixed.amps[static_cast<Eigen::Index>(*basis->index_of({1, 1, 0, 0}))] =
        cplx(0.0, 1.0 / std::sqrt(2.0));
    CHECK(population(mixed, [](const BasisLabel& l) { return l.n_s == 1; }) ==
          doctest::Approx(0.5));

    // |S_r^2> at N=2 is exactly the (0,0,2) label
    StateVector srr = make_state(basis, {0, 0, 2, 0});
    CHECK(population(srr, [](const BasisLabel& l) { return l.n_r == 2; }) == 1.0);

    // predicate and complement partition the squared norm
    std::mt19937_64 rng(3);
    StateVector random{basis, DenseVector::Zero(static_cast<Eigen::Index>(basis->size()))};
    for (Eigen::Index i = 0; i < random.amps.size(); ++i)
        random.amps[i] = cplx(static_cast<double>(rng() >> 11) * 0x1.0p-53,
                              static_cast<double>(rng() >> 11) * 0x1.0p-53);
    auto pred = [](const BasisLabel& l) { return (l.n_s + l.n_ph) % 2 == 0; };
    const double a = population(random, pred);
    const double b = population(random, [&](const BasisLabel& l) { return !pred(l); });
    CHECK(a + b == doctest::Approx(random.amps.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("fidelity") {
    const BasisPtr basis = enumerate_basis(2, BasisCaps::uncapped(2));
    const StateVector x = make_state(basis, {1, 1, 0, 1});
    const StateVector y = make_state(basis, {2, 0, 0, 0});
    CHECK(fidelity(x, x) == doctest::Approx(1.0));
    CHECK(fidelity(x, y) == 0.0);
    StateVector scaled = x;
    scaled.amps *= cplx(0.0, 3.0);  // normalization-independent
    CHECK(fidelity(scaled, x) == doctest::Approx(1.0));
    CHECK(fidelity(x, scaled) == doctest::Approx(1.0));
}

TEST_CASE("signal-to-noise estimator") {
    CHECK(signal_to_noise(1000.0, 8.0, 0.5) == doctest::Approx(151.98).epsilon(1e-3));
    // literal reading "3 rho = 1e3" gives a three times smaller value
    CHECK(signal_to_noise(1000.0 / 3.0, 8.0, 0.5) ==
          doctest::Approx(50.66).epsilon(1e-3));
    CHECK(signal_to_noise(1000.0, 0.0, 0.5) == 0.0);

    // linear in rho and L, quadratic in lambda
    std::mt19937_64 rng(17);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (int i = 0; i < 50; ++i) {
        const double rho = uniform(1.0, 1e4);
        const double length = uniform(0.1, 50.0);
        const double lambda = uniform(0.1, 2.0);
        const double base = signal_to_noise(rho, length, lambda);
        CHECK(signal_to_noise(2.0 * rho, length, lambda) ==
              doctest::Approx(2.0 * base).epsilon(1e-12));
        CHECK(signal_to_noise(rho, 3.0 * length, lambda) ==
              doctest::Approx(3.0 * base).epsilon(1e-12));
        CHECK(signal_to_noise(rho, length, 2.0 * lambda) ==
              doctest::Approx(4.0 * base).epsilon(1e-12));
    }
}

TEST_CASE("pulse area") {
    PhysicalParams p;
    p.n_atoms = 4;        // sqrt(N) = 2
    p.detuning = 100.0;
    p.signal_coupling = 10.0;

    SUBCASE("zero drive") {
        const PulseEnvelope env = PulseEnvelope::make_square(0.0, 1.0);
        CHECK(pulse_area(env, p, plain_grid(1.0, 1e-3)) == 0.0);
    }
    SUBCASE("constant integrand: sqrt(N)|Omega'| T") {
        // sqrt(N) |Omega'| = 2 * 50 * 10/100 = 10; T = pi/20 -> area pi/2
        const PulseEnvelope env = PulseEnvelope::make_square(50.0, M_PI / 20.0);
        const double area = pulse_area(env, p, plain_grid(M_PI / 20.0, M_PI / 20.0 / 1000.0));
        CHECK(area == doctest::Approx(0.5 * M_PI).epsilon(1e-10));
    }
    SUBCASE("gaussian area matches the closed form") {
        // integral of amp exp(-(t-c)^2/2w^2) over all t = amp w sqrt(2 pi)
        const PulseEnvelope env = PulseEnvelope::make_gaussian(5.0, 2.0, 1.0, 0.05);
        const double area = pulse_area(env, p, plain_grid(2.0, 1e-4));
        const double expected =
            2.0 * (10.0 / 100.0) * 5.0 * 0.05 * std::sqrt(2.0 * M_PI);
        CHECK(area == doctest::Approx(expected).epsilon(1e-8));
    }
    SUBCASE("zero detuning rejected") {
        p.detuning = 0.0;
        const PulseEnvelope env = PulseEnvelope::make_square(1.0, 1.0);
        CHECK_THROWS_AS(pulse_area(env, p, plain_grid(1.0, 1e-3)), std::invalid_argument);
    }
}

TEST_CASE("fitted collective Rabi frequency and the sqrt(N) ladder") {
    double omega1 = 0.0, omega4 = 0.0, omega9 = 0.0;
    const Trajectory t1 = constant_drive_run(1, omega1);
    const Trajectory t4 = constant_drive_run(4, omega4);
    const Trajectory t9 = constant_drive_run(9, omega9);

    const double f1 = fitted_collective_rabi(t1);
    const double f4 = fitted_collective_rabi(t4);
    const double f9 = fitted_collective_rabi(t9);

    CHECK(f1 == doctest::Approx(0.1).epsilon(1e-4));
    CHECK(f4 == doctest::Approx(0.2).epsilon(1e-4));
    CHECK(f4 / f1 == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(f9 / f1 == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("the fit refuses runs shorter than two periods") {
    PhysicalParams p;
    p.n_atoms = 1;
    p.detuning = 2000.0;
    p.signal_coupling = 5.0;
    ModelFlags flags;
    flags.tier = ModelTier::two_level;
    const PulseEnvelope env = PulseEnvelope::make_square(40.0, 1e9);
    const SimulationGrid grid = plain_grid(10.0, 0.01, 5);  // ~1/3 period at 0.1 rad/us
    const auto model = build_model(p, flags, env, grid);
    const Trajectory traj =
        propagate(model, make_state(model.basis, {1, 0, 0, 0}).amps, grid);
    CHECK_THROWS_AS((void)fitted_collective_rabi(traj), std::runtime_error);
}

TEST_CASE("run report on an ideal pi pulse") {
    PhysicalParams p;
    p.n_atoms = 4;
    p.detuning = 2000.0;
    p.signal_coupling = 5.0;
    ModelFlags flags;
    flags.tier = ModelTier::two_level;
    // sqrt(N)|Omega'| = 0.2: area pi/2 at T = pi/0.4
    const double t_pi = M_PI / 0.4;
    const PulseEnvelope env = PulseEnvelope::make_square(40.0, t_pi);
    const SimulationGrid grid = make_grid(p, env, 0.0, t_pi, 2.5e-3);
    const auto model = build_model(p, flags, env, grid);
    const Trajectory traj =
        propagate(model, make_state(model.basis, {4, 0, 0, 0}).amps, grid);
    const RunReport report = make_run_report(traj, p, env, grid);

    CHECK(report.success_probability >= 0.999);
    CHECK(report.fidelity >= 0.999);
    CHECK(report.pulse_area == doctest::Approx(0.5 * M_PI).epsilon(1e-9));
    CHECK(report.double_excitation_max == 0.0);  // no |r> sector in this tier
    CHECK(report.double_signal_final == 0.0);
    CHECK(report.loss_probability < 1e-9);
    CHECK(report.rsn == doctest::Approx(signal_to_noise(p.density, p.length, p.wavelength)));
    CHECK(report.success_probability + report.loss_probability <= 1.0 + 1e-9);
}

TEST_CASE("success probability is zero with no emission channel") {
    PhysicalParams p;
    p.n_atoms = 3;
    p.detuning = 100.0;
    p.signal_coupling = 0.0;  // no photon ever created
    p.rydberg_linewidth = 0.0;
    ModelFlags flags;
    flags.tier = ModelTier::full;
    const PulseEnvelope env = PulseEnvelope::make_square(20.0, 0.5);
    const SimulationGrid grid = make_grid(p, env, 0.0, 0.5);
    const auto model = build_model(p, flags, env, grid);
    const Trajectory traj =
        propagate(model, make_state(model.basis, {3, 0, 0, 0}).amps, grid);
    CHECK(success_probability(traj) == 0.0);
    CHECK(double_excitation_prob(traj).signal_final == 0.0);
}

TEST_CASE("initial state scores zero success") {
    PhysicalParams p;
    p.n_atoms = 2;
    ModelFlags flags;
    flags.tier = ModelTier::full;
    const PulseEnvelope env = PulseEnvelope::make_square(0.0, 1.0);
    const SimulationGrid grid = plain_grid(1.0, 1e-2);
    const auto model = build_model(p, flags, env, grid);
    const Trajectory traj =
        propagate(model, make_state(model.basis, {2, 0, 0, 0}).amps, grid);
    CHECK(success_probability(traj) == 0.0);
}
