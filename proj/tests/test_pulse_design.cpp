#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blockade/pulse_design.hpp"

using namespace blockade;

namespace {

PhysicalParams reference_params() {
    PhysicalParams p;
    p.n_atoms = 4;          // sqrt(N) = 2
    p.detuning = 100.0;
    p.signal_coupling = 10.0;
    p.compensate_stark = true;
    return p;
}

}  // namespace

TEST_CASE("square pulse duration solves in closed form") {
    // sqrt(N)|Omega'| = 2 * 50 * 10 / 100 = 10 rad/us -> T = pi/20 us
    PhysicalParams p = reference_params();
    const PulseEnvelope shape = PulseEnvelope::make_square(50.0, 1.0);
    const PiPulseResult result =
        solve_pi_pulse(shape, FreeParameter::duration, p, ModelTier::two_level);
    CHECK(result.envelope.duration == doctest::Approx(M_PI / 20.0).epsilon(1e-9));
    CHECK(result.area == doctest::Approx(0.5 * M_PI).epsilon(1e-6));
    CHECK(result.transfer >= 0.9999);
}

TEST_CASE("gaussian amplitude solve hits the area and transfers fully") {
    PhysicalParams p = reference_params();
    const PulseEnvelope shape = PulseEnvelope::make_gaussian(1.0, 1.0, 0.5, 0.08);
    const PiPulseResult result =
        solve_pi_pulse(shape, FreeParameter::amplitude, p, ModelTier::two_level);
    CHECK(result.area == doctest::Approx(0.5 * M_PI).epsilon(1e-6));
    CHECK(result.transfer >= 0.9999);
    // closed-form check: area = sqrt(N) amp (g/|Delta|) w sqrt(2 pi)
    const double amp = result.envelope.amplitude;
    CHECK(2.0 * amp * 0.1 * 0.08 * std::sqrt(2.0 * M_PI) ==
          doctest::Approx(0.5 * M_PI).epsilon(1e-4));  // tails clipped at [0,1]
}

TEST_CASE("raman tier verification agrees with two_level") {
    PhysicalParams p = reference_params();
    const PulseEnvelope shape = PulseEnvelope::make_square(50.0, 1.0);
    const PiPulseResult result =
        solve_pi_pulse(shape, FreeParameter::duration, p, ModelTier::raman);
    CHECK(result.envelope.duration == doctest::Approx(M_PI / 20.0).epsilon(1e-9));
    CHECK(result.transfer >= 0.9999);
}

TEST_CASE("degenerate bracket is a bracket error") {
    PhysicalParams p = reference_params();
    const PulseEnvelope shape = PulseEnvelope::make_square(50.0, 1.0);
    CHECK_THROWS_WITH_AS(
        solve_pi_pulse(shape, FreeParameter::duration, p, ModelTier::two_level,
                       std::make_pair(0.0, 0.0)),
        doctest::Contains("no root in the search bracket"), std::runtime_error);
}

TEST_CASE("zero drive never reaches the target area") {
    PhysicalParams p = reference_params();
    const PulseEnvelope shape = PulseEnvelope::make_square(0.0, 1.0);
    CHECK_THROWS_WITH_AS(
        solve_pi_pulse(shape, FreeParameter::duration, p, ModelTier::two_level),
        doctest::Contains("no root"), std::runtime_error);
}

TEST_CASE("full tier is rejected by the solver") {
    PhysicalParams p = reference_params();
    const PulseEnvelope shape = PulseEnvelope::make_square(50.0, 1.0);
    CHECK_THROWS_AS(
        solve_pi_pulse(shape, FreeParameter::duration, p, ModelTier::full),
        std::invalid_argument);
}

TEST_CASE("solved duration scales inversely with the coupling rate") {
    PhysicalParams p = reference_params();
    const PiPulseResult slow = solve_pi_pulse(PulseEnvelope::make_square(50.0, 1.0),
                                              FreeParameter::duration, p,
                                              ModelTier::two_level);
    const PiPulseResult fast = solve_pi_pulse(PulseEnvelope::make_square(100.0, 1.0),
                                              FreeParameter::duration, p,
                                              ModelTier::two_level);
    CHECK(slow.envelope.duration / fast.envelope.duration ==
          doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("uncompensated Stark phase triggers transfer refinement") {
    PhysicalParams p = reference_params();
    p.compensate_stark = false;
    p.detuning = 400.0;
    // |Omega| = 40: two-photon detuning |Omega|^2/Delta = 4 vs
    // sqrt(N)|Omega'| = 2; the bare area solution undershoots badly.
    const PulseEnvelope shape = PulseEnvelope::make_square(40.0, 1.0);
    const PiPulseResult result =
        solve_pi_pulse(shape, FreeParameter::duration, p, ModelTier::two_level);
    // detuned amplitude cap: V^2/(V^2 + delta^2/4) = 4/8 = 0.5
    CHECK(result.transfer == doctest::Approx(0.5).epsilon(0.02));
    // refinement lands on the generalized-Rabi peak, not the bare area root
    const double v = 2.0, delta = 4.0;
    const double t_peak = M_PI / std::sqrt(v * v + 0.25 * delta * delta) * 0.5;
    CHECK(result.envelope.duration == doctest::Approx(t_peak).epsilon(0.05));
}

TEST_CASE("blockade sweep orders rows and reports suppression") {
    PhysicalParams p;
    p.n_atoms = 4;
    p.detuning = 0.0;       // resonant pump: double excitation is easy at B = 0
    p.signal_coupling = 0.0;
    ModelFlags flags;
    flags.tier = ModelTier::full;
    flags.n_s_max = 0;
    flags.n_r_max = 4;
    flags.n_photon_max = 1;
    const double omega = 10.0;
    const PulseEnvelope drive = PulseEnvelope::make_square(omega, M_PI / omega);
    const SimulationGrid grid = make_grid(p, drive, 0.0, M_PI / omega);

    SUBCASE("empty list, empty table") {
        CHECK(blockade_sweep(p, {}, drive, flags, grid).empty());
    }

    SUBCASE("suppression with rising B") {
        const std::vector<double> b_values = {1000.0 * omega, 0.0, 20.0};
        const auto rows = blockade_sweep(p, b_values, drive, flags, grid);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].blockade_shift == 0.0);
        CHECK(rows[1].blockade_shift == 20.0);
        CHECK(rows[2].blockade_shift == 10000.0);
        for (const auto& row : rows) CHECK(row.ok);
        CHECK(rows[0].p_d > 0.1);                      // free double excitation
        CHECK(rows[0].p_d >= rows[2].p_d);             // monotone regime
        CHECK(rows[2].p_d < 1e-2 * rows[0].p_d);       // strong suppression
    }
}
