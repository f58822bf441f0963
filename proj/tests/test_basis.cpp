#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "blockade/basis.hpp"

using namespace blockade;

namespace {

Eigen::MatrixXcd dense(const SparseOperator& op) {
    return Eigen::MatrixXcd(op.mat);
}

}  // namespace

TEST_CASE("enumeration counts") {
    CHECK(enumerate_basis(1, {1, 1, 1})->size() == 6);
    CHECK(enumerate_basis(2, {2, 2, 0})->size() == 6);
    CHECK(enumerate_basis(100, {2, 2, 2})->size() == 27);
    // (N+1)(N+2)/2 atomic labels per photon number when uncapped
    CHECK(enumerate_basis(4, BasisCaps::uncapped(4))->size() == 15 * 5);
}

TEST_CASE("ordering is lexicographic in (n_r, n_s, n_ph) and deterministic") {
    const BasisPtr a = enumerate_basis(3, {3, 3, 1});
    const BasisPtr b = enumerate_basis(3, {3, 3, 1});
    REQUIRE(a->size() == b->size());
    for (std::size_t i = 0; i < a->size(); ++i) CHECK(a->label(i) == b->label(i));
    for (std::size_t i = 1; i < a->size(); ++i) {
        const BasisLabel& prev = a->label(i - 1);
        const BasisLabel& cur = a->label(i);
        const auto key = [](const BasisLabel& l) {
            return std::array<int, 3>{l.n_r, l.n_s, l.n_ph};
        };
        CHECK(key(prev) < key(cur));
    }
    // lookup is the exact inverse of the ordered list
    for (std::size_t i = 0; i < a->size(); ++i) {
        auto idx = a->index_of(a->label(i));
        REQUIRE(idx.has_value());
        CHECK(*idx == i);
    }
}

TEST_CASE("basis size guard") {
    CHECK_THROWS_AS(enumerate_basis(4000, BasisCaps::uncapped(4000), 1000),
                    std::length_error);
}

TEST_CASE("single-atom transition is a plain level swap") {
    const BasisPtr basis = enumerate_basis(1, {1, 1, 0});
    const SparseOperator t_rg = collective_transition(basis, Level::g, Level::r);
    const StateVector ground = make_state(basis, {1, 0, 0, 0});
    const StateVector moved = apply(t_rg, ground);
    const StateVector rydberg = make_state(basis, {0, 0, 1, 0});
    CHECK(std::abs(overlap(rydberg, moved) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(moved.norm() == doctest::Approx(1.0));
}

TEST_CASE("two-atom collective elements carry sqrt(2)") {
    // Expanding |gg> under sum_i |r><g|_i in explicit two-atom states gives
    // sqrt(2) |(gr+rg)/sqrt(2)>, and one more application gives sqrt(2) |rr>.
    const BasisPtr basis = enumerate_basis(2, {2, 2, 0});
    const SparseOperator t_rg = collective_transition(basis, Level::g, Level::r);
    const StateVector gg = make_state(basis, {2, 0, 0, 0});
    const StateVector once = apply(t_rg, gg);
    CHECK(std::abs(overlap(make_state(basis, {1, 0, 1, 0}), once) -
                   cplx(std::sqrt(2.0), 0.0)) < 1e-15);
    const StateVector twice = apply(t_rg, once);
    CHECK(std::abs(overlap(make_state(basis, {0, 0, 2, 0}), twice) -
                   cplx(2.0, 0.0)) < 1e-15);  // sqrt(2)*sqrt(2)
}

TEST_CASE("transitions leaving the capped basis are dropped") {
    const BasisPtr capped = enumerate_basis(3, {1, 1, 1});
    const SparseOperator t_sg = collective_transition(capped, Level::g, Level::s);
    // (2,1,0) --T_sg--> (1,2,0) is outside n_s_max = 1: column must vanish.
    const auto col = capped->index_of({2, 1, 0, 0});
    REQUIRE(col.has_value());
    CHECK(dense(t_sg).col(static_cast<Eigen::Index>(*col)).norm() == 0.0);
}

TEST_CASE("photon ladder") {
    const BasisPtr basis = enumerate_basis(1, {1, 1, 2});
    const SparseOperator create = photon_ladder(basis, PhotonDirection::create);
    const SparseOperator annihilate = photon_ladder(basis, PhotonDirection::annihilate);

    const StateVector vac = make_state(basis, {1, 0, 0, 0});
    const StateVector one = make_state(basis, {1, 0, 0, 1});
    const StateVector two = make_state(basis, {1, 0, 0, 2});

    CHECK(std::abs(overlap(one, apply(create, vac)) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(overlap(two, apply(create, one)) - cplx(std::sqrt(2.0), 0.0)) <
          1e-15);
    CHECK(apply(annihilate, vac).norm() == 0.0);
    CHECK(dense(annihilate).isApprox(dense(create).adjoint(), 1e-15));
    // truncation: creation out of the top state is dropped
    CHECK(apply(create, two).norm() == 0.0);
}

TEST_CASE("diagonals") {
    const BasisPtr basis = enumerate_basis(3, {3, 3, 0});
    const SparseOperator pairs = blockade_diagonal(basis);
    const SparseOperator number = rydberg_number_diagonal(basis);
    auto diag_at = [&](const SparseOperator& op, const BasisLabel& l) {
        const auto i = static_cast<Eigen::Index>(*basis->index_of(l));
        return dense(op)(i, i).real();
    };
    CHECK(diag_at(pairs, {3, 0, 0, 0}) == 0.0);
    CHECK(diag_at(pairs, {2, 0, 1, 0}) == 0.0);
    CHECK(diag_at(pairs, {1, 0, 2, 0}) == 1.0);
    CHECK(diag_at(pairs, {0, 0, 3, 0}) == 3.0);
    CHECK(diag_at(number, {3, 0, 0, 0}) == 0.0);
    CHECK(diag_at(number, {2, 0, 1, 0}) == 1.0);
    CHECK(diag_at(number, {1, 0, 2, 0}) == 2.0);
}

TEST_CASE("every transition pair is an exact adjoint pair") {
    const BasisPtr basis = enumerate_basis(4, BasisCaps::uncapped(4));
    const Level levels[] = {Level::g, Level::s, Level::r};
    for (Level a : levels)
        for (Level b : levels) {
            if (a == b) continue;
            const Eigen::MatrixXcd forward = dense(collective_transition(basis, a, b));
            const Eigen::MatrixXcd backward = dense(collective_transition(basis, b, a));
            CHECK((forward - backward.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        }
}

TEST_CASE("[T_gs, T_sg] acts as n_g - n_s on every uncapped state") {
    for (int n = 1; n <= 4; ++n) {
        const BasisPtr basis = enumerate_basis(n, BasisCaps::uncapped(n));
        const Eigen::MatrixXcd t_gs =
            dense(collective_transition(basis, Level::s, Level::g));
        const Eigen::MatrixXcd t_sg =
            dense(collective_transition(basis, Level::g, Level::s));
        const Eigen::MatrixXcd commutator = t_gs * t_sg - t_sg * t_gs;
        for (std::size_t i = 0; i < basis->size(); ++i) {
            const BasisLabel& l = basis->label(i);
            CHECK(std::abs(commutator(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(i)) -
                           cplx(l.n_g - l.n_s, 0.0)) < 1e-12);
        }
        Eigen::MatrixXcd off = commutator;
        off.diagonal().setZero();
        CHECK(off.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("doubly excited collective state normalization") {
    // sqrt(N/(2(N-1)))/N * T_rg^2 |0_a> must be a unit vector for N >= 2.
    for (int n = 2; n <= 6; ++n) {
        const BasisPtr basis = enumerate_basis(n, BasisCaps::uncapped(n));
        const SparseOperator t_rg = collective_transition(basis, Level::g, Level::r);
        StateVector state = apply(t_rg, apply(t_rg, make_state(basis, {n, 0, 0, 0})));
        const double scale = std::sqrt(n / (2.0 * (n - 1))) / static_cast<double>(n);
        state.amps *= scale;
        CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-14));
        if (n == 2) {
            const StateVector rr = make_state(basis, {0, 0, 2, 0});
            CHECK(std::abs(overlap(rr, state) - cplx(1.0, 0.0)) < 1e-14);
        }
    }
}

TEST_CASE("overlap and apply guard against basis mismatch") {
    const BasisPtr a = enumerate_basis(2, {2, 2, 1});
    const BasisPtr b = enumerate_basis(3, {3, 3, 1});
    const StateVector sa = make_state(a, {2, 0, 0, 0});
    const StateVector sb = make_state(b, {3, 0, 0, 0});
    CHECK_THROWS_AS((void)overlap(sa, sb), std::invalid_argument);
    CHECK_THROWS_AS((void)apply(collective_transition(a, Level::g, Level::s), sb),
                    std::invalid_argument);
    CHECK(std::abs(overlap(sa, sa) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(overlap(sa, make_state(a, {1, 1, 0, 0})) == cplx(0.0, 0.0));
}

TEST_CASE("state round-trips through the text format") {
    const BasisPtr basis = enumerate_basis(3, {3, 3, 2});
    std::mt19937_64 rng(7);
    StateVector state{basis,
                      DenseVector::Zero(static_cast<Eigen::Index>(basis->size()))};
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    };
    for (Eigen::Index i = 0; i < state.amps.size(); ++i)
        if (i % 3 != 2) state.amps[i] = cplx(uniform(), uniform());

    std::stringstream ss;
    save_state(ss, state);
    const StateVector loaded = load_state(ss, basis);
    CHECK((loaded.amps - state.amps).norm() == 0.0);  // %.17g is exact for doubles
}

TEST_CASE("two-level basis is the collective pair") {
    const BasisPtr basis = SymmetricBasis::two_level(5);
    REQUIRE(basis->size() == 2);
    CHECK(basis->label(0) == BasisLabel{5, 0, 0, 0});
    CHECK(basis->label(1) == BasisLabel{4, 1, 0, 1});
    CHECK(basis->is_two_level());
}
