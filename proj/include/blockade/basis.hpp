#ifndef BLOCKADE_BASIS_HPP
#define BLOCKADE_BASIS_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "blockade/params.hpp"

namespace blockade {

using SparseMatrix = Eigen::SparseMatrix<cplx>;
using DenseVector = Eigen::VectorXcd;

enum class Level : int { g = 0, s = 1, r = 2 };

// Dicke occupation label tensored with a photon Fock number.
// n_g + n_s + n_r == N_a always.
struct BasisLabel {
    int n_g = 0;
    int n_s = 0;
    int n_r = 0;
    int n_ph = 0;

    int occupation(Level lv) const {
        return lv == Level::g ? n_g : (lv == Level::s ? n_s : n_r);
    }
    bool operator==(const BasisLabel&) const = default;
};

struct BasisCaps {
    int n_s_max = 2;
    int n_r_max = 2;
    int n_photon_max = 2;

    static BasisCaps from_flags(const ModelFlags& f) {
        return {f.n_s_max, f.n_r_max, f.n_photon_max};
    }
    static BasisCaps uncapped(int n_atoms) { return {n_atoms, n_atoms, n_atoms}; }
    bool operator==(const BasisCaps&) const = default;
};

inline constexpr std::size_t kDefaultMaxBasisSize = 2'000'000;

// Permutation-symmetric atomic basis x truncated photon ladder, ordered
// lexicographically in (n_r, n_s, n_ph). Immutable once built.
class SymmetricBasis {
  public:
    SymmetricBasis(int n_atoms, BasisCaps caps,
                   std::size_t max_size = kDefaultMaxBasisSize);

    int n_atoms() const { return n_atoms_; }
    const BasisCaps& caps() const { return caps_; }
    std::size_t size() const { return labels_.size(); }
    const std::vector<BasisLabel>& labels() const { return labels_; }
    const BasisLabel& label(std::size_t i) const { return labels_[i]; }
    std::optional<std::size_t> index_of(const BasisLabel& label) const;
    bool is_two_level() const { return two_level_; }

    // Exactly { |N,0,0;0>, |N-1,1,0;1> }: the collective two-level pair.
    static std::shared_ptr<const SymmetricBasis> two_level(int n_atoms);

  private:
    SymmetricBasis() = default;
    void build_index();

    int n_atoms_ = 0;
    BasisCaps caps_{};
    bool two_level_ = false;
    std::vector<BasisLabel> labels_;
    std::unordered_map<std::int64_t, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const SymmetricBasis>;

BasisPtr enumerate_basis(int n_atoms, BasisCaps caps,
                         std::size_t max_size = kDefaultMaxBasisSize);

// Same physical space, regardless of how the handle was obtained.
bool compatible(const SymmetricBasis& a, const SymmetricBasis& b);

struct StateVector {
    BasisPtr basis;
    DenseVector amps;

    double norm() const { return amps.norm(); }
};

struct SparseOperator {
    BasisPtr basis;
    SparseMatrix mat;

    SparseOperator adjoint() const;
};

// Unnormalized collective transition T = sum_i |to><from|_i. On Dicke
// labels the only nonzero element moves one atom from `from` to `to`
// with weight sqrt(n_from * (n_to + 1)); elements whose target leaves
// the capped basis are dropped.
SparseOperator collective_transition(const BasisPtr& basis, Level from, Level to);

enum class PhotonDirection { create, annihilate };
SparseOperator photon_ladder(const BasisPtr& basis, PhotonDirection direction);

// Diagonal pair count n_r (n_r - 1)/2: the uniform-shift blockade term.
SparseOperator blockade_diagonal(const BasisPtr& basis);

// Diagonal n_r.
SparseOperator rydberg_number_diagonal(const BasisPtr& basis);

StateVector make_state(const BasisPtr& basis, const BasisLabel& label);
cplx overlap(const StateVector& a, const StateVector& b);
StateVector apply(const SparseOperator& op, const StateVector& state);

// Plain-text state serialization, one line per nonzero amplitude:
// "n_g n_s n_r n_ph re im".
void save_state(std::ostream& os, const StateVector& state);
StateVector load_state(std::istream& is, const BasisPtr& basis);

}  // namespace blockade

#endif
