#include "blockade/basis.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace blockade {

namespace {

std::int64_t encode(const BasisLabel& label, int n_atoms, int n_photon_max) {
    return (static_cast<std::int64_t>(label.n_r) * (n_atoms + 1) + label.n_s) *
               (n_photon_max + 1) +
           label.n_ph;
}

}  // namespace

SymmetricBasis::SymmetricBasis(int n_atoms, BasisCaps caps, std::size_t max_size) {
    if (n_atoms < 1) throw std::invalid_argument("basis needs n_atoms >= 1");
    if (caps.n_photon_max < 0 || caps.n_s_max < 0 || caps.n_r_max < 0)
        throw std::invalid_argument("basis caps must be >= 0");
    n_atoms_ = n_atoms;
    caps_ = caps;

    const int s_max = std::min(caps.n_s_max, n_atoms);
    const int r_max = std::min(caps.n_r_max, n_atoms);
    const int ph_max = caps.n_photon_max;

    std::size_t count = 0;
    for (int n_r = 0; n_r <= r_max; ++n_r)
        count += static_cast<std::size_t>(std::min(s_max, n_atoms - n_r) + 1) *
                 (ph_max + 1);
    if (count > max_size) {
        std::ostringstream os;
        os << "basis size " << count << " exceeds the configured maximum "
           << max_size << " (override with BLOCKADE_SIM_MAX_BASIS)";
        throw std::length_error(os.str());
    }

    labels_.reserve(count);
    for (int n_r = 0; n_r <= r_max; ++n_r)
        for (int n_s = 0; n_s <= std::min(s_max, n_atoms - n_r); ++n_s)
            for (int n_ph = 0; n_ph <= ph_max; ++n_ph)
                labels_.push_back({n_atoms - n_s - n_r, n_s, n_r, n_ph});
    build_index();
}

void SymmetricBasis::build_index() {
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i)
        index_.emplace(encode(labels_[i], n_atoms_, caps_.n_photon_max), i);
}

std::optional<std::size_t> SymmetricBasis::index_of(const BasisLabel& label) const {
    if (label.n_g + label.n_s + label.n_r != n_atoms_) return std::nullopt;
    if (label.n_g < 0 || label.n_s < 0 || label.n_r < 0 || label.n_ph < 0)
        return std::nullopt;
    if (label.n_ph > caps_.n_photon_max) return std::nullopt;
    auto it = index_.find(encode(label, n_atoms_, caps_.n_photon_max));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

BasisPtr SymmetricBasis::two_level(int n_atoms) {
    if (n_atoms < 1) throw std::invalid_argument("basis needs n_atoms >= 1");
    auto basis = std::shared_ptr<SymmetricBasis>(new SymmetricBasis());
    basis->n_atoms_ = n_atoms;
    basis->caps_ = {1, 0, 1};
    basis->two_level_ = true;
    basis->labels_ = {{n_atoms, 0, 0, 0}, {n_atoms - 1, 1, 0, 1}};
    basis->build_index();
    return basis;
}

BasisPtr enumerate_basis(int n_atoms, BasisCaps caps, std::size_t max_size) {
    return std::make_shared<const SymmetricBasis>(n_atoms, caps, max_size);
}

bool compatible(const SymmetricBasis& a, const SymmetricBasis& b) {
    return a.n_atoms() == b.n_atoms() && a.caps() == b.caps() &&
           a.is_two_level() == b.is_two_level() && a.size() == b.size();
}

namespace {

void require_compatible(const SymmetricBasis& a, const SymmetricBasis& b,
                        const char* what) {
    if (!compatible(a, b))
        throw std::invalid_argument(std::string("basis mismatch in ") + what);
}

SparseMatrix from_triplets(const std::vector<Eigen::Triplet<cplx>>& triplets,
                           std::size_t dim) {
    SparseMatrix mat(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    mat.setFromTriplets(triplets.begin(), triplets.end());
    return mat;
}

}  // namespace

SparseOperator SparseOperator::adjoint() const {
    SparseOperator out;
    out.basis = basis;
    out.mat = mat.adjoint();
    return out;
}

SparseOperator collective_transition(const BasisPtr& basis, Level from, Level to) {
    if (from == to)
        throw std::invalid_argument("collective_transition needs from != to");
    std::vector<Eigen::Triplet<cplx>> triplets;
    const auto& labels = basis->labels();
    for (std::size_t col = 0; col < labels.size(); ++col) {
        const BasisLabel& src = labels[col];
        const int n_from = src.occupation(from);
        if (n_from == 0) continue;
        BasisLabel dst = src;
        auto bump = [&dst](Level lv, int d) {
            if (lv == Level::g) dst.n_g += d;
            else if (lv == Level::s) dst.n_s += d;
            else dst.n_r += d;
        };
        bump(from, -1);
        bump(to, +1);
        auto row = basis->index_of(dst);
        if (!row) continue;  // leaves the capped basis: dropped
        const double w = std::sqrt(static_cast<double>(n_from) *
                                   (src.occupation(to) + 1.0));
        triplets.emplace_back(static_cast<Eigen::Index>(*row),
                              static_cast<Eigen::Index>(col), cplx(w, 0.0));
    }
    return {basis, from_triplets(triplets, basis->size())};
}

SparseOperator photon_ladder(const BasisPtr& basis, PhotonDirection direction) {
    std::vector<Eigen::Triplet<cplx>> triplets;
    const auto& labels = basis->labels();
    for (std::size_t col = 0; col < labels.size(); ++col) {
        BasisLabel dst = labels[col];
        double w;
        if (direction == PhotonDirection::create) {
            w = std::sqrt(labels[col].n_ph + 1.0);
            dst.n_ph += 1;
        } else {
            if (labels[col].n_ph == 0) continue;
            w = std::sqrt(static_cast<double>(labels[col].n_ph));
            dst.n_ph -= 1;
        }
        auto row = basis->index_of(dst);
        if (!row) continue;
        triplets.emplace_back(static_cast<Eigen::Index>(*row),
                              static_cast<Eigen::Index>(col), cplx(w, 0.0));
    }
    return {basis, from_triplets(triplets, basis->size())};
}

namespace {

SparseOperator diagonal_operator(const BasisPtr& basis,
                                 double (*value)(const BasisLabel&)) {
    std::vector<Eigen::Triplet<cplx>> triplets;
    const auto& labels = basis->labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double v = value(labels[i]);
        if (v != 0.0)
            triplets.emplace_back(static_cast<Eigen::Index>(i),
                                  static_cast<Eigen::Index>(i), cplx(v, 0.0));
    }
    return {basis, from_triplets(triplets, basis->size())};
}

}  // namespace

SparseOperator blockade_diagonal(const BasisPtr& basis) {
    return diagonal_operator(basis, [](const BasisLabel& l) {
        return 0.5 * l.n_r * (l.n_r - 1.0);
    });
}

SparseOperator rydberg_number_diagonal(const BasisPtr& basis) {
    return diagonal_operator(
        basis, [](const BasisLabel& l) { return static_cast<double>(l.n_r); });
}

StateVector make_state(const BasisPtr& basis, const BasisLabel& label) {
    auto idx = basis->index_of(label);
    if (!idx) throw std::invalid_argument("label not contained in basis");
    StateVector state{basis, DenseVector::Zero(static_cast<Eigen::Index>(basis->size()))};
    state.amps[static_cast<Eigen::Index>(*idx)] = cplx(1.0, 0.0);
    return state;
}

cplx overlap(const StateVector& a, const StateVector& b) {
    require_compatible(*a.basis, *b.basis, "overlap");
    return a.amps.dot(b.amps);  // Eigen conjugates the left argument
}

StateVector apply(const SparseOperator& op, const StateVector& state) {
    require_compatible(*op.basis, *state.basis, "apply");
    return {state.basis, op.mat * state.amps};
}

void save_state(std::ostream& os, const StateVector& state) {
    const auto& labels = state.basis->labels();
    char line[160];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const cplx a = state.amps[static_cast<Eigen::Index>(i)];
        if (a == cplx(0.0, 0.0)) continue;
        std::snprintf(line, sizeof(line), "%d %d %d %d %.17g %.17g\n",
                      labels[i].n_g, labels[i].n_s, labels[i].n_r, labels[i].n_ph,
                      a.real(), a.imag());
        os << line;
    }
}

StateVector load_state(std::istream& is, const BasisPtr& basis) {
    StateVector state{basis, DenseVector::Zero(static_cast<Eigen::Index>(basis->size()))};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        BasisLabel label;
        double re = 0.0, im = 0.0;
        if (!(ls >> label.n_g >> label.n_s >> label.n_r >> label.n_ph >> re >> im))
            throw std::runtime_error("state file: malformed line " +
                                     std::to_string(line_no));
        auto idx = basis->index_of(label);
        if (!idx)
            throw std::runtime_error("state file: label outside basis at line " +
                                     std::to_string(line_no));
        state.amps[static_cast<Eigen::Index>(*idx)] = cplx(re, im);
    }
    return state;
}

}  // namespace blockade
