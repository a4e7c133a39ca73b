// Copyright 2026 The qdata Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdata/states.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qdata/error.hpp"

namespace qdata {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kNoiseTol = 1e-9;

void check_psd(const ComplexMatrix& m, const char* who) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().size() ? solver.eigenvalues()(0) : 0.0;
    require(lo >= -kPsdFloor, ErrorKind::InvalidInput,
            std::string(who) + ": not positive semidefinite (min eigenvalue " + std::to_string(lo) + ")");
}

HermitianOperator hermitian_within_noise(const ComplexMatrix& m) {
    HermitianOperator checked(m, kNoiseTol);
    return HermitianOperator::symmetrized(checked.matrix());
}

ComplexMatrix psd_sqrt(const HermitianOperator& h) {
    return spectral_map(eig_hermitian(h), [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

}  // namespace

PureState::PureState(ComplexVector v) : v_(std::move(v)) {
    require(v_.size() >= 1, ErrorKind::InvalidShape, "PureState: empty vector");
    require(v_.size() <= kMaxDim, ErrorKind::InvalidShape, "PureState: dimension exceeds 64");
    const double n = v_.norm();
    require(std::abs(n - 1.0) <= kNormTol, ErrorKind::InvalidInput,
            "PureState: vector not normalized (norm " + std::to_string(n) + ")");
}

PureState PureState::normalized(const ComplexVector& v) {
    const double n = v.norm();
    require(n > 0.0, ErrorKind::InvalidInput, "PureState: zero vector");
    ComplexVector u = v / n;
    return PureState(std::move(u));
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index k) {
    require(k >= 0 && k < dim, ErrorKind::InvalidShape, "PureState::basis: index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v(k) = 1.0;
    return PureState(std::move(v));
}

PureState PureState::bloch(double theta, double phi) {
    ComplexVector v(2);
    v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
    return normalized(v);
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : h_(hermitian_within_noise(m)) {
    require(h_.dim() <= kMaxDim, ErrorKind::InvalidShape, "DensityMatrix: dimension exceeds 64");
    const double tr = h_.trace();
    require(std::abs(tr - 1.0) <= kTraceTol, ErrorKind::InvalidInput,
            "DensityMatrix: trace " + std::to_string(tr) + " != 1");
    check_psd(h_.matrix(), "DensityMatrix");
}

DensityMatrix::DensityMatrix(const PureState& psi) : h_(HermitianOperator::symmetrized(psi.projector())) {}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(ComplexMatrix(identity(dim) / static_cast<double>(dim)));
}

double DensityMatrix::purity() const { return (matrix() * matrix()).trace().real(); }

Povm::Povm(std::vector<HermitianOperator> effects) : effects_(std::move(effects)) {
    require(!effects_.empty(), ErrorKind::InvalidInput, "Povm: no effects");
    const Eigen::Index d = effects_.front().dim();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& e : effects_) {
        require(e.dim() == d, ErrorKind::InvalidShape, "Povm: effects differ in dimension");
        check_psd(e.matrix(), "Povm effect");
        sum += e.matrix();
    }
    require(approx_equal(sum, identity(d), 1e-10), ErrorKind::InvalidInput, "Povm: effects do not sum to identity");
}

Povm Povm::projective(const ComplexMatrix& basis_columns) {
    std::vector<HermitianOperator> effects;
    for (Eigen::Index k = 0; k < basis_columns.cols(); ++k) {
        ComplexVector v = basis_columns.col(k);
        effects.push_back(HermitianOperator::symmetrized(v * v.adjoint()));
    }
    return Povm(std::move(effects));
}

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
    require(!members_.empty(), ErrorKind::InvalidInput, "Ensemble: no members");
    double total = 0.0;
    for (const auto& m : members_) {
        require(m.probability >= 0.0 && m.probability <= 1.0, ErrorKind::InvalidInput,
                "Ensemble: probability outside [0,1]");
        require(m.state.dim() == members_.front().state.dim(), ErrorKind::InvalidShape,
                "Ensemble: members differ in dimension");
        total += m.probability;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::InvalidInput, "Ensemble: probabilities do not sum to 1");
}

DensityMatrix Ensemble::density() const {
    ComplexMatrix rho = ComplexMatrix::Zero(dim(), dim());
    for (const auto& m : members_) rho += m.probability * m.state.projector();
    return DensityMatrix(rho);
}

double trace_distance(const DensityMatrix& r, const DensityMatrix& s) {
    require(r.dim() == s.dim(), ErrorKind::InvalidShape, "trace_distance: dimension mismatch");
    const double d = 0.5 * trace_norm(HermitianOperator::symmetrized(r.matrix() - s.matrix()));
    return std::clamp(d, 0.0, 1.0);
}

double uhlmann_fidelity(const HermitianOperator& r, const HermitianOperator& s) {
    require(r.dim() == s.dim(), ErrorKind::InvalidShape, "uhlmann_fidelity: dimension mismatch");
    check_psd(r.matrix(), "uhlmann_fidelity");
    check_psd(s.matrix(), "uhlmann_fidelity");
    const ComplexMatrix sr = psd_sqrt(r);
    const auto inner = HermitianOperator::symmetrized(sr * s.matrix() * sr);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(inner.matrix(), Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k)
        acc += std::sqrt(std::max(solver.eigenvalues()(k), 0.0));
    return std::clamp(acc * acc, 0.0, 1.0);
}

double uhlmann_fidelity(const DensityMatrix& r, const DensityMatrix& s) { return uhlmann_fidelity(r.op(), s.op()); }

PureState haar_random_state(Eigen::Index dim, RngStream& rng) {
    require(dim >= 1, ErrorKind::InvalidShape, "haar_random_state: dim must be >= 1");
    ComplexVector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = rng.complex_normal();
    return PureState::normalized(v);
}

DensityMatrix random_density_matrix(Eigen::Index dim, Eigen::Index env_dim, RngStream& rng) {
    const PureState joint = haar_random_state(dim * env_dim, rng);
    const std::size_t dims[] = {static_cast<std::size_t>(dim), static_cast<std::size_t>(env_dim)};
    const std::size_t keep[] = {0};
    return DensityMatrix(partial_trace(joint.projector(), dims, keep));
}

DensityMatrix nearest_density_matrix(const HermitianOperator& h) {
    require(std::abs(h.trace() - 1.0) <= 0.5, ErrorKind::InvalidInput,
            "nearest_density_matrix: trace too far from 1");
    const auto e = eig_hermitian(h);
    const RealVector p = project_to_simplex(e.values);
    ComplexMatrix rho = e.vectors * p.asDiagonal() * e.vectors.adjoint();
    // Exact unit trace regardless of rounding in the reconstruction.
    rho /= rho.trace().real();
    return DensityMatrix(rho);
}

std::vector<double> born_probabilities(const DensityMatrix& r, const Povm& m) {
    require(r.dim() == m.dim(), ErrorKind::InvalidShape, "born_probabilities: dimension mismatch");
    std::vector<double> p;
    p.reserve(m.size());
    double total = 0.0;
    for (const auto& e : m.effects()) {
        const double v = std::clamp((e.matrix() * r.matrix()).trace().real(), 0.0, 1.0);
        p.push_back(v);
        total += v;
    }
    if (total > 0.0)
        for (auto& v : p) v /= total;
    return p;
}

std::size_t sample_index(const std::vector<double>& probabilities, RngStream& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        acc += probabilities[k];
        if (u < acc) return k;
    }
    // Rounding left a sliver above the cumulative sum: last non-zero outcome.
    for (std::size_t k = probabilities.size(); k-- > 0;)
        if (probabilities[k] > 0.0) return k;
    return 0;
}

std::size_t sample_outcome(const DensityMatrix& r, const Povm& m, RngStream& rng) {
    return sample_index(born_probabilities(r, m), rng);
}

Eigen::Vector3d bloch_vector(const DensityMatrix& r) {
    require(r.dim() == 2, ErrorKind::InvalidShape, "bloch_vector: not a qubit");
    const auto& m = r.matrix();
    return {2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

namespace states {

PureState plus() { return PureState::normalized(ComplexVector{{1.0, 1.0}}); }
PureState minus() { return PureState::normalized(ComplexVector{{1.0, -1.0}}); }
PureState plus_i() { return PureState::normalized(ComplexVector{{cplx(1.0), cplx(0.0, 1.0)}}); }

PureState max_entangled(Eigen::Index dim) {
    ComplexVector v = ComplexVector::Zero(dim * dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k * dim + k) = 1.0;
    return PureState::normalized(v);
}

PureState singlet() { return PureState::normalized(ComplexVector{{0.0, 1.0, -1.0, 0.0}}); }

Ensemble gisin_z() { return Ensemble({{0.5, PureState::basis(2, 0)}, {0.5, PureState::basis(2, 1)}}); }
Ensemble gisin_x() { return Ensemble({{0.5, plus()}, {0.5, minus()}}); }

}  // namespace states

}  // namespace qdata
