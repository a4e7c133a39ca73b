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

#include <gtest/gtest.h>

#include <array>

#include "qdata/error.hpp"
#include "qdata/linalg.hpp"
#include "qdata/states.hpp"

namespace qdata {
namespace {

ComplexMatrix random_matrix(Eigen::Index n, RngStream& rng) {
    ComplexMatrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = rng.complex_normal();
    return m;
}

TEST(Hermitian, RejectsNonHermitian) {
    ComplexMatrix m = pauli::X();
    m(0, 1) += 1e-6;
    EXPECT_THROW(HermitianOperator{m}, Error);
    EXPECT_THROW(HermitianOperator{ComplexMatrix::Zero(2, 3)}, Error);
    EXPECT_NO_THROW(HermitianOperator{pauli::Y()});
}

TEST(Hermitian, SymmetrizedIsExactlyHermitian) {
    RngStream rng(3, 0);
    const auto h = HermitianOperator::symmetrized(random_matrix(4, rng));
    EXPECT_EQ(max_abs_diff(h.matrix(), h.matrix().adjoint()), 0.0);
}

TEST(Kron, DimensionsAndBlocks) {
    const ComplexMatrix k = kron(pauli::X(), pauli::Z());
    ASSERT_EQ(k.rows(), 4);
    EXPECT_EQ(k(0, 2), cplx(1.0));
    EXPECT_EQ(k(1, 3), cplx(-1.0));
    EXPECT_EQ(k(0, 0), cplx(0.0));
}

TEST(PartialTrace, ProductStateFactors) {
    RngStream rng(5, 0);
    const auto a = random_density_matrix(2, 2, rng);
    const auto b = random_density_matrix(3, 3, rng);
    const ComplexMatrix ab = kron(a.matrix(), b.matrix());
    const std::array<std::size_t, 2> dims{2, 3};
    const std::array<std::size_t, 1> keep0{0}, keep1{1};
    EXPECT_LT(max_abs_diff(partial_trace(ab, dims, keep0), a.matrix()), 1e-14);
    EXPECT_LT(max_abs_diff(partial_trace(ab, dims, keep1), b.matrix()), 1e-14);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
    const ComplexMatrix bell = states::max_entangled(2).projector();
    const std::array<std::size_t, 2> dims{2, 2};
    const std::array<std::size_t, 1> keep{1};
    EXPECT_LT(max_abs_diff(partial_trace(bell, dims, keep), identity(2) / 2.0), 1e-15);
}

TEST(Permute, SwapsFactors) {
    const std::array<std::size_t, 2> dims{2, 3}, perm{1, 0};
    RngStream rng(8, 0);
    const ComplexMatrix a = random_matrix(2, rng), b = random_matrix(3, rng);
    EXPECT_LT(max_abs_diff(permute_subsystems(kron(a, b), dims, perm), kron(b, a)), 1e-14);
}

TEST(Eigen, DescendingAndReconstructs) {
    RngStream rng(9, 0);
    const auto h = HermitianOperator::symmetrized(random_matrix(5, rng));
    const auto e = eig_hermitian(h);
    for (Eigen::Index i = 1; i < 5; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
    EXPECT_LT(max_abs_diff(spectral_map(e, [](double x) { return x; }), h.matrix()), 1e-12);
}

TEST(TraceNorm, Paulis) {
    EXPECT_NEAR(trace_norm(HermitianOperator(pauli::Z())), 2.0, 1e-14);
    EXPECT_NEAR(trace_norm(HermitianOperator(pauli::Y())), 2.0, 1e-14);
    EXPECT_NEAR(trace_norm(HermitianOperator(identity(3))), 3.0, 1e-14);
}

TEST(Haar, UnitaryAndSeeded) {
    RngStream a(11, 0), b(11, 0);
    const ComplexMatrix u = haar_random_unitary(4, a);
    EXPECT_LT(max_abs_diff(u.adjoint() * u, identity(4)), 1e-13);
    EXPECT_EQ(max_abs_diff(u, haar_random_unitary(4, b)), 0.0);
}

TEST(Simplex, Projection) {
    const RealVector v = (RealVector(4) << 0.6, 0.5, -0.05, -0.05).finished();
    const RealVector p = project_to_simplex(v);
    EXPECT_NEAR(p.sum(), 1.0, 1e-15);
    EXPECT_NEAR(p(0), 0.55, 1e-15);
    EXPECT_NEAR(p(1), 0.45, 1e-15);
    EXPECT_EQ(p(2), 0.0);
}

TEST(Rotations, YRotationMovesZTowardX) {
    const PureState s(rotation_y(std::numbers::pi / 2) * PureState::basis(2, 0).amplitudes());
    const auto r = bloch_vector(DensityMatrix(s));
    EXPECT_NEAR(r.x(), 1.0, 1e-15);
    EXPECT_NEAR(r.z(), 0.0, 1e-15);
}

// ---------------------------------------------------------------------------

TEST(PureState, NormCheck) {
    EXPECT_THROW(PureState(ComplexVector::Ones(2)), Error);
    EXPECT_NO_THROW(PureState::normalized(ComplexVector::Ones(2)));
    EXPECT_THROW(PureState::normalized(ComplexVector::Zero(2)), Error);
    EXPECT_THROW(PureState::basis(kMaxDim + 1, 0), Error);
}

TEST(PureState, BlochAngles) {
    const auto r = bloch_vector(DensityMatrix(PureState::bloch(std::numbers::pi / 3, std::numbers::pi / 2)));
    EXPECT_NEAR(r.x(), 0.0, 1e-15);
    EXPECT_NEAR(r.y(), std::sin(std::numbers::pi / 3), 1e-15);
    EXPECT_NEAR(r.z(), 0.5, 1e-15);
}

TEST(DensityMatrix, Validation) {
    EXPECT_THROW(DensityMatrix(identity(2)), Error);               // trace 2
    EXPECT_THROW(DensityMatrix(ComplexMatrix(pauli::Z())), Error);  // trace 0
    ComplexMatrix neg = identity(2) / 2.0;
    neg(0, 0) = 1.1;
    neg(1, 1) = -0.1;
    EXPECT_THROW(DensityMatrix{neg}, Error);
    ComplexMatrix noisy = identity(2) / 2.0;
    noisy(0, 1) = cplx(0.0, 1e-11);
    EXPECT_NO_THROW(DensityMatrix{noisy});
}

TEST(DensityMatrix, Purity) {
    EXPECT_NEAR(DensityMatrix(states::plus()).purity(), 1.0, 1e-15);
    EXPECT_NEAR(DensityMatrix::maximally_mixed(4).purity(), 0.25, 1e-15);
}

TEST(Metrics, TraceDistanceAndFidelity) {
    const DensityMatrix zero(PureState::basis(2, 0)), one(PureState::basis(2, 1)), plus(states::plus());
    EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-15);
    EXPECT_NEAR(trace_distance(zero, plus), std::sqrt(0.5), 1e-14);
    EXPECT_NEAR(uhlmann_fidelity(zero, plus), 0.5, 1e-12);
    EXPECT_NEAR(uhlmann_fidelity(zero, one), 0.0, 1e-12);
    EXPECT_NEAR(uhlmann_fidelity(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)), 1.0, 1e-12);
}

TEST(Metrics, FidelityMixedClosedForm) {
    // Commuting qubit states: F = (sum sqrt(p_i q_i))^2.
    ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 0.8;
    a(1, 1) = 0.2;
    b(0, 0) = 0.3;
    b(1, 1) = 0.7;
    const double expect = std::pow(std::sqrt(0.24) + std::sqrt(0.14), 2);
    EXPECT_NEAR(uhlmann_fidelity(DensityMatrix(a), DensityMatrix(b)), expect, 1e-12);
}

TEST(NearestDensity, ProjectsNegativeEigenvalue) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.2;
    m(1, 1) = -0.2;
    const auto rho = nearest_density_matrix(HermitianOperator(m));
    EXPECT_NEAR(rho.matrix()(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(rho.matrix()(1, 1).real(), 0.0, 1e-15);
    EXPECT_THROW(nearest_density_matrix(HermitianOperator(identity(2) * 3.0)), Error);
}

TEST(Povm, ValidatesCompleteness) {
    EXPECT_THROW(Povm({HermitianOperator(identity(2) / 2.0)}), Error);
    const Povm z = Povm::projective(identity(2));
    const auto probs = born_probabilities(DensityMatrix(states::plus()), z);
    EXPECT_NEAR(probs[0], 0.5, 1e-15);
    EXPECT_NEAR(probs[1], 0.5, 1e-15);
}

TEST(Ensemble, GisinPairsShareDensity) {
    const auto z = states::gisin_z().density(), x = states::gisin_x().density();
    EXPECT_LT(max_abs_diff(z.matrix(), x.matrix()), 1e-15);
    EXPECT_THROW(Ensemble({{0.6, states::plus()}, {0.6, states::minus()}}), Error);
}

TEST(Sampling, FrequenciesMatchBorn) {
    RngStream rng(21, 0);
    const std::vector<double> p{0.2, 0.0, 0.5, 0.3};
    std::array<int, 4> hits{};
    const int n = 200000;
    for (int i = 0; i < n; ++i) ++hits[sample_index(p, rng)];
    EXPECT_EQ(hits[1], 0);
    for (int k : {0, 2, 3}) EXPECT_NEAR(hits[k] / double(n), p[k], 4 * std::sqrt(p[k] * (1 - p[k]) / n));
}

TEST(Random, DensityMatrixFullRank) {
    RngStream rng(12, 0);
    const auto rho = random_density_matrix(3, 3, rng);
    EXPECT_GT(eig_hermitian(rho.op()).values(2), 1e-6);
    const auto pure = random_density_matrix(3, 1, rng);
    EXPECT_NEAR(pure.purity(), 1.0, 1e-12);
}

TEST(States, Singlet) {
    const auto s = states::singlet().amplitudes();
    EXPECT_NEAR(std::abs(s(1) + s(2)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s(1)), std::sqrt(0.5), 1e-15);
}

}  // namespace
}  // namespace qdata
