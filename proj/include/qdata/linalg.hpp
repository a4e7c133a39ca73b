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

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qdata/rng.hpp"

namespace qdata {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdFloor = 1e-10;
inline constexpr Eigen::Index kMaxDim = 64;

/// Square matrix equal to its adjoint within an absolute tolerance.
class HermitianOperator {
 public:
    /// Throws InvalidInput if `m` is not square or not Hermitian within `tol`.
    explicit HermitianOperator(ComplexMatrix m, double tol = kHermitianTol);

    /// (m + m^dagger) / 2, for operators assembled from noisy arithmetic.
    static HermitianOperator symmetrized(const ComplexMatrix& m);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }
    double trace() const { return m_.trace().real(); }

 private:
    struct Trusted {};
    HermitianOperator(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

ComplexMatrix identity(Eigen::Index dim);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on the subsystems listed in `keep` (any order; the
/// result keeps them in ascending subsystem order). Subsystem 0 is the most
/// significant index of the row-major composite basis.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Reorders tensor factors: output factor k is input factor `perm[k]`.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm);

struct EigenDecomposition {
    RealVector values;      // descending
    ComplexMatrix vectors;  // columns, unitary
};

EigenDecomposition eig_hermitian(const HermitianOperator& h);
double trace_norm(const HermitianOperator& h);

/// Applies f to the eigenvalues: V f(diag) V^dagger.
template <class F>
ComplexMatrix spectral_map(const EigenDecomposition& e, F f) {
    RealVector mapped = e.values.unaryExpr(f);
    return e.vectors * mapped.asDiagonal() * e.vectors.adjoint();
}

/// Haar unitary via Ginibre matrix + Householder QR with the phases of
/// diag(R) pulled into Q.
ComplexMatrix haar_random_unitary(Eigen::Index dim, RngStream& rng);

/// Euclidean projection of `v` onto the probability simplex.
RealVector project_to_simplex(const RealVector& v);

/// Pauli matrices and friends.
namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

/// exp(-i angle sigma_y / 2).
ComplexMatrix rotation_y(double angle);
ComplexMatrix rotation_z(double angle);

}  // namespace qdata
