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

#include "qdata/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qdata/error.hpp"

namespace qdata {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Mixed-radix digits of `index`, most significant first.
void split_index(std::size_t index, std::span<const std::size_t> dims, std::vector<std::size_t>& out) {
    out.resize(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m, double tol) {
    require(m.rows() == m.cols(), ErrorKind::InvalidInput, "HermitianOperator: matrix is not square");
    const double err = m.rows() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
    require(err <= tol, ErrorKind::InvalidInput,
            "HermitianOperator: not Hermitian (deviation " + std::to_string(err) + ")");
    m_ = std::move(m);
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
    require(m.rows() == m.cols(), ErrorKind::InvalidInput, "HermitianOperator: matrix is not square");
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    return HermitianOperator(std::move(h), Trusted{});
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::InvalidShape,
            "max_abs_diff: shape mismatch");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs_diff(a, b) <= tol;
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = Eigen::kroneckerProduct(a, b);
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
    const std::size_t total = product(dims);
    require(m.rows() == m.cols(), ErrorKind::InvalidShape, "partial_trace: matrix is not square");
    require(static_cast<std::size_t>(m.rows()) == total, ErrorKind::InvalidShape,
            "partial_trace: subsystem dimensions do not match matrix dimension");

    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        require(k < dims.size(), ErrorKind::InvalidShape, "partial_trace: subsystem index out of range");
        kept[k] = true;
    }
    std::vector<std::size_t> kept_dims;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (kept[k]) kept_dims.push_back(dims[k]);
    const std::size_t out_dim = product(kept_dims);

    // Precompute, per composite index, its kept-part index and traced-part index.
    std::vector<std::size_t> kept_idx(total), traced_idx(total), digits;
    for (std::size_t i = 0; i < total; ++i) {
        split_index(i, dims, digits);
        std::size_t ki = 0, ti = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (kept[k])
                ki = ki * dims[k] + digits[k];
            else
                ti = ti * dims[k] + digits[k];
        }
        kept_idx[i] = ki;
        traced_idx[i] = ti;
    }

    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j)
            if (traced_idx[i] == traced_idx[j])
                out(static_cast<Eigen::Index>(kept_idx[i]), static_cast<Eigen::Index>(kept_idx[j])) +=
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm) {
    const std::size_t total = product(dims);
    require(m.rows() == m.cols() && static_cast<std::size_t>(m.rows()) == total, ErrorKind::InvalidShape,
            "permute_subsystems: subsystem dimensions do not match matrix dimension");
    require(perm.size() == dims.size(), ErrorKind::InvalidShape, "permute_subsystems: bad permutation");

    std::vector<std::size_t> new_dims(dims.size());
    for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];

    // map[i] = index in the permuted basis of old composite index i
    std::vector<std::size_t> map(total), digits;
    for (std::size_t i = 0; i < total; ++i) {
        split_index(i, dims, digits);
        std::size_t ni = 0;
        for (std::size_t k = 0; k < perm.size(); ++k) ni = ni * new_dims[k] + digits[perm[k]];
        map[i] = ni;
    }
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j)
            out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

EigenDecomposition eig_hermitian(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    require(solver.info() == Eigen::Success, ErrorKind::InvalidInput, "eig_hermitian: solver failed");
    const Eigen::Index n = h.dim();
    EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
    // Eigen returns ascending order.
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = solver.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return out;
}

double trace_norm(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

ComplexMatrix haar_random_unitary(Eigen::Index dim, RngStream& rng) {
    require(dim >= 1, ErrorKind::InvalidShape, "haar_random_unitary: dim must be >= 1");
    ComplexMatrix g(dim, dim);
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = rng.complex_normal();
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const cplx d = r(k, k);
        const double a = std::abs(d);
        q.col(k) *= (a > 0.0 ? d / a : cplx(1.0));
    }
    return q;
}

RealVector project_to_simplex(const RealVector& v) {
    const Eigen::Index n = v.size();
    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double running = 0.0;
    double shift = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        running += sorted[static_cast<std::size_t>(k)];
        const double candidate = (running - 1.0) / static_cast<double>(k + 1);
        if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) shift = candidate;
    }
    return (v.array() - shift).max(0.0).matrix();
}

namespace pauli {
ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix X() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
ComplexMatrix Y() {
    ComplexMatrix m(2, 2);
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return m;
}
ComplexMatrix Z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
}  // namespace pauli

ComplexMatrix rotation_y(double angle) {
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    ComplexMatrix m(2, 2);
    m << c, -s, s, c;
    return m;
}

ComplexMatrix rotation_z(double angle) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -angle / 2.0);
    m(1, 1) = std::polar(1.0, angle / 2.0);
    return m;
}

}  // namespace qdata
