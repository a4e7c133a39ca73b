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

#include "qdata/channels.hpp"

#include <cmath>
#include <string>

#include "qdata/error.hpp"

namespace qdata {

namespace {

constexpr double kTpTol = 1e-9;
constexpr double kKrausCompleteTol = 1e-10;
constexpr double kKrausDropTol = 1e-10;

std::size_t sz(Eigen::Index i) { return static_cast<std::size_t>(i); }

}  // namespace

QuantumChannel::QuantumChannel(Eigen::Index dim_in, Eigen::Index dim_out, const ComplexMatrix& choi)
    : dim_in_(dim_in), dim_out_(dim_out), choi_(HermitianOperator::symmetrized(choi)) {
    require(dim_in >= 1 && dim_out >= 1, ErrorKind::InvalidShape, "QuantumChannel: bad dimensions");
    require(choi.rows() == dim_in * dim_out && choi.cols() == dim_in * dim_out, ErrorKind::InvalidShape,
            "QuantumChannel: Choi shape does not match dim_in*dim_out");
    require(max_abs_diff(choi, choi.adjoint()) <= 1e-9, ErrorKind::InvalidChannel,
            "QuantumChannel: Choi matrix not Hermitian");
    const auto e = eig_hermitian(choi_);
    require(e.values(e.values.size() - 1) >= -kPsdFloor, ErrorKind::InvalidChannel,
            "QuantumChannel: not completely positive (min Choi eigenvalue " +
                std::to_string(e.values(e.values.size() - 1)) + ")");
    const double tp = trace_preservation_defect(choi_.matrix(), dim_in, dim_out);
    require(tp <= kTpTol, ErrorKind::InvalidChannel,
            "QuantumChannel: not trace preserving (defect " + std::to_string(tp) + ")");
}

DensityMatrix QuantumChannel::normalized_choi() const {
    return DensityMatrix(ComplexMatrix(choi_.matrix() / static_cast<double>(dim_in_)));
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& x) const {
    return apply_choi(choi_.matrix(), dim_in_, dim_out_, x);
}

ComplexMatrix apply_choi(const ComplexMatrix& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                         const ComplexMatrix& x) {
    require(x.rows() == dim_in && x.cols() == dim_in, ErrorKind::InvalidShape,
            "apply_channel: input dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(dim_out, dim_out);
    for (Eigen::Index i = 0; i < dim_in; ++i)
        for (Eigen::Index j = 0; j < dim_in; ++j)
            if (x(i, j) != cplx(0.0)) out += x(i, j) * choi.block(i * dim_out, j * dim_out, dim_out, dim_out);
    return out;
}

double trace_preservation_defect(const ComplexMatrix& choi, Eigen::Index dim_in, Eigen::Index dim_out) {
    const std::size_t dims[] = {sz(dim_in), sz(dim_out)};
    const std::size_t keep[] = {0};
    const ComplexMatrix reduced = partial_trace(choi, dims, keep);
    return trace_norm(HermitianOperator::symmetrized(reduced - identity(dim_in)));
}

DensityMatrix apply_channel(const QuantumChannel& c, const DensityMatrix& r) {
    require(r.dim() == c.dim_in(), ErrorKind::InvalidShape, "apply_channel: dimension mismatch");
    return DensityMatrix(c.apply(r.matrix()));
}

QuantumChannel choi_from_kraus(const std::vector<ComplexMatrix>& kraus) {
    require(!kraus.empty(), ErrorKind::InvalidChannel, "choi_from_kraus: empty Kraus set");
    const Eigen::Index n = kraus.front().rows(), m = kraus.front().cols();
    ComplexMatrix completeness = ComplexMatrix::Zero(m, m);
    for (const auto& k : kraus) {
        require(k.rows() == n && k.cols() == m, ErrorKind::InvalidShape, "choi_from_kraus: Kraus shapes differ");
        completeness += k.adjoint() * k;
    }
    require(approx_equal(completeness, identity(m), kKrausCompleteTol), ErrorKind::InvalidChannel,
            "choi_from_kraus: sum K^dagger K != I");
    ComplexMatrix choi = ComplexMatrix::Zero(m * n, m * n);
    for (const auto& k : kraus)
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) choi.block(i * n, j * n, n, n) += k.col(i) * k.col(j).adjoint();
    return QuantumChannel(m, n, choi);
}

std::vector<ComplexMatrix> kraus_from_choi(const QuantumChannel& c) {
    const Eigen::Index m = c.dim_in(), n = c.dim_out();
    const auto e = eig_hermitian(c.choi());
    std::vector<ComplexMatrix> out;
    for (Eigen::Index k = 0; k < e.values.size(); ++k) {
        const double lambda = e.values(k);
        if (lambda < kKrausDropTol) continue;
        ComplexMatrix op(n, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index a = 0; a < n; ++a) op(a, i) = std::sqrt(lambda) * e.vectors(i * n + a, k);
        out.push_back(std::move(op));
    }
    return out;
}

QuantumChannel random_channel(Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index env_dim, RngStream& rng) {
    require(env_dim >= 1, ErrorKind::InvalidShape, "random_channel: env_dim must be >= 1");
    require(dim_out * env_dim >= dim_in, ErrorKind::InvalidShape, "random_channel: dim_out*env_dim < dim_in");
    const ComplexMatrix u = haar_random_unitary(dim_out * env_dim, rng);
    // Row index of the isometry is out * env_dim + env.
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(sz(env_dim));
    for (Eigen::Index e = 0; e < env_dim; ++e) {
        ComplexMatrix k(dim_out, dim_in);
        for (Eigen::Index a = 0; a < dim_out; ++a)
            for (Eigen::Index i = 0; i < dim_in; ++i) k(a, i) = u(a * env_dim + e, i);
        kraus.push_back(std::move(k));
    }
    return choi_from_kraus(kraus);
}

QuantumChannel random_channel(Eigen::Index dim_in, Eigen::Index dim_out, RngStream& rng) {
    return random_channel(dim_in, dim_out, dim_in * dim_out, rng);
}

QuantumChannel tensor_channel(const QuantumChannel& a, const QuantumChannel& b) {
    // kron(Ca, Cb) is ordered (inA, outA, inB, outB); the product channel's
    // Choi wants (inA, inB, outA, outB).
    const std::size_t dims[] = {sz(a.dim_in()), sz(a.dim_out()), sz(b.dim_in()), sz(b.dim_out())};
    const std::size_t perm[] = {0, 2, 1, 3};
    const ComplexMatrix choi = permute_subsystems(kron(a.choi().matrix(), b.choi().matrix()), dims, perm);
    return QuantumChannel(a.dim_in() * b.dim_in(), a.dim_out() * b.dim_out(), choi);
}

QuantumChannel compose_channels(const QuantumChannel& first, const QuantumChannel& second) {
    require(first.dim_out() == second.dim_in(), ErrorKind::InvalidShape, "compose_channels: dimension mismatch");
    const Eigen::Index m = first.dim_in(), n = second.dim_out();
    ComplexMatrix choi(m * n, m * n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            ComplexMatrix unit = ComplexMatrix::Zero(m, m);
            unit(i, j) = 1.0;
            choi.block(i * n, j * n, n, n) = second.apply(first.apply(unit));
        }
    return QuantumChannel(m, n, choi);
}

namespace channels {

QuantumChannel identity(Eigen::Index dim) { return choi_from_kraus({qdata::identity(dim)}); }

QuantumChannel unitary(const ComplexMatrix& u) { return choi_from_kraus({u}); }

QuantumChannel depolarizing(Eigen::Index dim, double p) {
    require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidChannel, "depolarizing: p outside [0,1]");
    const QuantumChannel id = identity(dim);
    const ComplexMatrix full = qdata::identity(dim * dim) / static_cast<double>(dim);
    return QuantumChannel(dim, dim, (1.0 - p) * id.choi().matrix() + p * full);
}

QuantumChannel amplitude_damping(double gamma) {
    require(gamma >= 0.0 && gamma <= 1.0, ErrorKind::InvalidChannel, "amplitude_damping: gamma outside [0,1]");
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
    k1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
    return choi_from_kraus({k0, k1});
}

QuantumChannel dephasing(double p) {
    require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidChannel, "dephasing: p outside [0,1]");
    return choi_from_kraus({std::sqrt(1.0 - p) * pauli::I(), std::sqrt(p) * pauli::Z()});
}

QuantumChannel swap(Eigen::Index dim) {
    ComplexMatrix s = ComplexMatrix::Zero(dim * dim, dim * dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) s(j * dim + i, i * dim + j) = 1.0;
    return unitary(s);
}

QuantumChannel measure_prepare(const std::vector<PureState>& prepared) {
    const auto m = static_cast<Eigen::Index>(prepared.size());
    require(m >= 1, ErrorKind::InvalidChannel, "measure_prepare: no states");
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index x = 0; x < m; ++x) {
        ComplexMatrix k = ComplexMatrix::Zero(prepared.front().dim(), m);
        k.col(x) = prepared[sz(x)].amplitudes();
        kraus.push_back(std::move(k));
    }
    return choi_from_kraus(kraus);
}

QuantumChannel replace(Eigen::Index dim_in, const DensityMatrix& state) {
    return QuantumChannel(dim_in, state.dim(), kron(qdata::identity(dim_in), state.matrix()));
}

}  // namespace channels

}  // namespace qdata
