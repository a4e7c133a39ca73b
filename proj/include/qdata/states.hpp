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

#include <cstddef>
#include <utility>
#include <vector>

#include "qdata/linalg.hpp"
#include "qdata/rng.hpp"

namespace qdata {

/// Normalized state vector.
class PureState {
 public:
    /// Throws InvalidInput unless ||v|| = 1 within 1e-12.
    explicit PureState(ComplexVector v);
    /// Normalizes `v`; throws on a zero vector.
    static PureState normalized(const ComplexVector& v);
    static PureState basis(Eigen::Index dim, Eigen::Index k);
    /// Qubit cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
    static PureState bloch(double theta, double phi);

    Eigen::Index dim() const noexcept { return v_.size(); }
    const ComplexVector& amplitudes() const noexcept { return v_; }
    ComplexMatrix projector() const { return v_ * v_.adjoint(); }

 private:
    ComplexVector v_;
};

/// Unit-trace positive semidefinite Hermitian operator.
class DensityMatrix {
 public:
    /// Validates PSD (floor -1e-10) and unit trace (1e-10). Tiny
    /// anti-Hermitian noise (<= 1e-9) from upstream arithmetic is averaged
    /// away before the Hermitian check.
    explicit DensityMatrix(const ComplexMatrix& m);
    explicit DensityMatrix(const PureState& psi);
    static DensityMatrix maximally_mixed(Eigen::Index dim);

    Eigen::Index dim() const noexcept { return h_.dim(); }
    const ComplexMatrix& matrix() const noexcept { return h_.matrix(); }
    const HermitianOperator& op() const noexcept { return h_; }
    double purity() const;

 private:
    HermitianOperator h_;
};

/// Positive operator-valued measure with effects summing to identity.
class Povm {
 public:
    explicit Povm(std::vector<HermitianOperator> effects);
    static Povm projective(const ComplexMatrix& basis_columns);

    Eigen::Index dim() const noexcept { return effects_.front().dim(); }
    std::size_t size() const noexcept { return effects_.size(); }
    const std::vector<HermitianOperator>& effects() const noexcept { return effects_; }

 private:
    std::vector<HermitianOperator> effects_;
};

struct EnsembleMember {
    double probability;
    PureState state;
};

class Ensemble {
 public:
    explicit Ensemble(std::vector<EnsembleMember> members);
    const std::vector<EnsembleMember>& members() const noexcept { return members_; }
    Eigen::Index dim() const noexcept { return members_.front().state.dim(); }
    DensityMatrix density() const;

 private:
    std::vector<EnsembleMember> members_;
};

double trace_distance(const DensityMatrix& r, const DensityMatrix& s);
/// Squared Uhlmann fidelity (Tr sqrt(sqrt(r) s sqrt(r)))^2.
double uhlmann_fidelity(const DensityMatrix& r, const DensityMatrix& s);
/// Same, on raw operators; both must be PSD above the -1e-10 floor.
double uhlmann_fidelity(const HermitianOperator& r, const HermitianOperator& s);

PureState haar_random_state(Eigen::Index dim, RngStream& rng);
/// Random mixed state: partial trace of a Haar pure state on dim*env_dim.
DensityMatrix random_density_matrix(Eigen::Index dim, Eigen::Index env_dim, RngStream& rng);

/// Frobenius-closest unit-trace PSD matrix (eigenvalues projected onto the
/// probability simplex).
DensityMatrix nearest_density_matrix(const HermitianOperator& h);

std::vector<double> born_probabilities(const DensityMatrix& r, const Povm& m);
std::size_t sample_outcome(const DensityMatrix& r, const Povm& m, RngStream& rng);
/// Inverse-CDF draw from an explicit probability vector.
std::size_t sample_index(const std::vector<double>& probabilities, RngStream& rng);

/// Bloch vector (x, y, z) of a qubit density matrix.
Eigen::Vector3d bloch_vector(const DensityMatrix& r);

namespace states {
PureState plus();
PureState minus();
PureState plus_i();
/// (|00> + |11>)/sqrt(2) on dim x dim: sum_k |kk>/sqrt(dim).
PureState max_entangled(Eigen::Index dim);
PureState singlet();
Ensemble gisin_z();
Ensemble gisin_x();
}  // namespace states

}  // namespace qdata
