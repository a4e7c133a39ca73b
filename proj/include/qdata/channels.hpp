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

#include <vector>

#include "qdata/linalg.hpp"
#include "qdata/rng.hpp"
#include "qdata/states.hpp"

namespace qdata {

/// CPTP map stored as its unnormalized Choi matrix
///   C = sum_ij |i><j| (x) E(|i><j|),
/// input factor first, so Tr C = dim_in and Tr_out C = I_in.
class QuantumChannel {
 public:
    /// Throws InvalidChannel unless C is PSD (floor -1e-10) and trace
    /// preserving within 1e-9.
    QuantumChannel(Eigen::Index dim_in, Eigen::Index dim_out, const ComplexMatrix& choi);

    Eigen::Index dim_in() const noexcept { return dim_in_; }
    Eigen::Index dim_out() const noexcept { return dim_out_; }
    const HermitianOperator& choi() const noexcept { return choi_; }
    /// C / dim_in as a density matrix on in (x) out.
    DensityMatrix normalized_choi() const;

    /// Action on an arbitrary (not necessarily positive) operator.
    ComplexMatrix apply(const ComplexMatrix& x) const;

 private:
    Eigen::Index dim_in_;
    Eigen::Index dim_out_;
    HermitianOperator choi_;
};

/// E(X) from a Choi matrix with the input-first convention above.
ComplexMatrix apply_choi(const ComplexMatrix& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                         const ComplexMatrix& x);

/// Tr_out C - I_in in trace norm; zero for trace-preserving maps.
double trace_preservation_defect(const ComplexMatrix& choi, Eigen::Index dim_in, Eigen::Index dim_out);

DensityMatrix apply_channel(const QuantumChannel& c, const DensityMatrix& r);
QuantumChannel choi_from_kraus(const std::vector<ComplexMatrix>& kraus);
/// Canonical Kraus set from the Choi eigendecomposition (eigenvalues below
/// 1e-10 dropped), ordered by descending weight.
std::vector<ComplexMatrix> kraus_from_choi(const QuantumChannel& c);

/// Channel from a Haar Stinespring isometry: first dim_in columns of a Haar
/// unitary on dim_out*env_dim, environment traced out.
QuantumChannel random_channel(Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index env_dim, RngStream& rng);
/// env_dim = dim_in * dim_out (generic full-rank channels).
QuantumChannel random_channel(Eigen::Index dim_in, Eigen::Index dim_out, RngStream& rng);

/// A (x) B, with A's factors before B's on both input and output.
QuantumChannel tensor_channel(const QuantumChannel& a, const QuantumChannel& b);
/// second o first.
QuantumChannel compose_channels(const QuantumChannel& first, const QuantumChannel& second);

namespace channels {
QuantumChannel identity(Eigen::Index dim);
QuantumChannel unitary(const ComplexMatrix& u);
/// rho -> (1-p) rho + p Tr(rho) I/d.
QuantumChannel depolarizing(Eigen::Index dim, double p);
QuantumChannel amplitude_damping(double gamma);
/// Kraus {sqrt(1-p) I, sqrt(p) Z}.
QuantumChannel dephasing(double p);
QuantumChannel swap(Eigen::Index dim);
/// |x><x| -> |prepared_x><prepared_x| for each computational basis x.
QuantumChannel measure_prepare(const std::vector<PureState>& prepared);
/// Discards the input and prepares `state`.
QuantumChannel replace(Eigen::Index dim_in, const DensityMatrix& state);
}  // namespace channels

}  // namespace qdata
