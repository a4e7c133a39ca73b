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

#include <cstdint>
#include <memory>
#include <vector>

#include "qdata/boxes.hpp"
#include "qdata/kernels.hpp"
#include "qdata/linalg.hpp"
#include "qdata/rng.hpp"
#include "qdata/states.hpp"

namespace qdata {

/// Tomographically complete list of measurement settings, with the
/// least-squares inversion of its design matrix precomputed.
class MeasurementSet {
 public:
    /// Throws InvalidInput unless the effects span the operator space.
    explicit MeasurementSet(std::vector<Povm> settings);
    /// Product Pauli bases: 3^k settings of 2^k outcomes on k qubits.
    static MeasurementSet pauli(unsigned qubits);

    Eigen::Index dim() const noexcept { return settings_.front().dim(); }
    const std::vector<Povm>& settings() const noexcept { return settings_; }
    std::size_t size() const noexcept { return settings_.size(); }
    /// Maps stacked outcome frequencies to vec(rho) (column-major).
    const ComplexMatrix& inverse() const noexcept { return *inverse_; }

 private:
    std::vector<Povm> settings_;
    std::shared_ptr<const ComplexMatrix> inverse_;
};

enum class Estimator {
    LinearInversionProject,     // linear inversion, then nearest density matrix
    DirectInversionDiagnostic,  // raw linear inversion, no projection
};

class TomographyRun {
 public:
    TomographyRun(MeasurementSet set, std::uint64_t shots_per_setting,
                  Estimator estimator = Estimator::LinearInversionProject, Exec exec = default_exec());
    /// Splits `total_shots` evenly; the remainder goes to the earliest settings.
    static TomographyRun with_total_shots(MeasurementSet set, std::uint64_t total_shots,
                                          Estimator estimator = Estimator::LinearInversionProject);

    const MeasurementSet& measurements() const noexcept { return set_; }
    const std::vector<std::uint64_t>& shots() const noexcept { return shots_; }
    std::uint64_t shots_per_setting() const noexcept { return shots_.front(); }
    std::uint64_t total_shots() const;
    Estimator estimator() const noexcept { return estimator_; }
    const Exec& exec() const noexcept { return exec_; }
    /// Same settings and shots on another measurement set (e.g. two-qubit).
    TomographyRun with_measurements(MeasurementSet set) const;

 private:
    MeasurementSet set_;
    std::vector<std::uint64_t> shots_;
    Estimator estimator_;
    Exec exec_;
};

/// Outcome counts per (setting, outcome).
struct MeasurementRecord {
    std::vector<std::vector<std::uint64_t>> counts;

    struct Row {
        std::size_t setting;
        std::size_t outcome;
        std::uint64_t count;
    };
    /// Flat table export (setting id, outcome id, count).
    std::vector<Row> rows() const;
    std::uint64_t total() const;
};

/// Something that yields measurement outcomes for a fixed unknown state.
class OutcomeSource {
 public:
    virtual ~OutcomeSource() = default;
    virtual Eigen::Index dim() const = 0;
    virtual std::vector<std::uint64_t> sample(const Povm& povm, std::uint64_t shots, RngStream& rng,
                                              const Exec& exec) const = 0;
};

/// Born-rule sampling from a known density matrix.
class DensitySource final : public OutcomeSource {
 public:
    explicit DensitySource(DensityMatrix rho) : rho_(std::move(rho)) {}
    Eigen::Index dim() const override { return rho_.dim(); }
    std::vector<std::uint64_t> sample(const Povm& povm, std::uint64_t shots, RngStream& rng,
                                      const Exec& exec) const override;

 private:
    DensityMatrix rho_;
};

MeasurementRecord collect(const OutcomeSource& source, const TomographyRun& run, RngStream& rng);
/// Least-squares linear inversion of empirical frequencies (Hermitian part).
HermitianOperator linear_inversion(const MeasurementRecord& record, const TomographyRun& run);
DensityMatrix state_tomography(const OutcomeSource& source, const TomographyRun& run, RngStream& rng);
/// Estimate per the run's estimator (raw operator for the diagnostic one).
HermitianOperator estimate_state(const MeasurementRecord& record, const TomographyRun& run);

// ---------------------------------------------------------------------------
// Process tomography

struct ProbeBasis {
    std::vector<PureState> states;
    double delta;
};

/// {|0>,|1>,|+>,|+i>} rotated by exp(-i delta sigma_y / 2); m = 4 is the
/// tensor square of the rotated qubit set.
ProbeBasis canonical_probe_basis(Eigen::Index m, double delta);
/// Rows vec(|psi_k><psi_k|)^T; square and invertible for a valid basis.
ComplexMatrix probe_design_matrix(const ProbeBasis& basis);
double condition_number(const ComplexMatrix& m);

/// Coefficients c with |i><j| = sum_k c_k |psi_k><psi_k|, one row per
/// operator unit (i, j) at row i*m + j.
ComplexMatrix operator_unit_coefficients(const ProbeBasis& basis);

struct ReconstructedProcess {
    HermitianOperator choi;  // unnormalized, input factor first
    Eigen::Index dim_in;
    Eigen::Index dim_out;
    std::uint64_t shots;
    /// Distance from the CPTP set before any projection: negative Choi
    /// eigenvalue mass plus trace norm of (Tr_out C - I).
    double cptp_residual;

    /// Nearest density matrix to C / dim_in.
    DensityMatrix normalized_choi() const;
};

/// Raw Choi from per-probe output estimates (no CPTP projection).
ReconstructedProcess assemble_process(const ProbeBasis& basis, const std::vector<HermitianOperator>& outputs,
                                      std::uint64_t shots);
double cptp_residual(const HermitianOperator& choi, Eigen::Index dim_in, Eigen::Index dim_out);

ReconstructedProcess process_tomography_direct(const BoxModel& b, const ClassicalParams& p,
                                               const ProbeBasis& basis, const TomographyRun& run,
                                               RngStream& rng);
/// Ancilla-assisted scheme for qubit boxes: one maximally entangled probe,
/// joint tomography of (box output, reference).
ReconstructedProcess process_tomography_ancilla(const BoxModel& b, const ClassicalParams& p,
                                                const TomographyRun& run, RngStream& rng);
/// Infinite-shot Choi seen by the ancilla scheme.
ComplexMatrix ancilla_choi_exact(const BoxModel& b, const ClassicalParams& p);
/// Infinite-shot Choi seen by the direct scheme with `basis`.
ComplexMatrix direct_choi_exact(const BoxModel& b, const ClassicalParams& p, const ProbeBasis& basis);

/// Real dimension of Hermitian Choi matrices on m*n satisfying
/// Tr_out C = I, computed as (mn)^2 minus the rank of the constraint map.
std::size_t cptp_free_parameters(Eigen::Index dim_in, Eigen::Index dim_out);

}  // namespace qdata
