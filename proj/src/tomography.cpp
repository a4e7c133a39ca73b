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

#include "qdata/tomography.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <string>

#include "qdata/error.hpp"

namespace qdata {

namespace {

std::size_t sz(Eigen::Index i) { return static_cast<std::size_t>(i); }

ComplexMatrix qubit_basis(int axis) {
    ComplexMatrix b(2, 2);
    switch (axis) {
        case 0: b.col(0) = states::plus().amplitudes(); b.col(1) = states::minus().amplitudes(); break;
        case 1:
            b.col(0) = states::plus_i().amplitudes();
            b.col(1) = PureState::normalized(ComplexVector{{cplx(1.0), cplx(0.0, -1.0)}}).amplitudes();
            break;
        default: b = identity(2); break;
    }
    return b;
}

// Real coordinates of a Hermitian matrix: diagonal, then Re/Im of the
// strict upper triangle.
RealVector hermitian_coords(const ComplexMatrix& h) {
    const Eigen::Index d = h.rows();
    RealVector v(d * d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) v(k++) = h(i, i).real();
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            v(k++) = h(i, j).real();
            v(k++) = h(i, j).imag();
        }
    return v;
}

std::vector<HermitianOperator> probe_outputs(const BoxModel& b, const ClassicalParams& p, const ProbeBasis& basis) {
    std::vector<HermitianOperator> out;
    for (const auto& psi : basis.states) out.push_back(output_density(b, psi, p).op());
    return out;
}

// rho on (box out, reference) -> unnormalized Choi on (input, output).
ComplexMatrix choi_from_joint(const ComplexMatrix& rho, Eigen::Index dim_in, Eigen::Index dim_out) {
    const std::size_t dims[] = {sz(dim_out), sz(dim_in)};
    const std::size_t perm[] = {1, 0};
    return static_cast<double>(dim_in) * permute_subsystems(rho, dims, perm);
}

}  // namespace

MeasurementSet::MeasurementSet(std::vector<Povm> settings) : settings_(std::move(settings)) {
    require(!settings_.empty(), ErrorKind::InvalidInput, "MeasurementSet: no settings");
    const Eigen::Index d = settings_.front().dim();
    Eigen::Index rows = 0;
    for (const auto& s : settings_) {
        require(s.dim() == d, ErrorKind::InvalidShape, "MeasurementSet: settings differ in dimension");
        rows += static_cast<Eigen::Index>(s.size());
    }
    // p = Tr(E rho) = sum_ij E(j,i) rho(i,j); rho vectorized column-major.
    ComplexMatrix design(rows, d * d);
    Eigen::Index r = 0;
    for (const auto& s : settings_)
        for (const auto& e : s.effects()) {
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j) design(r, i + j * d) = e.matrix()(j, i);
            ++r;
        }
    Eigen::JacobiSVD<ComplexMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const double tol = 1e-10 * sv(0);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > tol) ++rank;
    require(rank == d * d, ErrorKind::InvalidInput,
            "MeasurementSet: not tomographically complete (rank " + std::to_string(rank) + ")");
    RealVector inv_sv = sv.unaryExpr([tol](double x) { return x > tol ? 1.0 / x : 0.0; });
    inverse_ = std::make_shared<const ComplexMatrix>(svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint());
}

MeasurementSet MeasurementSet::pauli(unsigned qubits) {
    require(qubits >= 1 && qubits <= 3, ErrorKind::InvalidShape, "MeasurementSet::pauli: 1 to 3 qubits");
    std::size_t n_settings = 1;
    for (unsigned q = 0; q < qubits; ++q) n_settings *= 3;
    std::vector<Povm> settings;
    for (std::size_t s = 0; s < n_settings; ++s) {
        // Base-3 digits of s, first qubit most significant; 0=X, 1=Y, 2=Z.
        std::vector<int> axes(qubits);
        std::size_t rest = s;
        for (unsigned q = qubits; q-- > 0;) {
            axes[q] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        ComplexMatrix cols = qubit_basis(axes[0]);
        for (unsigned q = 1; q < qubits; ++q) cols = kron(cols, qubit_basis(axes[q]));
        settings.push_back(Povm::projective(cols));
    }
    return MeasurementSet(std::move(settings));
}

TomographyRun::TomographyRun(MeasurementSet set, std::uint64_t shots_per_setting, Estimator estimator, Exec exec)
    : set_(std::move(set)), shots_(set_.size(), shots_per_setting), estimator_(estimator), exec_(exec) {
    require(shots_per_setting > 0, ErrorKind::InvalidInput, "TomographyRun: zero shots");
}

TomographyRun TomographyRun::with_total_shots(MeasurementSet set, std::uint64_t total_shots, Estimator estimator) {
    const std::uint64_t k = set.size();
    require(total_shots >= k, ErrorKind::InvalidInput, "TomographyRun: fewer shots than settings");
    TomographyRun run(std::move(set), total_shots / k, estimator);
    for (std::uint64_t s = 0; s < total_shots % k; ++s) ++run.shots_[s];
    return run;
}

std::uint64_t TomographyRun::total_shots() const { return std::accumulate(shots_.begin(), shots_.end(), std::uint64_t{0}); }

TomographyRun TomographyRun::with_measurements(MeasurementSet set) const {
    return TomographyRun(std::move(set), shots_per_setting(), estimator_, exec_);
}

std::vector<MeasurementRecord::Row> MeasurementRecord::rows() const {
    std::vector<Row> out;
    for (std::size_t s = 0; s < counts.size(); ++s)
        for (std::size_t o = 0; o < counts[s].size(); ++o) out.push_back({s, o, counts[s][o]});
    return out;
}

std::uint64_t MeasurementRecord::total() const {
    std::uint64_t t = 0;
    for (const auto& c : counts) t = std::accumulate(c.begin(), c.end(), t);
    return t;
}

std::vector<std::uint64_t> DensitySource::sample(const Povm& povm, std::uint64_t shots, RngStream& rng,
                                                 const Exec& exec) const {
    return sample_counts(born_probabilities(rho_, povm), shots, rng, exec);
}

MeasurementRecord collect(const OutcomeSource& source, const TomographyRun& run, RngStream& rng) {
    require(source.dim() == run.measurements().dim(), ErrorKind::InvalidShape,
            "state_tomography: source dimension does not match the measurement set");
    const RngStream root = rng.fork();
    MeasurementRecord record;
    const auto& settings = run.measurements().settings();
    for (std::size_t s = 0; s < settings.size(); ++s) {
        RngStream stream = root.child(s);
        record.counts.push_back(source.sample(settings[s], run.shots()[s], stream, run.exec()));
    }
    return record;
}

HermitianOperator linear_inversion(const MeasurementRecord& record, const TomographyRun& run) {
    const auto& set = run.measurements();
    require(record.counts.size() == set.size(), ErrorKind::InvalidShape, "linear_inversion: record/settings mismatch");
    const Eigen::Index d = set.dim();
    ComplexVector freq(set.inverse().cols());
    Eigen::Index r = 0;
    for (std::size_t s = 0; s < set.size(); ++s) {
        std::uint64_t n = 0;
        for (auto c : record.counts[s]) n += c;
        require(n > 0, ErrorKind::InvalidInput, "linear_inversion: setting with zero shots");
        for (auto c : record.counts[s]) freq(r++) = static_cast<double>(c) / static_cast<double>(n);
    }
    const ComplexVector v = set.inverse() * freq;
    ComplexMatrix rho(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) rho(i, j) = v(i + j * d);
    return HermitianOperator::symmetrized(rho);
}

HermitianOperator estimate_state(const MeasurementRecord& record, const TomographyRun& run) {
    HermitianOperator raw = linear_inversion(record, run);
    if (run.estimator() == Estimator::DirectInversionDiagnostic) return raw;
    return nearest_density_matrix(raw).op();
}

DensityMatrix state_tomography(const OutcomeSource& source, const TomographyRun& run, RngStream& rng) {
    return nearest_density_matrix(linear_inversion(collect(source, run, rng), run));
}

// ---------------------------------------------------------------------------

ProbeBasis canonical_probe_basis(Eigen::Index m, double delta) {
    require(m == 2 || m == 4, ErrorKind::InvalidShape, "canonical_probe_basis: m must be 2 or 4");
    const ComplexMatrix u = rotation_y(delta);
    const std::vector<PureState> canonical = {PureState::basis(2, 0), PureState::basis(2, 1), states::plus(),
                                              states::plus_i()};
    std::vector<PureState> qubit;
    for (const auto& s : canonical) qubit.push_back(PureState::normalized(u * s.amplitudes()));
    if (m == 2) return {qubit, delta};
    std::vector<PureState> pairs;
    for (const auto& a : qubit)
        for (const auto& b : qubit) pairs.push_back(PureState::normalized(kron(a.amplitudes(), b.amplitudes())));
    return {pairs, delta};
}

ComplexMatrix probe_design_matrix(const ProbeBasis& basis) {
    const Eigen::Index m = basis.states.front().dim();
    const auto k = static_cast<Eigen::Index>(basis.states.size());
    ComplexMatrix d(k, m * m);
    for (Eigen::Index r = 0; r < k; ++r) {
        const ComplexMatrix p = basis.states[sz(r)].projector();
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) d(r, i * m + j) = p(i, j);
    }
    return d;
}

double condition_number(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const RealVector& sv = svd.singularValues();
    return sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
}

ComplexMatrix operator_unit_coefficients(const ProbeBasis& basis) {
    const ComplexMatrix d = probe_design_matrix(basis);
    const Eigen::Index m = basis.states.front().dim();
    require(d.rows() == m * m, ErrorKind::InvalidInput, "probe basis must contain dim_in^2 states");
    Eigen::FullPivLU<ComplexMatrix> lu(d.transpose());
    require(lu.isInvertible() && condition_number(d) < 1e8, ErrorKind::InvalidInput,
            "probe basis: singular design matrix");
    // Column (i*m+j) of (D^T)^{-1} holds the coefficients of |i><j|.
    return lu.inverse().transpose();
}

double cptp_residual(const HermitianOperator& choi, Eigen::Index dim_in, Eigen::Index dim_out) {
    const auto e = eig_hermitian(choi);
    double negative = 0.0;
    for (Eigen::Index k = 0; k < e.values.size(); ++k) negative += std::max(-e.values(k), 0.0);
    return negative + trace_preservation_defect(choi.matrix(), dim_in, dim_out);
}

DensityMatrix ReconstructedProcess::normalized_choi() const {
    return nearest_density_matrix(HermitianOperator::symmetrized(choi.matrix() / static_cast<double>(dim_in)));
}

ReconstructedProcess assemble_process(const ProbeBasis& basis, const std::vector<HermitianOperator>& outputs,
                                      std::uint64_t shots) {
    require(outputs.size() == basis.states.size(), ErrorKind::InvalidShape, "assemble_process: output count mismatch");
    const Eigen::Index m = basis.states.front().dim();
    const Eigen::Index n = outputs.front().dim();
    const ComplexMatrix coeff = operator_unit_coefficients(basis);
    ComplexMatrix choi = ComplexMatrix::Zero(m * n, m * n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            for (std::size_t k = 0; k < outputs.size(); ++k)
                choi.block(i * n, j * n, n, n) += coeff(i * m + j, static_cast<Eigen::Index>(k)) * outputs[k].matrix();
    auto h = HermitianOperator::symmetrized(choi);
    const double residual = cptp_residual(h, m, n);
    return {std::move(h), m, n, shots, residual};
}

ReconstructedProcess process_tomography_direct(const BoxModel& b, const ClassicalParams& p, const ProbeBasis& basis,
                                               const TomographyRun& run, RngStream& rng) {
    require(static_cast<Eigen::Index>(basis.states.size()) == b.dim_in() * b.dim_in(), ErrorKind::InvalidInput,
            "process_tomography_direct: probe basis size must be dim_in^2");
    require(run.measurements().dim() == b.dim_out(), ErrorKind::InvalidShape,
            "process_tomography_direct: measurement set does not match box output");
    const RngStream root = rng.fork();
    const auto exact = probe_outputs(b, p, basis);
    std::vector<HermitianOperator> estimates;
    for (std::size_t k = 0; k < exact.size(); ++k) {
        RngStream stream = root.child(k);
        const DensitySource source{DensityMatrix(exact[k].matrix())};
        estimates.push_back(estimate_state(collect(source, run, stream), run));
    }
    return assemble_process(basis, estimates, run.total_shots() * exact.size());
}

ReconstructedProcess process_tomography_ancilla(const BoxModel& b, const ClassicalParams& p, const TomographyRun& run,
                                                RngStream& rng) {
    require(b.dim_in() == 2 && b.dim_out() == 2, ErrorKind::InvalidShape,
            "process_tomography_ancilla: qubit boxes only");
    const TomographyRun joint_run = run.with_measurements(MeasurementSet::pauli(2));
    const DensitySource source(probe_with_reference(b, states::max_entangled(2), p));
    const HermitianOperator rho = estimate_state(collect(source, joint_run, rng), joint_run);
    auto choi = HermitianOperator::symmetrized(choi_from_joint(rho.matrix(), b.dim_in(), b.dim_out()));
    const double residual = cptp_residual(choi, b.dim_in(), b.dim_out());
    return {std::move(choi), b.dim_in(), b.dim_out(), joint_run.total_shots(), residual};
}

ComplexMatrix ancilla_choi_exact(const BoxModel& b, const ClassicalParams& p) {
    const auto m = b.dim_in();
    const DensityMatrix out = probe_with_reference(b, states::max_entangled(m), p);
    return choi_from_joint(out.matrix(), m, b.dim_out());
}

ComplexMatrix direct_choi_exact(const BoxModel& b, const ClassicalParams& p, const ProbeBasis& basis) {
    return assemble_process(basis, probe_outputs(b, p, basis), 0).choi.matrix();
}

std::size_t cptp_free_parameters(Eigen::Index dim_in, Eigen::Index dim_out) {
    const Eigen::Index d = dim_in * dim_out;
    const std::size_t dims[] = {sz(dim_in), sz(dim_out)};
    const std::size_t keep[] = {0};
    // Columns: image of each real basis element of Hermitian(d) under
    // C -> Tr_out C, in real coordinates of Hermitian(dim_in).
    Eigen::MatrixXd constraint(dim_in * dim_in, d * d);
    Eigen::Index col = 0;
    auto push = [&](const ComplexMatrix& h) {
        constraint.col(col++) = hermitian_coords(partial_trace(h, dims, keep));
    };
    for (Eigen::Index i = 0; i < d; ++i) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        e(i, i) = 1.0;
        push(e);
    }
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            ComplexMatrix sym = ComplexMatrix::Zero(d, d), asym = ComplexMatrix::Zero(d, d);
            sym(i, j) = sym(j, i) = 1.0;
            asym(i, j) = cplx(0.0, -1.0);
            asym(j, i) = cplx(0.0, 1.0);
            push(sym);
            push(asym);
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > 1e-10) ++rank;
    return static_cast<std::size_t>(d * d - rank);
}

}  // namespace qdata
