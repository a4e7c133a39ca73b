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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdata/boxes.hpp"
#include "qdata/kernels.hpp"
#include "qdata/tomography.hpp"

namespace qdata {

enum class Verdict { QuantumConsistent, PostQuantum, Inconclusive };

/// Upper: large statistics are anomalous. Lower: small ones are (used by
/// the NSQ survey, where a shortage of signalling dynamics is the anomaly).
enum class Tail { Upper, Lower };

std::string to_string(Verdict v);

struct TestVerdict {
    double statistic = 0.0;
    double threshold = 0.0;
    double std_error = 0.0;  // NaN when undefined
    std::uint64_t n_trials = 0;
    Verdict verdict = Verdict::Inconclusive;
    Tail tail = Tail::Upper;
};

/// 3-sigma decision rule: anomalous only if the statistic is past the
/// threshold by >= 3 std_error, quantum-consistent only if it is on the
/// other side by >= 3 std_error, inconclusive otherwise or if std_error is
/// undefined.
TestVerdict decide(double statistic, double threshold, double std_error, std::uint64_t n_trials,
                   Tail tail = Tail::Upper);

// ---------------------------------------------------------------------------
// Helstrom discrimination

class HelstromSetup {
 public:
    HelstromSetup(std::array<double, 2> priors, std::array<PureState, 2> states);
    /// Equal priors, qubit states at polar angles theta1, theta2 (phi = 0).
    static HelstromSetup equal_priors_bloch(double theta1, double theta2);

    const std::array<double, 2>& priors() const noexcept { return priors_; }
    const std::array<PureState, 2>& states() const noexcept { return states_; }
    /// Recomputed on every call.
    double bound() const;

 private:
    std::array<double, 2> priors_;
    std::array<PureState, 2> states_;
};

/// 1/2 (1 + || p1 psi1 - p2 psi2 ||_1).
double helstrom_bound(const HelstromSetup& setup);
/// Projector onto the positive part of p1 rho1 - p2 rho2 (guess "1").
ComplexMatrix helstrom_projector(double p1, const DensityMatrix& rho1, double p2, const DensityMatrix& rho2);

TestVerdict helstrom_test(const BoxModel& b, const HelstromSetup& setup, const ClassicalParams& p,
                          std::uint64_t trials, RngStream& rng, const Exec& exec = default_exec());

// ---------------------------------------------------------------------------
// Tomography-based detectors

/// Null distribution of a tomography statistic for the identity box.
struct NullCalibration {
    double threshold = 0.0;  // 99th percentile
    double std_error = 0.0;  // standard error of that percentile
    std::vector<double> samples;
};

inline constexpr std::size_t kCalibrationReplications = 50;
inline constexpr double kCalibrationQuantile = 0.99;

/// Percentile threshold and its asymptotic standard error from null samples.
NullCalibration calibration_from_samples(std::vector<double> samples, double quantile = kCalibrationQuantile);

/// 1 - min over pairs of the normalized-Choi fidelity.
double basis_dependence(const std::vector<ReconstructedProcess>& processes);

struct BasisInvarianceResult {
    TestVerdict verdict;
    std::vector<ReconstructedProcess> processes;  // one per delta
    NullCalibration calibration;
};

NullCalibration calibrate_basis_invariance(Eigen::Index dim, const std::vector<double>& deltas,
                                           const TomographyRun& run, RngStream& rng,
                                           std::size_t replications = kCalibrationReplications);
BasisInvarianceResult basis_invariance_analysis(const BoxModel& b, const ClassicalParams& p,
                                                const std::vector<double>& deltas, const TomographyRun& run,
                                                RngStream& rng,
                                                const std::optional<NullCalibration>& calibration = std::nullopt);
TestVerdict basis_invariance_test(const BoxModel& b, const ClassicalParams& p, const std::vector<double>& deltas,
                                  const TomographyRun& run, RngStream& rng);

struct AncillaConsistencyResult {
    TestVerdict verdict;
    ReconstructedProcess direct;
    ReconstructedProcess ancilla;
    double trace_distance;  // between the normalized Choi estimates, reported alongside
    NullCalibration calibration;
};

double scheme_discrepancy(const ReconstructedProcess& direct, const ReconstructedProcess& ancilla);
NullCalibration calibrate_ancilla_consistency(const TomographyRun& run, RngStream& rng,
                                              std::size_t replications = kCalibrationReplications);
AncillaConsistencyResult ancilla_consistency_analysis(const BoxModel& b, const ClassicalParams& p,
                                                      const TomographyRun& run, RngStream& rng,
                                                      const std::optional<NullCalibration>& calibration = std::nullopt);
TestVerdict ancilla_consistency_test(const BoxModel& b, const ClassicalParams& p, const TomographyRun& run,
                                     RngStream& rng);

// ---------------------------------------------------------------------------
// Composition versus concatenation of tests

struct ConcatenationGapResult {
    TestVerdict verdict;
    double exact_gap;          // trace distance of the infinite-shot outputs
    DensityMatrix composed;    // exact output of compose_boxes(b1, b2)
    DensityMatrix concatenated;  // sampled concatenate_tests output
    NullCalibration calibration;
};

/// Trace distance between the composed output and a sampled concatenation of
/// tests. The null is the concatenation's own shot noise around its
/// infinite-shot limit, so linear chains sit inside it.
ConcatenationGapResult concatenation_gap_analysis(const BoxModel& b1, const BoxModel& b2, const PureState& psi,
                                                  const ClassicalParams& p, std::uint64_t shots, RngStream& rng,
                                                  std::size_t replications = kCalibrationReplications,
                                                  const Exec& exec = default_exec());

// ---------------------------------------------------------------------------
// Exact ensemble-signalling test

inline constexpr double kEnsembleSignallingThreshold = 1e-6;

/// Throws InvalidInput unless the two ensembles share a density matrix
/// within 1e-10.
TestVerdict ensemble_signalling_test(const BoxModel& b, const Ensemble& e1, const Ensemble& e2,
                                     const ClassicalParams& p);

// ---------------------------------------------------------------------------
// Random-access-code transmission fidelity

inline constexpr double kQracQuantumBound = 5.0 / 6.0;

struct QracResult {
    double f_hat = 0.0;
    double ci_halfwidth = 0.0;  // 95%
    double std_error = 0.0;
    std::uint64_t kept_rounds = 0;
    std::uint64_t total_rounds = 0;
};

QracResult qrac_fidelity_estimate(const BoxPair& pair, std::uint64_t rounds, RngStream& rng,
                                  const Exec& exec = default_exec());
TestVerdict qrac_verdict(const QracResult& r);

// ---------------------------------------------------------------------------
// No-signalling of bipartite dynamics

struct NsqResult {
    double signalling_measure = 0.0;  // max of the two directions
    double a_to_b = 0.0;
    double b_to_a = 0.0;
    double sampled_violations = 0.0;  // fraction of sampled (rho_AB, Gamma) families
    /// Stronger reading: output marginal vs input marginal. Diagnostic only.
    double marginal_drift = 0.0;
};

inline constexpr double kSampledViolationTol = 1e-9;
inline constexpr double kSurveySignallingTol = 1e-8;
inline constexpr std::size_t kSampledFamilies = 100;

/// Kernel (exact) signalling measure in both directions, normalized so that
/// SWAP scores 1.
std::array<double, 2> nsq_kernel_measure(const QuantumChannel& lambda, Eigen::Index dim_a, Eigen::Index dim_b);
NsqResult nsq_signalling_measure(const QuantumChannel& lambda, Eigen::Index dim_a, Eigen::Index dim_b,
                                 RngStream& rng);
/// Uses a fixed internal stream for the sampled check.
NsqResult nsq_signalling_measure(const QuantumChannel& lambda, Eigen::Index dim_a, Eigen::Index dim_b);

struct SurveyOptions {
    bool product_control = false;  // sample Gamma_A (x) Gamma_B instead
    Eigen::Index env_dim = 0;      // 0: (dA dB)^2
};

inline constexpr double kSurveyAnomalyThreshold = 0.95;

/// Fraction of random bipartite channels that signal in some direction;
/// lower tail against kSurveyAnomalyThreshold.
TestVerdict nsq_random_survey(std::size_t n_samples, Eigen::Index dim_a, Eigen::Index dim_b, RngStream& rng,
                              SurveyOptions options = {}, const Exec& exec = default_exec());

}  // namespace qdata
