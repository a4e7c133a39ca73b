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

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "qdata/detectors.hpp"
#include "qdata/error.hpp"

namespace qdata {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Decide, ThreeSigmaRule) {
    EXPECT_EQ(decide(1.0, 0.5, 0.1, 10).verdict, Verdict::PostQuantum);
    EXPECT_EQ(decide(0.6, 0.5, 0.1, 10).verdict, Verdict::Inconclusive);
    EXPECT_EQ(decide(0.1, 0.5, 0.1, 10).verdict, Verdict::QuantumConsistent);
    EXPECT_EQ(decide(0.5, 0.5, 0.0, 10).verdict, Verdict::Inconclusive);
    EXPECT_EQ(decide(1.0, 0.5, std::numeric_limits<double>::quiet_NaN(), 10).verdict, Verdict::Inconclusive);
    EXPECT_EQ(decide(0.1, 0.5, 0.1, 10, Tail::Lower).verdict, Verdict::PostQuantum);
    EXPECT_EQ(decide(1.0, 0.5, 0.1, 10, Tail::Lower).verdict, Verdict::QuantumConsistent);
}

TEST(Helstrom, BoundValues) {
    const auto setup = HelstromSetup::equal_priors_bloch(kPi / 2 - kPi / 8, kPi / 2 + kPi / 8);
    EXPECT_NEAR(oracle::helstrom_equal_priors(std::cos(kPi / 8)), oracle::kHelstromPi8, 1e-15);
    EXPECT_NEAR(setup.bound(), oracle::kHelstromPi8, 1e-9);
    EXPECT_NEAR(HelstromSetup::equal_priors_bloch(0.0, kPi).bound(), 1.0, 1e-15);
    EXPECT_NEAR(HelstromSetup::equal_priors_bloch(0.3, 0.3).bound(), 0.5, 1e-15);
    EXPECT_NEAR(HelstromSetup({0.3, 0.7}, {PureState::basis(2, 0), PureState::basis(2, 1)}).bound(), 1.0, 1e-15);
    EXPECT_THROW(HelstromSetup({0.3, 0.3}, {PureState::basis(2, 0), PureState::basis(2, 1)}), Error);
}

TEST(Helstrom, IdentitySaturatesBound) {
    RngStream rng(1, 0);
    const auto setup = HelstromSetup::equal_priors_bloch(kPi / 2 - kPi / 8, kPi / 2 + kPi / 8);
    const auto v = helstrom_test(BoxModel::linear(channels::identity(2)), setup, {}, 100000, rng);
    EXPECT_LT(std::abs(v.statistic - v.threshold), 3 * v.std_error);
    EXPECT_EQ(v.verdict, Verdict::Inconclusive);  // sits on the bound
    EXPECT_EQ(v.n_trials, 100000u);
}

TEST(Helstrom, KappaSixIsPostQuantum) {
    RngStream rng(2, 0);
    const auto setup = HelstromSetup::equal_priors_bloch(kPi / 2 - kPi / 8, kPi / 2 + kPi / 8);
    const auto v = helstrom_test(BoxModel::nonlinear_bloch(6.0), setup, {}, 100000, rng);
    EXPECT_GT(v.statistic, 0.95);
    EXPECT_NEAR(v.statistic, oracle::kHelstromKappa6, 4 * v.std_error);
    EXPECT_EQ(v.verdict, Verdict::PostQuantum);
}

TEST(Helstrom, LinearBoxesNeverPostQuantum) {
    RngStream rng(3, 0);
    const auto setup = HelstromSetup::equal_priors_bloch(kPi / 2 - kPi / 8, kPi / 2 + kPi / 8);
    for (int i = 0; i < 50; ++i) {
        const auto v = helstrom_test(BoxModel::linear(random_channel(2, 2, rng)), setup, {}, 20000, rng);
        EXPECT_NE(v.verdict, Verdict::PostQuantum);
    }
}

TEST(Helstrom, ProjectorPicksPositivePart) {
    const DensityMatrix zero(PureState::basis(2, 0)), one(PureState::basis(2, 1));
    EXPECT_LT(max_abs_diff(helstrom_projector(0.5, zero, 0.5, one), zero.matrix()), 1e-15);
}

TEST(Calibration, QuantileAndError) {
    std::vector<double> s;
    for (int i = 0; i < 101; ++i) s.push_back(i);
    const auto c = calibration_from_samples(s);
    EXPECT_NEAR(c.threshold, 99.0, 1e-12);
    // sd * sqrt(q(1-q)/n) / phi(z_0.99).
    const double sd = std::sqrt(101.0 * 102.0 / 12.0);
    const double phi = std::exp(-0.5 * 2.3263478740408408 * 2.3263478740408408) / std::sqrt(2 * kPi);
    EXPECT_NEAR(c.std_error, sd * std::sqrt(0.99 * 0.01 / 101.0) / phi, 1e-9);
}

TEST(BasisInvariance, SingleDeltaIsZero) {
    RngStream rng(4, 0);
    const TomographyRun run(MeasurementSet::pauli(1), 1000);
    const auto v = basis_invariance_test(BoxModel::nonlinear_bloch(4.0), {}, {0.0}, run, rng);
    EXPECT_EQ(v.statistic, 0.0);
}

TEST(BasisInvariance, DepolarizingPassesNonlinearFails) {
    RngStream rng(5, 0);
    const TomographyRun run(MeasurementSet::pauli(1), 100000);
    const std::vector<double> deltas{0.0, kPi / 5, kPi / 3};
    const auto cal = calibrate_basis_invariance(2, deltas, run, rng, 30);
    const auto lin = basis_invariance_analysis(BoxModel::linear(channels::depolarizing(2, 0.3)), {}, deltas, run, rng, cal);
    EXPECT_LT(lin.verdict.statistic, lin.verdict.threshold);
    EXPECT_NE(lin.verdict.verdict, Verdict::PostQuantum);
    const auto nl = basis_invariance_analysis(BoxModel::nonlinear_bloch(4.0), {}, deltas, run, rng, cal);
    EXPECT_EQ(nl.verdict.verdict, Verdict::PostQuantum);
}

TEST(BasisInvariance, NonlinearExactStatisticIsLarge) {
    // Infinite-shot reconstruction per delta.
    const std::vector<double> deltas{0.0, kPi / 5, kPi / 3};
    std::vector<ReconstructedProcess> exact;
    for (double d : deltas) {
        const auto h = HermitianOperator::symmetrized(direct_choi_exact(BoxModel::nonlinear_bloch(4.0), {}, canonical_probe_basis(2, d)));
        exact.push_back({h, 2, 2, 0, cptp_residual(h, 2, 2)});
    }
    EXPECT_GT(basis_dependence(exact), 0.05);
}

TEST(Ancilla, LinearConsistentAndNonlinearFlagged) {
    RngStream rng(6, 0);
    const TomographyRun run(MeasurementSet::pauli(1), 100000);
    const auto cal = calibrate_ancilla_consistency(run, rng, 30);
    const auto id = ancilla_consistency_analysis(BoxModel::linear(channels::identity(2)), {}, run, rng, cal);
    EXPECT_LT(id.verdict.statistic, id.verdict.threshold);
    const auto nl = ancilla_consistency_analysis(BoxModel::nonlinear_bloch(4.0), {}, run, rng, cal);
    EXPECT_EQ(nl.verdict.verdict, Verdict::PostQuantum);
    EXPECT_GT(nl.trace_distance, 0.1);
}

TEST(Ancilla, CollapseBoxSchemesAgreeExactly) {
    // A collapse box is a measure-and-prepare channel, so both schemes see
    // the same Choi (dephasing for kappa = 1).
    const BoxModel b = BoxModel::collapse_nonlinear({PureState::basis(2, 0), PureState::basis(2, 1)}, 1.0);
    const ComplexMatrix direct = direct_choi_exact(b, {}, canonical_probe_basis(2, 0.0));
    const ComplexMatrix ancilla = ancilla_choi_exact(b, {});
    EXPECT_LT(max_abs_diff(direct, ancilla), 1e-12);
    EXPECT_LT(max_abs_diff(ancilla, channels::dephasing(0.5).choi().matrix()), 1e-12);
}

TEST(EnsembleSignalling, LinearAndCollapse) {
    RngStream rng(7, 0);
    for (int i = 0; i < 10; ++i) {
        const auto v = ensemble_signalling_test(BoxModel::linear(random_channel(2, 2, rng)), states::gisin_z(),
                                                states::gisin_x(), {});
        EXPECT_LT(v.statistic, 1e-10);
        EXPECT_EQ(v.verdict, Verdict::QuantumConsistent);
    }
    const auto c = ensemble_signalling_test(
        BoxModel::collapse_nonlinear({PureState::basis(2, 0), PureState::basis(2, 1)}, 4.0), states::gisin_z(),
        states::gisin_x(), {});
    EXPECT_LT(c.statistic, 1e-12);
}

TEST(EnsembleSignalling, RejectsDifferentDensities) {
    const Ensemble a({{1.0, PureState::basis(2, 0)}});
    EXPECT_THROW(ensemble_signalling_test(BoxModel::nonlinear_bloch(2.0), a, states::gisin_x(), {}), Error);
}

TEST(Qrac, OracleAndMeasurePrepare) {
    RngStream rng(8, 0);
    const auto oracle_r = qrac_fidelity_estimate(BoxPair::qrac_oracle(), 100000, rng);
    EXPECT_NEAR(oracle_r.f_hat, 1.0, 1e-12);
    EXPECT_EQ(qrac_verdict(oracle_r).verdict, Verdict::PostQuantum);
    const auto mp = qrac_fidelity_estimate(BoxPair::qrac_measure_prepare(), 100000, rng);
    EXPECT_NEAR(mp.f_hat, oracle::kQracMeasurePrepare, 0.01);
    EXPECT_EQ(qrac_verdict(mp).verdict, Verdict::QuantumConsistent);
    const auto blind = qrac_fidelity_estimate(BoxPair::qrac_blind(), 20000, rng);
    EXPECT_NEAR(blind.f_hat, 0.5, 1e-12);
    EXPECT_THROW(qrac_fidelity_estimate(BoxPair::nsq(channels::swap(2), 2, 2), 10, rng), Error);
}

TEST(Nsq, SwapAndLocalMaps) {
    const auto swap = nsq_signalling_measure(channels::swap(2), 2, 2);
    EXPECT_NEAR(swap.signalling_measure, 1.0, 1e-12);
    EXPECT_NEAR(swap.a_to_b, 1.0, 1e-12);
    EXPECT_NEAR(swap.b_to_a, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(swap.sampled_violations, 1.0);
    RngStream rng(9, 0);
    for (int i = 0; i < 5; ++i) {
        const QuantumChannel local = tensor_channel(random_channel(2, 2, rng), random_channel(2, 2, rng));
        const auto r = nsq_signalling_measure(local, 2, 2, rng);
        EXPECT_LT(r.signalling_measure, 1e-12);
        EXPECT_EQ(r.sampled_violations, 0.0);
    }
    EXPECT_THROW(nsq_kernel_measure(channels::swap(2), 2, 3), Error);
}

TEST(Nsq, OneWaySignalling) {
    // CNOT-like conjugation with control A: B's marginal depends on A, and
    // A's marginal depends on B through phase kickback.
    ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    const auto r = nsq_signalling_measure(channels::unitary(cnot), 2, 2);
    EXPECT_GT(r.a_to_b, 0.1);
    EXPECT_GT(r.b_to_a, 0.1);
    // A classical "copy A's z-value to B" map only signals A -> B.
    const QuantumChannel dephase_a = tensor_channel(channels::dephasing(0.5), channels::identity(2));
    const QuantumChannel copy = compose_channels(dephase_a, channels::unitary(cnot));
    const auto c = nsq_signalling_measure(copy, 2, 2);
    EXPECT_GT(c.a_to_b, 0.1);
    EXPECT_LT(c.b_to_a, 1e-12);
}

TEST(Nsq, KernelZeroImpliesSampledZero) {
    RngStream rng(10, 0);
    for (int i = 0; i < 30; ++i) {
        const bool product = i % 2 == 0;
        const QuantumChannel c = product ? tensor_channel(random_channel(2, 2, rng), random_channel(2, 2, rng))
                                         : random_channel(4, 4, 16, rng);
        const auto r = nsq_signalling_measure(c, 2, 2, rng);
        if (r.signalling_measure < kSurveySignallingTol) EXPECT_EQ(r.sampled_violations, 0.0);
        else EXPECT_GT(r.sampled_violations, 0.0);
    }
}

TEST(Nsq, SurveyFractions) {
    RngStream rng(11, 0);
    const auto generic = nsq_random_survey(60, 2, 2, rng);
    EXPECT_EQ(generic.statistic, 1.0);
    EXPECT_EQ(generic.verdict, Verdict::QuantumConsistent);
    const auto product = nsq_random_survey(60, 2, 2, rng, {true, 0});
    EXPECT_EQ(product.statistic, 0.0);
    EXPECT_EQ(product.verdict, Verdict::PostQuantum);
    EXPECT_EQ(nsq_random_survey(1, 2, 2, rng).verdict, Verdict::Inconclusive);
}

TEST(ConcatenationGap, LinearChainStaysInsideShotNoise) {
    RngStream rng(70, 0);
    const auto r = concatenation_gap_analysis(BoxModel::linear(channels::amplitude_damping(0.3)),
                                              BoxModel::linear(channels::dephasing(0.2)), PureState::bloch(1.0, 0.5),
                                              {}, 20000, rng, 30);
    EXPECT_LT(r.exact_gap, 1e-12);
    EXPECT_NE(r.verdict.verdict, Verdict::PostQuantum);
    EXPECT_EQ(r.verdict.n_trials, 6u * 20000u);
}

TEST(ConcatenationGap, DephasingThenNonlinearMatchesOracle) {
    RngStream rng(71, 0);
    const auto r = concatenation_gap_analysis(BoxModel::linear(channels::dephasing(0.3)), BoxModel::nonlinear_bloch(4.0),
                                              PureState::bloch(kPi / 4, 0.0), {}, 100000, rng, 30);
    EXPECT_NEAR(r.exact_gap, oracle::kConcatChainDistance, 1e-12);
    EXPECT_NEAR(r.verdict.statistic, oracle::kConcatChainDistance, r.calibration.threshold);
    EXPECT_EQ(r.verdict.verdict, Verdict::PostQuantum);
}

TEST(ConcatenationGap, CollapseFirstBoxHasNoGap) {
    RngStream rng(72, 0);
    const BoxModel collapse =
        BoxModel::collapse_nonlinear({PureState::basis(2, 0), PureState::basis(2, 1)}, 4.0, rotation_y(0.4));
    const auto r = concatenation_gap_analysis(collapse, BoxModel::nonlinear_bloch(4.0), PureState::bloch(kPi / 4, 0.0),
                                              {}, 20000, rng, 20);
    EXPECT_LT(r.exact_gap, 1e-12);
}

}  // namespace
}  // namespace qdata
