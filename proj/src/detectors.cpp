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

#include "qdata/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qdata/error.hpp"

namespace qdata {

namespace {

std::size_t sz(Eigen::Index i) { return static_cast<std::size_t>(i); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double q) {
    double lo = -10.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double quantile_type7(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

unsigned qubit_count(Eigen::Index dim) {
    unsigned q = 0;
    while ((Eigen::Index{1} << q) < dim) ++q;
    require((Eigen::Index{1} << q) == dim, ErrorKind::InvalidShape, "tomography needs a power-of-two dimension");
    return q;
}

// Traceless Hermitian operators with trace norm 2 spanning the traceless
// subspace: symmetric and antisymmetric off-diagonals, |0><0| - |k><k|.
std::vector<ComplexMatrix> traceless_basis(Eigen::Index d) {
    std::vector<ComplexMatrix> out;
    for (Eigen::Index k = 1; k < d; ++k) {
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        m(0, 0) = 1.0;
        m(k, k) = -1.0;
        out.push_back(m);
    }
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            ComplexMatrix s = ComplexMatrix::Zero(d, d), a = ComplexMatrix::Zero(d, d);
            s(i, j) = s(j, i) = 1.0;
            a(i, j) = cplx(0.0, -1.0);
            a(j, i) = cplx(0.0, 1.0);
            out.push_back(s);
            out.push_back(a);
        }
    return out;
}

// d^2 pure-state projectors spanning all operators on C^d.
std::vector<ComplexMatrix> spanning_states(Eigen::Index d) {
    std::vector<ComplexMatrix> out;
    for (Eigen::Index k = 0; k < d; ++k) out.push_back(PureState::basis(d, k).projector());
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            ComplexVector plus = ComplexVector::Zero(d), plus_i = ComplexVector::Zero(d);
            plus(i) = plus_i(i) = 1.0;
            plus(j) = 1.0;
            plus_i(j) = cplx(0.0, 1.0);
            out.push_back(PureState::normalized(plus).projector());
            out.push_back(PureState::normalized(plus_i).projector());
        }
    return out;
}

ComplexMatrix reduced(const ComplexMatrix& m, Eigen::Index dim_a, Eigen::Index dim_b, std::size_t keep_index) {
    const std::size_t dims[] = {sz(dim_a), sz(dim_b)};
    const std::size_t keep[] = {keep_index};
    return partial_trace(m, dims, keep);
}

double half_trace_norm(const ComplexMatrix& m) { return 0.5 * trace_norm(HermitianOperator::symmetrized(m)); }

void require_square_box(const BoxModel& b, const char* who) {
    require(b.dim_in() == b.dim_out(), ErrorKind::InvalidShape,
            std::string(who) + ": calibration needs dim_in == dim_out");
}

TomographyRun output_run(const TomographyRun& run, Eigen::Index dim) {
    if (run.measurements().dim() == dim) return run;
    return run.with_measurements(MeasurementSet::pauli(qubit_count(dim)));
}

std::vector<ReconstructedProcess> reconstruct_over_deltas(const BoxModel& b, const ClassicalParams& p,
                                                          const std::vector<double>& deltas,
                                                          const TomographyRun& run, RngStream& rng) {
    const RngStream root = rng.fork();
    const TomographyRun out_run = output_run(run, b.dim_out());
    std::vector<ReconstructedProcess> processes;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        RngStream stream = root.child(k);
        processes.push_back(
            process_tomography_direct(b, p, canonical_probe_basis(b.dim_in(), deltas[k]), out_run, stream));
    }
    return processes;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::QuantumConsistent: return "quantum-consistent";
        case Verdict::PostQuantum: return "post-quantum";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

TestVerdict decide(double statistic, double threshold, double std_error, std::uint64_t n_trials, Tail tail) {
    TestVerdict v{statistic, threshold, std_error, n_trials, Verdict::Inconclusive, tail};
    if (!std::isfinite(std_error) || !std::isfinite(statistic)) return v;
    const double excess = tail == Tail::Upper ? statistic - threshold : threshold - statistic;
    if (excess > 0.0 && excess >= 3.0 * std_error)
        v.verdict = Verdict::PostQuantum;
    else if (excess < 0.0 && -excess >= 3.0 * std_error)
        v.verdict = Verdict::QuantumConsistent;
    return v;
}

// ---------------------------------------------------------------------------

HelstromSetup::HelstromSetup(std::array<double, 2> priors, std::array<PureState, 2> states)
    : priors_(priors), states_(std::move(states)) {
    require(priors_[0] >= 0.0 && priors_[1] >= 0.0 && std::abs(priors_[0] + priors_[1] - 1.0) <= 1e-12,
            ErrorKind::InvalidInput, "HelstromSetup: priors must be non-negative and sum to 1");
    require(states_[0].dim() == states_[1].dim(), ErrorKind::InvalidShape, "HelstromSetup: state dimensions differ");
}

HelstromSetup HelstromSetup::equal_priors_bloch(double theta1, double theta2) {
    return HelstromSetup({0.5, 0.5}, {PureState::bloch(theta1, 0.0), PureState::bloch(theta2, 0.0)});
}

double HelstromSetup::bound() const { return helstrom_bound(*this); }

double helstrom_bound(const HelstromSetup& setup) {
    const auto& [p1, p2] = setup.priors();
    const ComplexMatrix diff = p1 * setup.states()[0].projector() - p2 * setup.states()[1].projector();
    return 0.5 * (1.0 + trace_norm(HermitianOperator::symmetrized(diff)));
}

ComplexMatrix helstrom_projector(double p1, const DensityMatrix& rho1, double p2, const DensityMatrix& rho2) {
    const auto e = eig_hermitian(HermitianOperator::symmetrized(p1 * rho1.matrix() - p2 * rho2.matrix()));
    return spectral_map(e, [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

TestVerdict helstrom_test(const BoxModel& b, const HelstromSetup& setup, const ClassicalParams& p,
                          std::uint64_t trials, RngStream& rng, const Exec& exec) {
    require(setup.states()[0].dim() == b.dim_in(), ErrorKind::InvalidShape, "helstrom_test: dimension mismatch");
    require(trials > 0, ErrorKind::InvalidInput, "helstrom_test: zero trials");
    const auto& priors = setup.priors();
    const DensityMatrix out1 = output_density(b, setup.states()[0], p);
    const DensityMatrix out2 = output_density(b, setup.states()[1], p);
    const ComplexMatrix guess_first = helstrom_projector(priors[0], out1, priors[1], out2);

    // Per input: branch weights and P(guess "first" | branch).
    struct Arm {
        std::vector<double> weights;
        std::vector<double> p_first;
    };
    std::array<Arm, 2> arms;
    for (std::size_t i = 0; i < 2; ++i) {
        double total = 0.0;
        const auto branches = output_branches(b, setup.states()[i], p);
        for (const auto& br : branches) total += br.weight;
        for (const auto& br : branches) {
            arms[i].weights.push_back(br.weight / total);
            const ComplexVector& v = br.state.amplitudes();
            arms[i].p_first.push_back(std::clamp(v.dot(guess_first * v).real(), 0.0, 1.0));
        }
    }

    const RngStream root = rng.fork();
    const std::size_t n_blocks = block_count(trials);
    std::vector<std::uint64_t> successes(n_blocks, 0);
    for_each_block(n_blocks, exec, [&](std::size_t blk) {
        RngStream s = root.child(blk);
        const std::uint64_t begin = blk * kBlockSize;
        const std::uint64_t end = std::min<std::uint64_t>(trials, begin + kBlockSize);
        std::uint64_t ok = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            const std::size_t i = s.uniform() < priors[0] ? 0 : 1;
            const std::size_t k = sample_index(arms[i].weights, s);
            const bool guessed_first = s.uniform() < arms[i].p_first[k];
            ok += (guessed_first == (i == 0)) ? 1u : 0u;
        }
        successes[blk] = ok;
    });
    std::uint64_t total = 0;
    for (auto s : successes) total += s;
    const double p_hat = static_cast<double>(total) / static_cast<double>(trials);
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
    return decide(p_hat, helstrom_bound(setup), se, trials);
}

// ---------------------------------------------------------------------------

NullCalibration calibration_from_samples(std::vector<double> samples, double quantile) {
    require(samples.size() >= 2, ErrorKind::InvalidInput, "calibration: need at least two null samples");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    const double sd = std::sqrt(var / (n - 1.0));
    NullCalibration cal;
    cal.threshold = quantile_type7(samples, quantile);
    // Asymptotic standard error of a sample quantile under a normal shape.
    cal.std_error = sd * std::sqrt(quantile * (1.0 - quantile) / n) / normal_pdf(normal_quantile(quantile));
    cal.samples = std::move(samples);
    return cal;
}

double basis_dependence(const std::vector<ReconstructedProcess>& processes) {
    if (processes.size() < 2) return 0.0;
    std::vector<DensityMatrix> normalized;
    for (const auto& pr : processes) normalized.push_back(pr.normalized_choi());
    double min_fid = 1.0;
    for (std::size_t i = 0; i < normalized.size(); ++i)
        for (std::size_t j = i + 1; j < normalized.size(); ++j)
            min_fid = std::min(min_fid, uhlmann_fidelity(normalized[i], normalized[j]));
    return 1.0 - min_fid;
}

NullCalibration calibrate_basis_invariance(Eigen::Index dim, const std::vector<double>& deltas,
                                           const TomographyRun& run, RngStream& rng, std::size_t replications) {
    const BoxModel null_box = BoxModel::linear(channels::identity(dim));
    const ClassicalParams none;
    const RngStream root = rng.fork();
    std::vector<double> samples(replications);
    for_each_block(replications, run.exec(), [&](std::size_t r) {
        RngStream s = root.child(r);
        samples[r] = basis_dependence(reconstruct_over_deltas(null_box, none, deltas, run, s));
    });
    return calibration_from_samples(std::move(samples));
}

BasisInvarianceResult basis_invariance_analysis(const BoxModel& b, const ClassicalParams& p,
                                                const std::vector<double>& deltas, const TomographyRun& run,
                                                RngStream& rng, const std::optional<NullCalibration>& calibration) {
    require(!deltas.empty(), ErrorKind::InvalidInput, "basis_invariance_test: no deltas");
    require_square_box(b, "basis_invariance_test");
    RngStream box_stream = rng.fork();
    RngStream null_stream = rng.fork();
    BasisInvarianceResult result;
    result.processes = reconstruct_over_deltas(b, p, deltas, run, box_stream);
    const double stat = basis_dependence(result.processes);
    if (deltas.size() < 2) {
        // Degenerate: nothing to compare.
        result.verdict = decide(stat, 0.0, std::numeric_limits<double>::quiet_NaN(), run.total_shots());
        return result;
    }
    result.calibration = calibration ? *calibration : calibrate_basis_invariance(b.dim_in(), deltas, run, null_stream);
    const std::uint64_t shots = result.processes.front().shots * deltas.size();
    result.verdict = decide(stat, result.calibration.threshold, result.calibration.std_error, shots);
    return result;
}

TestVerdict basis_invariance_test(const BoxModel& b, const ClassicalParams& p, const std::vector<double>& deltas,
                                  const TomographyRun& run, RngStream& rng) {
    return basis_invariance_analysis(b, p, deltas, run, rng).verdict;
}

double scheme_discrepancy(const ReconstructedProcess& direct, const ReconstructedProcess& ancilla) {
    return 1.0 - uhlmann_fidelity(direct.normalized_choi(), ancilla.normalized_choi());
}

namespace {

std::pair<ReconstructedProcess, ReconstructedProcess> both_schemes(const BoxModel& b, const ClassicalParams& p,
                                                                   const TomographyRun& run, RngStream& rng) {
    RngStream direct_stream = rng.fork();
    RngStream ancilla_stream = rng.fork();
    const TomographyRun out_run = output_run(run, b.dim_out());
    auto direct = process_tomography_direct(b, p, canonical_probe_basis(b.dim_in(), 0.0), out_run, direct_stream);
    auto ancilla = process_tomography_ancilla(b, p, run, ancilla_stream);
    return {std::move(direct), std::move(ancilla)};
}

}  // namespace

NullCalibration calibrate_ancilla_consistency(const TomographyRun& run, RngStream& rng, std::size_t replications) {
    const BoxModel null_box = BoxModel::linear(channels::identity(2));
    const ClassicalParams none;
    const RngStream root = rng.fork();
    std::vector<double> samples(replications);
    for_each_block(replications, run.exec(), [&](std::size_t r) {
        RngStream s = root.child(r);
        const auto [direct, ancilla] = both_schemes(null_box, none, run, s);
        samples[r] = scheme_discrepancy(direct, ancilla);
    });
    return calibration_from_samples(std::move(samples));
}

AncillaConsistencyResult ancilla_consistency_analysis(const BoxModel& b, const ClassicalParams& p,
                                                      const TomographyRun& run, RngStream& rng,
                                                      const std::optional<NullCalibration>& calibration) {
    require(b.dim_in() == 2 && b.dim_out() == 2, ErrorKind::InvalidShape, "ancilla_consistency_test: qubit boxes only");
    RngStream box_stream = rng.fork();
    RngStream null_stream = rng.fork();
    auto [direct, ancilla] = both_schemes(b, p, run, box_stream);
    const double stat = scheme_discrepancy(direct, ancilla);
    const double td = trace_distance(direct.normalized_choi(), ancilla.normalized_choi());
    NullCalibration cal = calibration ? *calibration : calibrate_ancilla_consistency(run, null_stream);
    TestVerdict v = decide(stat, cal.threshold, cal.std_error, direct.shots + ancilla.shots);
    return {v, std::move(direct), std::move(ancilla), td, std::move(cal)};
}

TestVerdict ancilla_consistency_test(const BoxModel& b, const ClassicalParams& p, const TomographyRun& run,
                                     RngStream& rng) {
    return ancilla_consistency_analysis(b, p, run, rng).verdict;
}

ConcatenationGapResult concatenation_gap_analysis(const BoxModel& b1, const BoxModel& b2, const PureState& psi,
                                                  const ClassicalParams& p, std::uint64_t shots, RngStream& rng,
                                                  std::size_t replications, const Exec& exec) {
    RngStream box_stream = rng.fork();
    const RngStream null_root = rng.fork();
    DensityMatrix composed = output_density(compose_boxes(b1, b2), psi, p);
    const DensityMatrix limit = concatenate_tests_exact(b1, b2, psi, p);
    DensityMatrix sampled = concatenate_tests(b1, b2, psi, p, shots, box_stream);
    std::vector<double> null(replications);
    for_each_block(replications, exec, [&](std::size_t r) {
        RngStream s = null_root.child(r);
        null[r] = trace_distance(limit, concatenate_tests(b1, b2, psi, p, shots, s));
    });
    NullCalibration cal = calibration_from_samples(std::move(null));
    // Two tomography stages of three Pauli settings each.
    const TestVerdict v = decide(trace_distance(composed, sampled), cal.threshold, cal.std_error, 6 * shots);
    return {v, trace_distance(composed, limit), std::move(composed), std::move(sampled), std::move(cal)};
}

// ---------------------------------------------------------------------------

TestVerdict ensemble_signalling_test(const BoxModel& b, const Ensemble& e1, const Ensemble& e2,
                                     const ClassicalParams& p) {
    require(e1.dim() == e2.dim(), ErrorKind::InvalidShape, "ensemble_signalling_test: ensemble dimensions differ");
    require(max_abs_diff(e1.density().matrix(), e2.density().matrix()) <= 1e-10, ErrorKind::InvalidInput,
            "ensemble_signalling_test: ensembles have different density matrices");
    const double stat = trace_distance(ensemble_output_density(b, e1, p), ensemble_output_density(b, e2, p));
    return decide(stat, kEnsembleSignallingThreshold, 0.0, 0);
}

// ---------------------------------------------------------------------------

QracResult qrac_fidelity_estimate(const BoxPair& pair, std::uint64_t rounds, RngStream& rng, const Exec& exec) {
    require(pair.is_qrac(), ErrorKind::InvalidInput, "qrac_fidelity_estimate: pair is not a QRAC box");
    struct Partial {
        std::uint64_t kept = 0;
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    const RngStream root = rng.fork();
    const std::size_t n_blocks = block_count(rounds);
    std::vector<Partial> partial(n_blocks);
    for_each_block(n_blocks, exec, [&](std::size_t blk) {
        RngStream s = root.child(blk);
        const std::uint64_t begin = blk * kBlockSize;
        const std::uint64_t end = std::min<std::uint64_t>(rounds, begin + kBlockSize);
        Partial acc;
        for (std::uint64_t t = begin; t < end; ++t) {
            const PureState psi0 = haar_random_state(2, s);
            const PureState psi1 = haar_random_state(2, s);
            const unsigned x = s.bit() ? 1u : 0u;
            const QracRound round = qrac_round(pair, psi0, psi1, x, s);
            if (!round.kept) continue;
            const ComplexVector& target = (x == 0 ? psi0 : psi1).amplitudes();
            const double f = std::clamp(target.dot(round.rho_out.matrix() * target).real(), 0.0, 1.0);
            ++acc.kept;
            acc.sum += f;
            acc.sum_sq += f * f;
        }
        partial[blk] = acc;
    });
    Partial total;
    for (const auto& pt : partial) {
        total.kept += pt.kept;
        total.sum += pt.sum;
        total.sum_sq += pt.sum_sq;
    }
    require(total.kept > 0, ErrorKind::InvalidInput, "qrac_fidelity_estimate: no rounds survived post-selection");
    QracResult r;
    r.kept_rounds = total.kept;
    r.total_rounds = rounds;
    const double k = static_cast<double>(total.kept);
    r.f_hat = total.sum / k;
    const double var = total.kept > 1 ? std::max(0.0, (total.sum_sq - total.sum * total.sum / k) / (k - 1.0)) : 0.0;
    r.std_error = std::sqrt(var / k);
    r.ci_halfwidth = 1.959963984540054 * r.std_error;
    return r;
}

TestVerdict qrac_verdict(const QracResult& r) {
    return decide(r.f_hat, kQracQuantumBound, r.std_error, r.total_rounds);
}

// ---------------------------------------------------------------------------

std::array<double, 2> nsq_kernel_measure(const QuantumChannel& lambda, Eigen::Index dim_a, Eigen::Index dim_b) {
    require(lambda.dim_in() == dim_a * dim_b && lambda.dim_out() == dim_a * dim_b, ErrorKind::InvalidShape,
            "nsq_signalling_measure: channel dimensions do not factor as dA*dB");
    double a_to_b = 0.0, b_to_a = 0.0;
    const auto states_a = spanning_states(dim_a), states_b = spanning_states(dim_b);
    for (const auto& x : traceless_basis(dim_a))
        for (const auto& y : states_b)
            a_to_b = std::max(a_to_b, half_trace_norm(reduced(lambda.apply(kron(x, y)), dim_a, dim_b, 1)));
    for (const auto& x : traceless_basis(dim_b))
        for (const auto& y : states_a)
            b_to_a = std::max(b_to_a, half_trace_norm(reduced(lambda.apply(kron(y, x)), dim_a, dim_b, 0)));
    return {a_to_b, b_to_a};
}

NsqResult nsq_signalling_measure(const QuantumChannel& lambda, Eigen::Index dim_a, Eigen::Index dim_b,
                                 RngStream& rng) {
    NsqResult r;
    const auto [ab, ba] = nsq_kernel_measure(lambda, dim_a, dim_b);
    r.a_to_b = ab;
    r.b_to_a = ba;
    r.signalling_measure = std::max(ab, ba);

    // Stronger reading: output marginal vs input marginal on product inputs.
    const auto states_a = spanning_states(dim_a), states_b = spanning_states(dim_b);
    for (const auto& ra : states_a)
        for (const auto& rb : states_b) {
            const ComplexMatrix out = lambda.apply(kron(ra, rb));
            r.marginal_drift = std::max({r.marginal_drift, half_trace_norm(reduced(out, dim_a, dim_b, 1) - rb),
                                         half_trace_norm(reduced(out, dim_a, dim_b, 0) - ra)});
        }

    // Literal family check: Bob's marginal across local maps on Alice's side
    // (and the mirror image), per sampled input state.
    const RngStream root = rng.fork();
    std::size_t violations = 0;
    for (std::size_t f = 0; f < kSampledFamilies; ++f) {
        RngStream s = root.child(f);
        const DensityMatrix rho = random_density_matrix(dim_a * dim_b, dim_a * dim_b, s);
        std::vector<QuantumChannel> gammas_a{channels::identity(dim_a)}, gammas_b{channels::identity(dim_b)};
        for (int g = 0; g < 2; ++g) {
            gammas_a.push_back(random_channel(dim_a, dim_a, s));
            gammas_b.push_back(random_channel(dim_b, dim_b, s));
        }
        auto spread = [&](bool alice_side) {
            std::vector<ComplexMatrix> marginals;
            const auto& gammas = alice_side ? gammas_a : gammas_b;
            for (const auto& g : gammas) {
                const QuantumChannel local = alice_side ? tensor_channel(g, channels::identity(dim_b))
                                                        : tensor_channel(channels::identity(dim_a), g);
                const ComplexMatrix out = lambda.apply(local.apply(rho.matrix()));
                marginals.push_back(reduced(out, dim_a, dim_b, alice_side ? 1 : 0));
            }
            double worst = 0.0;
            for (std::size_t i = 0; i < marginals.size(); ++i)
                for (std::size_t j = i + 1; j < marginals.size(); ++j)
                    worst = std::max(worst, half_trace_norm(marginals[i] - marginals[j]));
            return worst;
        };
        if (spread(true) > kSampledViolationTol || spread(false) > kSampledViolationTol) ++violations;
    }
    r.sampled_violations = static_cast<double>(violations) / static_cast<double>(kSampledFamilies);
    return r;
}

NsqResult nsq_signalling_measure(const QuantumChannel& lambda, Eigen::Index dim_a, Eigen::Index dim_b) {
    RngStream rng(0x5eed0f5a3b1e5ULL, 0);
    return nsq_signalling_measure(lambda, dim_a, dim_b, rng);
}

TestVerdict nsq_random_survey(std::size_t n_samples, Eigen::Index dim_a, Eigen::Index dim_b, RngStream& rng,
                              SurveyOptions options, const Exec& exec) {
    require(n_samples >= 1, ErrorKind::InvalidInput, "nsq_random_survey: n_samples must be >= 1");
    const Eigen::Index d = dim_a * dim_b;
    const Eigen::Index env = options.env_dim > 0 ? options.env_dim : d * d;
    const RngStream root = rng.fork();
    std::vector<unsigned char> signals(n_samples, 0);
    for_each_block(n_samples, exec, [&](std::size_t i) {
        RngStream s = root.child(i);
        const QuantumChannel lambda =
            options.product_control
                ? tensor_channel(random_channel(dim_a, dim_a, s), random_channel(dim_b, dim_b, s))
                : random_channel(d, d, env, s);
        const auto m = nsq_kernel_measure(lambda, dim_a, dim_b);
        signals[i] = std::max(m[0], m[1]) > kSurveySignallingTol ? 1 : 0;
    });
    std::size_t hits = 0;
    for (auto s : signals) hits += s;
    const double n = static_cast<double>(n_samples);
    const double fraction = static_cast<double>(hits) / n;
    double se = std::numeric_limits<double>::quiet_NaN();
    if (n_samples > 1) {
        const double smoothed = (static_cast<double>(hits) + 1.0) / (n + 2.0);
        se = std::sqrt(smoothed * (1.0 - smoothed) / n);
    }
    return decide(fraction, kSurveyAnomalyThreshold, se, n_samples, Tail::Lower);
}

}  // namespace qdata
