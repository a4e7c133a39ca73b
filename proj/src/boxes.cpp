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

#include "qdata/boxes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdata/error.hpp"
#include "qdata/tomography.hpp"

namespace qdata {

namespace {

constexpr double kBranchDrop = 1e-15;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_unitary(const ComplexMatrix& u, const char* who) {
    require(u.rows() == 2 && u.cols() == 2, ErrorKind::InvalidShape, std::string(who) + ": unitary must be 2x2");
    require(approx_equal(u.adjoint() * u, pauli::I(), 1e-10), ErrorKind::InvalidInput,
            std::string(who) + ": matrix is not unitary");
}

NonlinearBlochBox bloch_part(const CollapseNonlinearBox& c) { return {c.kappa, c.pre, c.post}; }

// Splits psi on box (x) reference into the reference vectors conditioned on
// each box-side collapse outcome, then pushes each collapsed box state
// through the nonlinear map.
std::vector<Branch> collapse_joint(const std::vector<PureState>& basis, const NonlinearBlochBox& nl,
                                   const PureState& psi_joint) {
    const Eigen::Index m = basis.front().dim();
    const Eigen::Index r = psi_joint.dim() / m;
    const ComplexVector& v = psi_joint.amplitudes();
    std::vector<Branch> out;
    for (const auto& c : basis) {
        ComplexVector ref = ComplexVector::Zero(r);
        for (Eigen::Index i = 0; i < m; ++i) ref += std::conj(c.amplitudes()(i)) * v.segment(i * r, r);
        const double w = ref.squaredNorm();
        if (w <= kBranchDrop) continue;
        const PureState box_out = nonlinear_bloch_map(nl, c);
        out.push_back({w, PureState::normalized(kron(box_out.amplitudes(), ref / std::sqrt(w)))});
    }
    return out;
}

std::vector<PureState> computational_basis(Eigen::Index d) {
    std::vector<PureState> b;
    for (Eigen::Index k = 0; k < d; ++k) b.push_back(PureState::basis(d, k));
    return b;
}

void check_input(const BoxModel& b, Eigen::Index dim, const char* who) {
    require(dim == b.dim_in(), ErrorKind::InvalidShape, std::string(who) + ": input dimension mismatch");
}

DensityMatrix mixture(const std::vector<Branch>& branches, Eigen::Index dim) {
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    double total = 0.0;
    for (const auto& br : branches) {
        rho += br.weight * br.state.projector();
        total += br.weight;
    }
    return DensityMatrix(ComplexMatrix(rho / total));
}

}  // namespace

// ---------------------------------------------------------------------------

ClassicalParams::ClassicalParams(std::initializer_list<std::pair<std::string, ParamValue>> entries) {
    for (const auto& [k, v] : entries) add(k, v);
}

void ClassicalParams::add(std::string name, ParamValue value) {
    require(find(name) == nullptr, ErrorKind::InvalidInput, "ClassicalParams: duplicate name '" + name + "'");
    entries_.emplace_back(std::move(name), std::move(value));
}

const ParamValue* ClassicalParams::find(const std::string& name) const {
    for (const auto& [k, v] : entries_)
        if (k == name) return &v;
    return nullptr;
}

double ClassicalParams::real(const std::string& name) const {
    const ParamValue* v = find(name);
    require(v != nullptr, ErrorKind::InvalidInput, "ClassicalParams: no parameter '" + name + "'");
    if (const auto* d = std::get_if<double>(v)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
    fail(ErrorKind::InvalidInput, "ClassicalParams: parameter '" + name + "' is a label, not a number");
}

// ---------------------------------------------------------------------------

BoxModel BoxModel::linear(Eigen::Index dim_in, Eigen::Index dim_out, ChannelFamily family) {
    require(static_cast<bool>(family), ErrorKind::InvalidInput, "BoxModel::linear: empty channel family");
    return BoxModel(LinearBox{std::move(family)}, dim_in, dim_out);
}

BoxModel BoxModel::linear(const QuantumChannel& channel) {
    return linear(channel.dim_in(), channel.dim_out(), [channel](const ClassicalParams&) { return channel; });
}

BoxModel BoxModel::nonlinear_bloch(double kappa, const ComplexMatrix& pre, const ComplexMatrix& post) {
    require(kappa > 0.0, ErrorKind::InvalidInput, "NonlinearBloch: kappa must be > 0");
    check_unitary(pre, "NonlinearBloch pre");
    check_unitary(post, "NonlinearBloch post");
    return BoxModel(NonlinearBlochBox{kappa, pre, post}, 2, 2);
}

BoxModel BoxModel::collapse_nonlinear(std::vector<PureState> basis, double kappa, const ComplexMatrix& pre,
                                      const ComplexMatrix& post) {
    require(kappa > 0.0, ErrorKind::InvalidInput, "CollapseNonlinear: kappa must be > 0");
    check_unitary(pre, "CollapseNonlinear pre");
    check_unitary(post, "CollapseNonlinear post");
    require(basis.size() == 2, ErrorKind::InvalidInput, "CollapseNonlinear: basis must have 2 qubit states");
    ComplexMatrix cols(2, 2);
    for (Eigen::Index k = 0; k < 2; ++k) {
        require(basis[static_cast<std::size_t>(k)].dim() == 2, ErrorKind::InvalidShape,
                "CollapseNonlinear: basis states must be qubits");
        cols.col(k) = basis[static_cast<std::size_t>(k)].amplitudes();
    }
    require(approx_equal(cols.adjoint() * cols, pauli::I(), 1e-10), ErrorKind::InvalidInput,
            "CollapseNonlinear: basis is not orthonormal");
    return BoxModel(CollapseNonlinearBox{std::move(basis), kappa, pre, post}, 2, 2);
}

QuantumChannel BoxModel::channel(const ClassicalParams& p) const {
    const auto* lin = std::get_if<LinearBox>(&kind_);
    require(lin != nullptr, ErrorKind::InvalidInput, "BoxModel::channel: box is not linear");
    QuantumChannel c = lin->family(p);
    require(c.dim_in() == dim_in_ && c.dim_out() == dim_out_, ErrorKind::InvalidShape,
            "BoxModel: channel family returned wrong dimensions");
    return c;
}

// ---------------------------------------------------------------------------

double g_kappa(double theta, double kappa) {
    // Evaluate near the south pole through g(pi - t) = pi - g(t), where sin(t/2) is exact.
    if (theta > std::numbers::pi / 2) return std::numbers::pi - g_kappa(std::numbers::pi - theta, kappa);
    return 2.0 * std::atan2(std::pow(std::sin(theta / 2.0), kappa), std::pow(std::cos(theta / 2.0), kappa));
}

PureState nonlinear_bloch_map(const NonlinearBlochBox& box, const PureState& psi) {
    require(psi.dim() == 2, ErrorKind::InvalidShape, "NonlinearBloch: input is not a qubit");
    const ComplexVector v = box.pre * psi.amplitudes();
    const double a = std::abs(v(0)), b = std::abs(v(1));
    // tan(theta'/2) = tan(theta/2)^kappa, i.e. amplitudes a^kappa and b^kappa.
    const double phase = (a > 0.0 && b > 0.0) ? std::arg(v(1)) - std::arg(v(0)) : 0.0;
    ComplexVector w(2);
    w << std::pow(a, box.kappa), std::polar(std::pow(b, box.kappa), phase);
    w.normalize();
    return PureState::normalized(box.post * w);
}

std::vector<Branch> output_branches(const BoxModel& b, const PureState& psi, const ClassicalParams& p) {
    check_input(b, psi.dim(), "probe");
    return std::visit(
        Overloaded{
            [&](const LinearBox&) {
                std::vector<Branch> out;
                for (const auto& k : kraus_from_choi(b.channel(p))) {
                    const ComplexVector v = k * psi.amplitudes();
                    const double w = v.squaredNorm();
                    if (w > kBranchDrop) out.push_back({w, PureState::normalized(v)});
                }
                return out;
            },
            [&](const NonlinearBlochBox& nl) { return std::vector<Branch>{{1.0, nonlinear_bloch_map(nl, psi)}}; },
            [&](const CollapseNonlinearBox& c) {
                std::vector<Branch> out;
                for (const auto& basis_state : c.basis) {
                    const double w = std::norm(basis_state.amplitudes().dot(psi.amplitudes()));
                    if (w > kBranchDrop) out.push_back({w, nonlinear_bloch_map(bloch_part(c), basis_state)});
                }
                return out;
            },
            [&](const CompositeBox& comp) {
                std::vector<Branch> out;
                for (const auto& first : output_branches(*comp.first, psi, p))
                    for (const auto& second : output_branches(*comp.second, first.state, p))
                        if (first.weight * second.weight > kBranchDrop)
                            out.push_back({first.weight * second.weight, second.state});
                return out;
            },
        },
        b.kind());
}

std::vector<Branch> reference_branches(const BoxModel& b, const PureState& psi_joint, const ClassicalParams& p) {
    require(psi_joint.dim() % b.dim_in() == 0, ErrorKind::InvalidShape,
            "probe_with_reference: joint dimension is not a multiple of the box input dimension");
    const Eigen::Index r = psi_joint.dim() / b.dim_in();
    return std::visit(
        Overloaded{
            [&](const LinearBox&) {
                std::vector<Branch> out;
                const Eigen::Index m = b.dim_in(), n = b.dim_out();
                const ComplexVector& v = psi_joint.amplitudes();
                for (const auto& k : kraus_from_choi(b.channel(p))) {
                    ComplexVector u = ComplexVector::Zero(n * r);
                    for (Eigen::Index a = 0; a < n; ++a)
                        for (Eigen::Index i = 0; i < m; ++i) u.segment(a * r, r) += k(a, i) * v.segment(i * r, r);
                    const double w = u.squaredNorm();
                    if (w > kBranchDrop) out.push_back({w, PureState::normalized(u)});
                }
                return out;
            },
            [&](const NonlinearBlochBox& nl) { return collapse_joint(computational_basis(2), nl, psi_joint); },
            [&](const CollapseNonlinearBox& c) { return collapse_joint(c.basis, bloch_part(c), psi_joint); },
            [&](const CompositeBox& comp) {
                std::vector<Branch> out;
                for (const auto& first : reference_branches(*comp.first, psi_joint, p))
                    for (const auto& second : reference_branches(*comp.second, first.state, p))
                        if (first.weight * second.weight > kBranchDrop)
                            out.push_back({first.weight * second.weight, second.state});
                return out;
            },
        },
        b.kind());
}

PureState probe_pure(const BoxModel& b, const PureState& psi, const ClassicalParams& p, RngStream& rng) {
    const auto branches = output_branches(b, psi, p);
    std::vector<double> w;
    double total = 0.0;
    for (const auto& br : branches) total += br.weight;
    for (const auto& br : branches) w.push_back(br.weight / total);
    return branches[sample_index(w, rng)].state;
}

DensityMatrix output_density(const BoxModel& b, const PureState& psi, const ClassicalParams& p) {
    if (b.is_linear()) return apply_channel(b.channel(p), DensityMatrix(psi));
    return mixture(output_branches(b, psi, p), b.dim_out());
}

DensityMatrix ensemble_output_density(const BoxModel& b, const Ensemble& e, const ClassicalParams& p) {
    check_input(b, e.dim(), "ensemble_output_density");
    if (b.is_linear()) return apply_channel(b.channel(p), e.density());
    ComplexMatrix rho = ComplexMatrix::Zero(b.dim_out(), b.dim_out());
    for (const auto& m : e.members()) rho += m.probability * output_density(b, m.state, p).matrix();
    return DensityMatrix(rho);
}

DensityMatrix probe_with_reference(const BoxModel& b, const PureState& psi_joint, const ClassicalParams& p) {
    require(psi_joint.dim() % b.dim_in() == 0, ErrorKind::InvalidShape,
            "probe_with_reference: joint dimension is not a multiple of the box input dimension");
    const Eigen::Index r = psi_joint.dim() / b.dim_in();
    if (b.is_linear()) {
        // (E (x) id) through the Choi action on each reference block.
        const QuantumChannel c = b.channel(p);
        const Eigen::Index m = b.dim_in(), n = b.dim_out();
        const ComplexMatrix in = psi_joint.projector();
        ComplexMatrix out = ComplexMatrix::Zero(n * r, n * r);
        for (Eigen::Index s = 0; s < r; ++s)
            for (Eigen::Index t = 0; t < r; ++t) {
                ComplexMatrix block(m, m);
                for (Eigen::Index i = 0; i < m; ++i)
                    for (Eigen::Index j = 0; j < m; ++j) block(i, j) = in(i * r + s, j * r + t);
                const ComplexMatrix mapped = c.apply(block);
                for (Eigen::Index a = 0; a < n; ++a)
                    for (Eigen::Index bb = 0; bb < n; ++bb) out(a * r + s, bb * r + t) = mapped(a, bb);
            }
        return DensityMatrix(out);
    }
    return mixture(reference_branches(b, psi_joint, p), b.dim_out() * r);
}

BoxModel compose_boxes(const BoxModel& b1, const BoxModel& b2) {
    require(b1.dim_out() == b2.dim_in(), ErrorKind::InvalidShape, "compose_boxes: dimension mismatch");
    if (b1.is_linear() && b2.is_linear()) {
        auto f1 = std::get<LinearBox>(b1.kind()).family;
        auto f2 = std::get<LinearBox>(b2.kind()).family;
        return BoxModel::linear(b1.dim_in(), b2.dim_out(), [f1, f2](const ClassicalParams& p) {
            return compose_channels(f1(p), f2(p));
        });
    }
    return BoxModel(CompositeBox{std::make_shared<const BoxModel>(b1), std::make_shared<const BoxModel>(b2)},
                    b1.dim_in(), b2.dim_out());
}

Ensemble eigen_ensemble(const DensityMatrix& rho) {
    const auto e = eig_hermitian(rho.op());
    std::vector<EnsembleMember> members;
    double total = 0.0;
    for (Eigen::Index k = 0; k < e.values.size(); ++k)
        if (e.values(k) > kBranchDrop) total += e.values(k);
    for (Eigen::Index k = 0; k < e.values.size(); ++k)
        if (e.values(k) > kBranchDrop)
            members.push_back({e.values(k) / total, PureState::normalized(e.vectors.col(k))});
    return Ensemble(std::move(members));
}

DensityMatrix concatenate_tests_exact(const BoxModel& b1, const BoxModel& b2, const PureState& psi,
                                      const ClassicalParams& p) {
    require(b1.dim_out() == b2.dim_in(), ErrorKind::InvalidShape, "concatenate_tests: dimension mismatch");
    const DensityMatrix first = output_density(b1, psi, p);
    return ensemble_output_density(b2, eigen_ensemble(first), p);
}

DensityMatrix concatenate_tests(const BoxModel& b1, const BoxModel& b2, const PureState& psi, const ClassicalParams& p,
                                std::uint64_t shots, RngStream& rng) {
    require(b1.dim_out() == b2.dim_in(), ErrorKind::InvalidShape, "concatenate_tests: dimension mismatch");
    require(b1.dim_out() == 2 && b2.dim_out() == 2, ErrorKind::InvalidShape,
            "concatenate_tests: qubit boxes only");
    const TomographyRun run(MeasurementSet::pauli(1), shots);
    const DensityMatrix first = state_tomography(DensitySource(output_density(b1, psi, p)), run, rng);
    const DensityMatrix second_truth = ensemble_output_density(b2, eigen_ensemble(first), p);
    return state_tomography(DensitySource(second_truth), run, rng);
}

// ---------------------------------------------------------------------------

BoxPair BoxPair::qrac_oracle() { return BoxPair(QracOracle{}); }

BoxPair BoxPair::qrac_quantum(Povm alice, std::array<QuantumChannel, 4> bob, std::string strategy) {
    require(alice.size() == 4 && alice.dim() == 4, ErrorKind::InvalidInput,
            "QracQuantum: Alice's POVM needs 4 effects on a 4-dim space");
    for (const auto& c : bob)
        require(c.dim_in() == 2 && c.dim_out() == 2, ErrorKind::InvalidShape, "QracQuantum: Bob's channels must be qubit maps");
    return BoxPair(QracQuantum{std::move(alice), std::move(bob), std::move(strategy)});
}

BoxPair BoxPair::qrac_measure_prepare() {
    const Povm alice = Povm::projective(identity(4));
    auto bob_for = [](unsigned b) {
        return channels::measure_prepare({PureState::basis(2, (b >> 1) & 1u), PureState::basis(2, b & 1u)});
    };
    return qrac_quantum(alice, {bob_for(0), bob_for(1), bob_for(2), bob_for(3)}, "measure_prepare");
}

BoxPair BoxPair::qrac_blind() {
    const Povm alice = Povm::projective(identity(4));
    const QuantumChannel mixed = channels::replace(2, DensityMatrix::maximally_mixed(2));
    return qrac_quantum(alice, {mixed, mixed, mixed, mixed}, "blind");
}

BoxPair BoxPair::nsq(const QuantumChannel& lambda, Eigen::Index dim_a, Eigen::Index dim_b) {
    require(lambda.dim_in() == dim_a * dim_b && lambda.dim_out() == dim_a * dim_b, ErrorKind::InvalidShape,
            "NsqChannel: channel dimensions are not dim_a * dim_b");
    return BoxPair(NsqPair{lambda, dim_a, dim_b});
}

QracRound qrac_round(const BoxPair& pair, const PureState& psi0, const PureState& psi1, unsigned x, RngStream& rng) {
    require(psi0.dim() == 2 && psi1.dim() == 2, ErrorKind::InvalidShape, "qrac_round: inputs must be qubits");
    require(x <= 1, ErrorKind::InvalidInput, "qrac_round: x must be a bit");
    return std::visit(
        Overloaded{
            [&](const QracOracle&) {
                // Hidden state of the round: (psi0, psi1, a).
                const auto a = static_cast<unsigned>(rng.below(4));
                const auto b = static_cast<unsigned>(rng.below(4));
                const bool kept = a == b;
                const PureState& target = x == 0 ? psi0 : psi1;
                return QracRound{a, b, kept ? DensityMatrix(target) : DensityMatrix::maximally_mixed(2), kept};
            },
            [&](const QracQuantum& q) {
                const DensityMatrix joint(PureState(kron(psi0.amplitudes(), psi1.amplitudes())));
                const auto a = static_cast<unsigned>(sample_outcome(joint, q.alice, rng));
                const auto b = static_cast<unsigned>(rng.below(4));
                const DensityMatrix omega(PureState::basis(2, x));
                return QracRound{a, b, apply_channel(q.bob[b], omega), a == b};
            },
            [&](const NsqPair&) -> QracRound { fail(ErrorKind::InvalidInput, "qrac_round: pair is not a QRAC box"); },
        },
        pair.kind());
}

}  // namespace qdata
