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
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qdata/channels.hpp"
#include "qdata/linalg.hpp"
#include "qdata/rng.hpp"
#include "qdata/states.hpp"

namespace qdata {

using ParamValue = std::variant<double, std::int64_t, std::string>;

/// Ordered (name, value) list for one point of the parameter space.
class ClassicalParams {
 public:
    ClassicalParams() = default;
    ClassicalParams(std::initializer_list<std::pair<std::string, ParamValue>> entries);

    /// Throws InvalidInput on a duplicate name.
    void add(std::string name, ParamValue value);
    const ParamValue* find(const std::string& name) const;
    /// Numeric value (integers widen); throws if missing or a label.
    double real(const std::string& name) const;
    const std::vector<std::pair<std::string, ParamValue>>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

 private:
    std::vector<std::pair<std::string, ParamValue>> entries_;
};

using ChannelFamily = std::function<QuantumChannel(const ClassicalParams&)>;

class BoxModel;

struct LinearBox {
    ChannelFamily family;
};

/// Bloch-angle distortion theta -> g_kappa(theta) between two unitaries.
struct NonlinearBlochBox {
    double kappa;
    ComplexMatrix pre;
    ComplexMatrix post;
};

/// Von Neumann collapse onto `basis`, then the NonlinearBloch action.
struct CollapseNonlinearBox {
    std::vector<PureState> basis;
    double kappa;
    ComplexMatrix pre;
    ComplexMatrix post;
};

/// Sample-wise concatenation: `second` acts on each output branch of `first`.
struct CompositeBox {
    std::shared_ptr<const BoxModel> first;
    std::shared_ptr<const BoxModel> second;
};

class BoxModel {
 public:
    using Kind = std::variant<LinearBox, NonlinearBlochBox, CollapseNonlinearBox, CompositeBox>;

    static BoxModel linear(Eigen::Index dim_in, Eigen::Index dim_out, ChannelFamily family);
    static BoxModel linear(const QuantumChannel& channel);
    static BoxModel nonlinear_bloch(double kappa, const ComplexMatrix& pre = pauli::I(),
                                    const ComplexMatrix& post = pauli::I());
    static BoxModel collapse_nonlinear(std::vector<PureState> basis, double kappa,
                                       const ComplexMatrix& pre = pauli::I(),
                                       const ComplexMatrix& post = pauli::I());

    const Kind& kind() const noexcept { return kind_; }
    Eigen::Index dim_in() const noexcept { return dim_in_; }
    Eigen::Index dim_out() const noexcept { return dim_out_; }
    bool is_linear() const noexcept { return std::holds_alternative<LinearBox>(kind_); }
    /// Channel for `p`; only valid for linear boxes.
    QuantumChannel channel(const ClassicalParams& p) const;

 private:
    friend BoxModel compose_boxes(const BoxModel& b1, const BoxModel& b2);
    BoxModel(Kind kind, Eigen::Index dim_in, Eigen::Index dim_out)
        : kind_(std::move(kind)), dim_in_(dim_in), dim_out_(dim_out) {}

    Kind kind_;
    Eigen::Index dim_in_;
    Eigen::Index dim_out_;
};

struct Branch {
    double weight;
    PureState state;
};

/// g_kappa(theta) = 2 atan(tan(theta/2)^kappa) on [0, pi].
double g_kappa(double theta, double kappa);
PureState nonlinear_bloch_map(const NonlinearBlochBox& box, const PureState& psi);

/// Exact decomposition of a box's output on a pure input into weighted pure
/// branches. Linear boxes branch over the canonical Kraus set.
std::vector<Branch> output_branches(const BoxModel& b, const PureState& psi, const ClassicalParams& p);
/// Same for an input entangled with a reference held outside the box (box
/// factor first). Non-linear boxes collapse the box factor first.
std::vector<Branch> reference_branches(const BoxModel& b, const PureState& psi_joint, const ClassicalParams& p);

PureState probe_pure(const BoxModel& b, const PureState& psi, const ClassicalParams& p, RngStream& rng);
DensityMatrix ensemble_output_density(const BoxModel& b, const Ensemble& e, const ClassicalParams& p);
DensityMatrix output_density(const BoxModel& b, const PureState& psi, const ClassicalParams& p);
DensityMatrix probe_with_reference(const BoxModel& b, const PureState& psi_joint, const ClassicalParams& p);

BoxModel compose_boxes(const BoxModel& b1, const BoxModel& b2);

/// Tomography of b1's output, re-preparation of its eigen-ensemble as a
/// fresh uncorrelated input to b2, tomography of b2's output.
DensityMatrix concatenate_tests(const BoxModel& b1, const BoxModel& b2, const PureState& psi, const ClassicalParams& p,
                                std::uint64_t shots, RngStream& rng);
/// Infinite-shot limit of concatenate_tests.
DensityMatrix concatenate_tests_exact(const BoxModel& b1, const BoxModel& b2, const PureState& psi,
                                      const ClassicalParams& p);
/// Eigen-ensemble {lambda_k, v_k} of a density matrix (zero weights dropped).
Ensemble eigen_ensemble(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Correlated box pairs

struct QracOracle {};

struct QracQuantum {
    Povm alice;                           // on psi0 (x) psi1
    std::array<QuantumChannel, 4> bob;    // indexed by Bob's 2-bit input b
    std::string strategy;
};

struct NsqPair {
    QuantumChannel lambda;
    Eigen::Index dim_a;
    Eigen::Index dim_b;
};

class BoxPair {
 public:
    using Kind = std::variant<QracOracle, QracQuantum, NsqPair>;

    static BoxPair qrac_oracle();
    static BoxPair qrac_quantum(Povm alice, std::array<QuantumChannel, 4> bob, std::string strategy);
    /// Alice measures sigma_z (x) sigma_z; Bob prepares |b_x>.
    static BoxPair qrac_measure_prepare();
    /// Bob ignores everything and outputs I/2.
    static BoxPair qrac_blind();
    static BoxPair nsq(const QuantumChannel& lambda, Eigen::Index dim_a, Eigen::Index dim_b);

    const Kind& kind() const noexcept { return kind_; }
    bool is_qrac() const noexcept { return !std::holds_alternative<NsqPair>(kind_); }

 private:
    explicit BoxPair(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

struct QracRound {
    unsigned a;  // 2 bits: (bit for psi0) << 1 | (bit for psi1)
    unsigned b;
    DensityMatrix rho_out;
    bool kept;
};

/// One round of the random-access-code game with Bob's choice encoded as
/// omega_x = |x>.
QracRound qrac_round(const BoxPair& pair, const PureState& psi0, const PureState& psi1, unsigned x, RngStream& rng);

}  // namespace qdata
