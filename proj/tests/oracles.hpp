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

// Reference computations for the tests. Each one is written from first
// principles (closed forms, explicit Bloch-vector algebra, branch
// enumeration) and shares no code path with the library routine it checks.
// The frozen literals next to them were produced by the same formulas.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace qdata::oracle {

using Vec3 = Eigen::Vector3d;
using C2 = Eigen::Vector2cd;
using cd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Frozen values.
inline constexpr double kHelstromPi8 = 0.6913417161825449;        // overlap cos(pi/8), equal priors
inline constexpr double kTheta4AtPi4 = 0.05885750594708122;       // 2 atan(tan(pi/8)^4)
inline constexpr double kConcatChainDistance = 0.11883124939948855;  // dephasing(0.3) then kappa=4, theta=pi/4
inline constexpr double kQracMeasurePrepare = 2.0 / 3.0;          // Haar mean of sum_k |<k|psi>|^4
inline constexpr double kHelstromKappa6 = 0.9921424873199205;  // kappa=6 outputs of theta = pi/2 -+ pi/8

/// Equal-prior Helstrom bound from the overlap of two pure states.
inline double helstrom_equal_priors(double overlap_abs) {
    return 0.5 * (1.0 + std::sqrt(1.0 - overlap_abs * overlap_abs));
}

/// The Bloch-angle map exactly as written: 2 arctan(tan(theta/2)^kappa).
inline double g(double theta, double kappa) {
    if (theta >= kPi) return kPi;
    return 2.0 * std::atan(std::pow(std::tan(theta / 2.0), kappa));
}

/// Bloch vector of a (not necessarily normalized) qubit vector.
inline Vec3 bloch_of(const C2& v_in) {
    const C2 v = v_in / v_in.norm();
    const cd a = v(0), b = v(1);
    const cd coh = std::conj(a) * b;  // rho_10
    return {2.0 * coh.real(), 2.0 * coh.imag(), std::norm(a) - std::norm(b)};
}

/// Nonlinear Bloch map on a Bloch vector of a pure state.
inline Vec3 nl_bloch(const Vec3& r, double kappa) {
    const double theta = std::acos(std::clamp(r.z(), -1.0, 1.0));
    const double phi = std::atan2(r.y(), r.x());
    const double t = g(theta, kappa);
    return {std::sin(t) * std::cos(phi), std::sin(t) * std::sin(phi), std::cos(t)};
}

inline double qubit_trace_distance(const Vec3& r, const Vec3& s) { return 0.5 * (r - s).norm(); }

/// Compose-vs-concatenate distance for dephasing(p) then kappa on
/// cos(theta/2)|0> + sin(theta/2)|1>, by explicit branch enumeration.
inline double concat_chain_distance(double p, double kappa, double theta) {
    const C2 psi(std::cos(theta / 2), std::sin(theta / 2));
    // Kraus branches sqrt(1-p) I and sqrt(p) Z act on psi; weights are the
    // branch norms.
    const C2 b0 = std::sqrt(1 - p) * psi;
    const C2 b1 = std::sqrt(p) * C2(psi(0), -psi(1));
    const Vec3 joint = b0.squaredNorm() * nl_bloch(bloch_of(b0), kappa) + b1.squaredNorm() * nl_bloch(bloch_of(b1), kappa);
    // Split: intermediate Bloch vector, then its eigen-ensemble (+-r_hat).
    const Vec3 r(std::sin(theta) * (1 - 2 * p), 0.0, std::cos(theta));
    const double len = r.norm();
    const Vec3 u = r / len;
    const Vec3 split = 0.5 * (1 + len) * nl_bloch(u, kappa) + 0.5 * (1 - len) * nl_bloch(-u, kappa);
    return qubit_trace_distance(joint, split);
}

/// Normalized Choi of the qubit depolarizing channel (1-p) rho + p I/2:
/// (1-p) |Phi+><Phi+| + p I/4.
inline Eigen::Matrix4cd depolarizing_choi(double p) {
    Eigen::Vector4cd phi = Eigen::Vector4cd::Zero();
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    return (1 - p) * phi * phi.adjoint() + p * Eigen::Matrix4cd::Identity() / 4.0;
}

/// Success probability of the optimal measurement on two qubit pure states
/// with Bloch vectors r1, r2 (equal priors): 1/2 + |r1 - r2| / 4.
inline double helstrom_bloch(const Vec3& r1, const Vec3& r2) { return 0.5 + 0.25 * (r1 - r2).norm(); }

/// Least-squares slope of log(err) against log(n).
inline double log_slope(const std::vector<double>& n, const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(n[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace qdata::oracle
