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

#include <complex>
#include <cstdint>
#include <optional>
#include <random>

namespace qdata {

/// SplitMix64 finalizer. Stable across platforms; used for every seed
/// derivation in the library.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds an ordered list of words into one seed: h = mix64(h ^ w) per word.
/// The harness derives (master_seed, cell, detector, block) streams with it.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept;

/// Deterministic random stream keyed by (seed, stream id).
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions (uniform doubles, Box-Muller normals) are
/// implemented here rather than via <random> distribution objects, whose
/// algorithms are implementation-defined.
class RngStream {
 public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    bool bit() { return (engine_() >> 63) != 0; }
    double normal();
    /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal();

    /// Child stream for parallel block `index`. Consumes nothing from this
    /// stream, so children can be created in any order.
    RngStream child(std::uint64_t index) const;

    /// Draws one word and returns an independent stream rooted at it. Use
    /// this before spawning children so repeated calls get fresh families.
    RngStream fork() { return RngStream(engine_(), stream_id_); }

 private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

}  // namespace qdata
