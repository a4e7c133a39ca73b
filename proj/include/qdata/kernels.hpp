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

#include <omp.h>

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#include "qdata/rng.hpp"

namespace qdata {

enum class Backend { Serial, OpenMP };

/// How a data-parallel kernel runs. Results never depend on the choice:
/// work is cut into fixed blocks with per-block RNG streams, and partial
/// results are reduced in block order.
struct Exec {
    Backend backend = Backend::OpenMP;
    int threads = 0;  // 0: OpenMP default

    static Exec serial() { return {Backend::Serial, 1}; }
    static Exec parallel(int threads = 0) { return {Backend::OpenMP, threads}; }
};

/// Process-wide default used when callers do not pass an Exec.
Exec default_exec();
void set_default_threads(int threads);

inline constexpr std::uint64_t kBlockSize = 1u << 14;

inline std::size_t block_count(std::uint64_t n, std::uint64_t block = kBlockSize) {
    return static_cast<std::size_t>((n + block - 1) / block);
}

/// Runs f(0..n_blocks-1). The serial backend is the reference
/// implementation; the OpenMP backend must agree with it bit for bit.
template <class F>
void for_each_block(std::size_t n_blocks, const Exec& exec, F&& f) {
    if (exec.backend == Backend::Serial || n_blocks < 2 || exec.threads == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) f(b);
        return;
    }
    std::vector<std::exception_ptr> errors(n_blocks);
    const int threads = exec.threads > 0 ? exec.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long b = 0; b < static_cast<long long>(n_blocks); ++b) {
        try {
            f(static_cast<std::size_t>(b));
        } catch (...) {
            errors[static_cast<std::size_t>(b)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Multinomial shot counts by per-shot inverse-CDF sampling.
std::vector<std::uint64_t> sample_counts(const std::vector<double>& probabilities, std::uint64_t shots,
                                         RngStream& rng, const Exec& exec = default_exec());

}  // namespace qdata
