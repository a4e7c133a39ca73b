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

#include "qdata/kernels.hpp"

#include <algorithm>
#include <atomic>

#include "qdata/states.hpp"

namespace qdata {

namespace {
std::atomic<int> g_default_threads{0};
}

Exec default_exec() { return Exec::parallel(g_default_threads.load()); }

void set_default_threads(int threads) { g_default_threads.store(std::max(threads, 0)); }

std::vector<std::uint64_t> sample_counts(const std::vector<double>& probabilities, std::uint64_t shots,
                                         RngStream& rng, const Exec& exec) {
    const std::size_t k = probabilities.size();
    std::vector<double> cdf(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) cdf[i] = (acc += probabilities[i]);
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (probabilities[i] > 0.0) last_nonzero = i;

    const RngStream root = rng.fork();
    const std::size_t n_blocks = block_count(shots);
    std::vector<std::vector<std::uint64_t>> partial(n_blocks, std::vector<std::uint64_t>(k, 0));
    for_each_block(n_blocks, exec, [&](std::size_t b) {
        RngStream s = root.child(b);
        const std::uint64_t begin = b * kBlockSize;
        const std::uint64_t end = std::min<std::uint64_t>(shots, begin + kBlockSize);
        auto& local = partial[b];
        for (std::uint64_t i = begin; i < end; ++i) {
            const double u = s.uniform();
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const std::size_t idx = it == cdf.end() ? last_nonzero : static_cast<std::size_t>(it - cdf.begin());
            ++local[idx];
        }
    });
    std::vector<std::uint64_t> counts(k, 0);
    for (const auto& local : partial)
        for (std::size_t i = 0; i < k; ++i) counts[i] += local[i];
    return counts;
}

}  // namespace qdata
