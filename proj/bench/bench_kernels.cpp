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

// Serial reference versus OpenMP backend on the sampling-heavy kernels.
// Arg(0) selects the serial backend; Arg(n > 0) runs OpenMP with n threads.

#include <benchmark/benchmark.h>

#include <numbers>

#include "qdata/detectors.hpp"
#include "qdata/kernels.hpp"

namespace qdata {
namespace {

Exec exec_for(const benchmark::State& state) {
    const int t = static_cast<int>(state.range(0));
    return t == 0 ? Exec::serial() : Exec::parallel(t);
}

void BM_SampleCounts(benchmark::State& state) {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.15, 0.25};
    const Exec exec = exec_for(state);
    RngStream rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_counts(p, 1 << 22, rng, exec));
    state.SetItemsProcessed(state.iterations() * (1 << 22));
}

void BM_Helstrom(benchmark::State& state) {
    const double pi = std::numbers::pi;
    const auto setup = HelstromSetup::equal_priors_bloch(pi / 2 - pi / 8, pi / 2 + pi / 8);
    const BoxModel box = BoxModel::nonlinear_bloch(4.0);
    const Exec exec = exec_for(state);
    RngStream rng(2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(helstrom_test(box, setup, {}, 1 << 20, rng, exec));
    state.SetItemsProcessed(state.iterations() * (1 << 20));
}

void BM_Qrac(benchmark::State& state) {
    const BoxPair pair = BoxPair::qrac_measure_prepare();
    const Exec exec = exec_for(state);
    RngStream rng(3, 0);
    for (auto _ : state) benchmark::DoNotOptimize(qrac_fidelity_estimate(pair, 1 << 18, rng, exec));
    state.SetItemsProcessed(state.iterations() * (1 << 18));
}

void BM_AncillaCalibration(benchmark::State& state) {
    const Exec exec = exec_for(state);
    const TomographyRun run(MeasurementSet::pauli(1), 10000, Estimator::LinearInversionProject, exec);
    RngStream rng(4, 0);
    for (auto _ : state) benchmark::DoNotOptimize(calibrate_ancilla_consistency(run, rng, 16));
}

void BM_NsqSurvey(benchmark::State& state) {
    const Exec exec = exec_for(state);
    RngStream rng(5, 0);
    for (auto _ : state) benchmark::DoNotOptimize(nsq_random_survey(64, 2, 2, rng, {}, exec));
}

BENCHMARK(BM_SampleCounts)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Helstrom)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Qrac)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AncillaCalibration)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NsqSurvey)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qdata

BENCHMARK_MAIN();
