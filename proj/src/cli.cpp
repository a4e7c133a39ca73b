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

#include "qdata/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "qdata/detectors.hpp"
#include "qdata/error.hpp"
#include "qdata/harness.hpp"

namespace qdata {

namespace {

constexpr double kPi = std::numbers::pi;

void line(std::ostream& out, const std::string& label, const TestVerdict& v) {
    out << std::left << std::setw(34) << label << std::right << " statistic=" << std::setprecision(6)
        << v.statistic << "  threshold=" << v.threshold << "  se=" << v.std_error << "  -> " << to_string(v.verdict)
        << "\n";
}

void demo_gisin(std::uint64_t, const Exec&, std::ostream& out) {
    out << "Gisin pair: {1/2 |0>, 1/2 |1>} vs {1/2 |+>, 1/2 |->}\n";
    const ClassicalParams none;
    const auto z = states::gisin_z(), x = states::gisin_x();
    line(out, "linear depolarizing(0.3)", ensemble_signalling_test(BoxModel::linear(channels::depolarizing(2, 0.3)), z, x, none));
    line(out, "nonlinear_bloch(k=4, pre=Ry(pi/4))",
         ensemble_signalling_test(BoxModel::nonlinear_bloch(4.0, rotation_y(kPi / 4)), z, x, none));
    line(out, "collapse_nonlinear(z, k=4, Ry(pi/4))",
         ensemble_signalling_test(
             BoxModel::collapse_nonlinear({PureState::basis(2, 0), PureState::basis(2, 1)}, 4.0, rotation_y(kPi / 4)), z,
             x, none));
    // Antipodal pairs stay antipodal under the Bloch-angle map, so both
    // ensembles above always give I/2. A non-orthogonal pair does not.
    const double c = std::cos(kPi / 4);
    const Ensemble tilted(std::vector<EnsembleMember>{{0.5, PureState::bloch(kPi / 4, 0.0)}, {0.5, PureState::bloch(kPi / 4, kPi)}});
    const Ensemble poles(std::vector<EnsembleMember>{{(1 + c) / 2, PureState::basis(2, 0)}, {(1 - c) / 2, PureState::basis(2, 1)}});
    out << "\nTilted pair: {1/2 (pi/4, 0), 1/2 (pi/4, pi)} vs its eigen-ensemble\n";
    line(out, "nonlinear_bloch(k=4)", ensemble_signalling_test(BoxModel::nonlinear_bloch(4.0), tilted, poles, none));
}

void demo_helstrom(std::uint64_t seed, const Exec& exec, std::ostream& out) {
    const auto setup = HelstromSetup::equal_priors_bloch(kPi / 2 - kPi / 8, kPi / 2 + kPi / 8);
    out << "states at theta = pi/2 -+ pi/8, Helstrom bound " << std::setprecision(8) << setup.bound() << "\n";
    const ClassicalParams none;
    RngStream rng(seed, 1);
    line(out, "identity", helstrom_test(BoxModel::linear(channels::identity(2)), setup, none, 100000, rng, exec));
    line(out, "nonlinear_bloch(k=6)", helstrom_test(BoxModel::nonlinear_bloch(6.0), setup, none, 100000, rng, exec));
}

void demo_qrac(std::uint64_t seed, const Exec& exec, std::ostream& out) {
    out << "random-access-code fidelity, 1e5 rounds, quantum ceiling 5/6\n";
    RngStream rng(seed, 2);
    for (const auto& [name, pair] : {std::pair{"oracle", BoxPair::qrac_oracle()},
                                     std::pair{"measure-prepare", BoxPair::qrac_measure_prepare()},
                                     std::pair{"blind", BoxPair::qrac_blind()}}) {
        const auto r = qrac_fidelity_estimate(pair, 100000, rng, exec);
        out << std::left << std::setw(18) << name << std::right << " f=" << std::setprecision(6) << r.f_hat << " +- "
            << r.ci_halfwidth << "  kept " << r.kept_rounds << "/" << r.total_rounds << "  -> "
            << to_string(qrac_verdict(r).verdict) << "\n";
    }
}

void demo_nsq(std::uint64_t seed, const Exec& exec, std::ostream& out) {
    const auto swap = nsq_signalling_measure(channels::swap(2), 2, 2);
    const auto local = nsq_signalling_measure(
        tensor_channel(channels::amplitude_damping(0.4), channels::depolarizing(2, 0.2)), 2, 2);
    out << "SWAP signalling measure " << swap.signalling_measure << " (A->B " << swap.a_to_b << ", B->A "
        << swap.b_to_a << ")\n";
    out << "local product measure   " << local.signalling_measure << "\n";
    RngStream rng(seed, 3);
    line(out, "survey: 100 random channels", nsq_random_survey(100, 2, 2, rng, {}, exec));
    line(out, "survey: 100 product channels", nsq_random_survey(100, 2, 2, rng, {true, 0}, exec));
}

void demo_basis(std::uint64_t seed, const Exec& exec, std::ostream& out) {
    const TomographyRun run(MeasurementSet::pauli(1), 10000, Estimator::LinearInversionProject, exec);
    const std::vector<double> deltas{0.0, kPi / 5, kPi / 3};
    RngStream rng(seed, 4);
    const auto cal = calibrate_basis_invariance(2, deltas, run, rng, 20);
    out << "probe bases delta = 0, pi/5, pi/3; null 99th percentile " << cal.threshold << "\n";
    const ClassicalParams none;
    line(out, "linear depolarizing(0.3)",
         basis_invariance_analysis(BoxModel::linear(channels::depolarizing(2, 0.3)), none, deltas, run, rng, cal).verdict);
    line(out, "nonlinear_bloch(k=4)",
         basis_invariance_analysis(BoxModel::nonlinear_bloch(4.0), none, deltas, run, rng, cal).verdict);
}

void demo_ancilla(std::uint64_t seed, const Exec& exec, std::ostream& out) {
    const TomographyRun run(MeasurementSet::pauli(1), 20000, Estimator::LinearInversionProject, exec);
    RngStream rng(seed, 5);
    const auto cal = calibrate_ancilla_consistency(run, rng, 20);
    out << "direct vs ancilla-assisted Choi, null 99th percentile " << cal.threshold << "\n";
    const ClassicalParams none;
    line(out, "linear amplitude_damping(0.3)",
         ancilla_consistency_analysis(BoxModel::linear(channels::amplitude_damping(0.3)), none, run, rng, cal).verdict);
    line(out, "collapse_nonlinear(z, k=4)",
         ancilla_consistency_analysis(
             BoxModel::collapse_nonlinear({PureState::basis(2, 0), PureState::basis(2, 1)}, 4.0), none, run, rng, cal)
             .verdict);
    line(out, "nonlinear_bloch(k=4)",
         ancilla_consistency_analysis(BoxModel::nonlinear_bloch(4.0), none, run, rng, cal).verdict);
}

void demo_concat(std::uint64_t seed, const Exec&, std::ostream& out) {
    const ClassicalParams none;
    const BoxModel b1 = BoxModel::linear(channels::dephasing(0.3));
    const BoxModel b2 = BoxModel::nonlinear_bloch(4.0);
    const PureState psi = PureState::bloch(kPi / 4, 0.0);
    const DensityMatrix joint = output_density(compose_boxes(b1, b2), psi, none);
    const DensityMatrix split = concatenate_tests_exact(b1, b2, psi, none);
    RngStream rng(seed, 6);
    const DensityMatrix sampled = concatenate_tests(b1, b2, psi, none, 100000, rng);
    out << "chain: dephasing(0.3) then nonlinear_bloch(k=4), input theta = pi/4\n";
    out << "trace distance compose vs concatenate (exact)   " << trace_distance(joint, split) << "\n";
    out << "trace distance compose vs concatenate (1e5/set) " << trace_distance(joint, sampled) << "\n";
}

void demo_tomography(std::uint64_t seed, const Exec& exec, std::ostream& out) {
    const ClassicalParams none;
    const QuantumChannel dep = channels::depolarizing(2, 0.3);
    const BoxModel box = BoxModel::linear(dep);
    RngStream rng(seed, 7);
    out << "depolarizing(0.3), direct process tomography, N shots per Pauli setting\n";
    for (std::uint64_t n : {10000ULL, 1000000ULL}) {
        const TomographyRun run(MeasurementSet::pauli(1), n, Estimator::LinearInversionProject, exec);
        const auto pr = process_tomography_direct(box, none, canonical_probe_basis(2, 0.0), run, rng);
        out << "  N=" << n << "  normalized-Choi fidelity " << std::setprecision(6)
            << uhlmann_fidelity(pr.normalized_choi(), dep.normalized_choi()) << "  cptp residual " << pr.cptp_residual
            << "\n";
    }
}

using DemoFn = void (*)(std::uint64_t, const Exec&, std::ostream&);

const std::vector<std::pair<std::string, DemoFn>>& demos() {
    static const std::vector<std::pair<std::string, DemoFn>> d{
        {"gisin", demo_gisin},   {"helstrom", demo_helstrom}, {"qrac", demo_qrac},
        {"nsq", demo_nsq},       {"basis", demo_basis},       {"ancilla", demo_ancilla},
        {"concat", demo_concat}, {"tomography", demo_tomography}};
    return d;
}

int threads_default() {
    if (const char* env = std::getenv("QDATA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) return static_cast<int>(v);
    }
    return 0;
}

int report_error(std::ostream& err, const std::exception& e, int code) {
    err << "qdata: " << e.what() << "\n";
    return code;
}

}  // namespace

const std::vector<std::string>& demo_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : demos()) n.push_back(name);
        return n;
    }();
    return names;
}

void run_demo(const std::string& name, std::uint64_t seed, const Exec& exec, std::ostream& out) {
    for (const auto& [n, fn] : demos())
        if (n == name) return fn(seed, exec, out);
    std::string known;
    for (const auto& n : demo_names()) known += " " + n;
    fail(ErrorKind::Scenario, "unknown demo '" + name + "' (available:" + known + ")");
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Q-data box simulator: detectors for post-quantum dynamics", "qdata"};
    app.require_subcommand(1);
    int threads = threads_default();
    std::uint64_t seed = 0;
    std::string scenario_path, out_path, demo_name, report_path;

    auto* run = app.add_subcommand("run", "Run a scenario file and write a JSON report");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", out_path, "Report path (default: standard output)");
    auto* seed_opt = run->add_option("--seed", seed, "Override the scenario's master_seed");
    run->add_option("--threads", threads, "Worker threads (0: all; default from QDATA_THREADS)")
        ->check(CLI::NonNegativeNumber);

    auto* demo = app.add_subcommand("demo", "Run a packaged example");
    demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(demo_names()));
    demo->add_option("--seed", seed, "Seed (default 1)");
    demo->add_option("--threads", threads, "Worker threads")->check(CLI::NonNegativeNumber);

    auto* report = app.add_subcommand("report", "Inspect reports");
    report->require_subcommand(1);
    auto* summarize = report->add_subcommand("summarize", "Print the verdict table of a report");
    summarize->add_option("report", report_path, "Report JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code != 0) err << app.help();
        return code == 0 ? kExitOk : kExitScenarioError;
    }

    const Exec exec = threads == 1 ? Exec::serial() : Exec::parallel(threads);
    set_default_threads(threads);
    try {
        if (*run) {
            const Scenario s = parse_scenario(scenario_path);
            HarnessOptions options;
            options.exec = exec;
            if (*seed_opt) options.seed = seed;
            const Json report_doc = run_scenario(s, options);
            const std::string text = report_doc.dump(2) + "\n";
            if (out_path.empty()) {
                out << text;
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) fail(ErrorKind::Scenario, out_path + ": cannot open for writing");
                f << text;
                out << summarize_report(report_doc);
            }
        } else if (*demo) {
            run_demo(demo_name, seed == 0 ? 1 : seed, exec, out);
        } else {
            std::ifstream f(report_path, std::ios::binary);
            if (!f) fail(ErrorKind::Scenario, report_path + ": file not found or unreadable");
            Json doc;
            try {
                doc = Json::parse(f);
            } catch (const nlohmann::json::parse_error& e) {
                fail(ErrorKind::Scenario, report_path + ": malformed JSON (" + e.what() + ")");
            }
            out << summarize_report(doc);
        }
    } catch (const Error& e) {
        return report_error(err, e, e.kind() == ErrorKind::Scenario ? kExitScenarioError : kExitInternalError);
    } catch (const std::exception& e) {
        return report_error(err, e, kExitInternalError);
    }
    return kExitOk;
}

}  // namespace qdata
