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

#include "qdata/harness.hpp"

#include <chrono>
#include <ctime>
#include <exception>
#include <iomanip>
#include <map>
#include <sstream>

#include "qdata/detectors.hpp"
#include "qdata/error.hpp"

namespace qdata {

namespace {

constexpr std::uint64_t kCalibrationTag = 0xca1b0000ca1b0000ULL;

struct DetectorOutcome {
    std::optional<TestVerdict> verdict;
    std::uint64_t samples = 0;
    Json objects = Json::object();
};

Json error_record(const std::exception_ptr& ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const Error& e) {
        const char* kind = "internal";
        switch (e.kind()) {
            case ErrorKind::InvalidShape: kind = "invalid-shape"; break;
            case ErrorKind::InvalidInput: kind = "invalid-input"; break;
            case ErrorKind::InvalidChannel: kind = "invalid-channel"; break;
            case ErrorKind::Scenario: kind = "scenario"; break;
        }
        return Json{{"kind", kind}, {"message", e.what()}};
    } catch (const std::exception& e) {
        return Json{{"kind", "internal"}, {"message", e.what()}};
    }
}

Json params_to_json(const ClassicalParams& p) {
    Json out = Json::object();
    for (const auto& [name, value] : p.entries()) std::visit([&](const auto& v) { out[name] = v; }, value);
    return out;
}

unsigned qubits_for(Eigen::Index dim) {
    unsigned q = 0;
    while ((Eigen::Index{1} << q) < dim) ++q;
    require((Eigen::Index{1} << q) == dim, ErrorKind::InvalidShape, "tomography needs a power-of-two dimension");
    return q;
}

TomographyRun qubit_run(Eigen::Index dim, const Json& settings, const Exec& exec) {
    return TomographyRun(MeasurementSet::pauli(qubits_for(dim)), settings["shots_per_setting"].get<std::uint64_t>(),
                         Estimator::LinearInversionProject, exec);
}

std::vector<double> deltas_of(const Json& settings) { return settings["deltas"].get<std::vector<double>>(); }

Json calibration_json(const NullCalibration& c) {
    return Json{{"threshold", c.threshold}, {"std_error", c.std_error}, {"replications", c.samples.size()}};
}

// Null calibrations depend on the detector settings and the box dimension
// only, so they are computed once and shared across cells.
struct CalibrationSlot {
    std::optional<NullCalibration> value;
    std::exception_ptr error;
};
using CalibrationKey = std::pair<std::size_t, Eigen::Index>;

CalibrationSlot calibrate(const DetectorSpec& d, std::size_t detector, Eigen::Index dim, std::uint64_t seed,
                          const Exec& exec) {
    CalibrationSlot slot;
    try {
        RngStream rng(derive_seed({seed, kCalibrationTag, detector, static_cast<std::uint64_t>(dim)}), 0);
        const auto reps = d.settings["calibration_replications"].get<std::size_t>();
        if (d.kind == DetectorKind::BasisInvariance)
            slot.value = calibrate_basis_invariance(dim, deltas_of(d.settings), qubit_run(dim, d.settings, exec), rng, reps);
        else
            slot.value = calibrate_ancilla_consistency(qubit_run(2, d.settings, exec), rng, reps);
    } catch (...) {
        slot.error = std::current_exception();
    }
    return slot;
}

DetectorOutcome run_box_detector(const DetectorSpec& d, const BoxModel& box, const ClassicalParams& p,
                                 RngStream& rng, const Exec& exec, const CalibrationSlot* cal) {
    DetectorOutcome out;
    const Json& s = d.settings;
    switch (d.kind) {
        case DetectorKind::Helstrom: {
            require(box.dim_in() == 2, ErrorKind::InvalidShape, "helstrom: qubit box required");
            const auto setup = HelstromSetup::equal_priors_bloch(s["theta1"].get<double>(), s["theta2"].get<double>());
            const auto trials = s["trials"].get<std::uint64_t>();
            out.verdict = helstrom_test(box, setup, p, trials, rng, exec);
            out.samples = trials;
            out.objects["bound"] = setup.bound();
            break;
        }
        case DetectorKind::EnsembleSignalling:
            require(box.dim_in() == 2, ErrorKind::InvalidShape, "ensemble_signalling: qubit box required");
            out.verdict = ensemble_signalling_test(box, states::gisin_z(), states::gisin_x(), p);
            out.objects["output_z"] = matrix_to_json(ensemble_output_density(box, states::gisin_z(), p).matrix());
            out.objects["output_x"] = matrix_to_json(ensemble_output_density(box, states::gisin_x(), p).matrix());
            break;
        case DetectorKind::BasisInvariance: {
            if (cal->error) std::rethrow_exception(cal->error);
            const auto r = basis_invariance_analysis(box, p, deltas_of(s), qubit_run(box.dim_out(), s, exec), rng,
                                                     cal->value);
            out.verdict = r.verdict;
            Json chois = Json::array();
            for (const auto& pr : r.processes) {
                out.samples += pr.shots;
                chois.push_back(Json{{"choi", matrix_to_json(pr.choi.matrix())}, {"cptp_residual", pr.cptp_residual}});
            }
            out.objects["processes"] = std::move(chois);
            out.objects["calibration"] = calibration_json(r.calibration);
            break;
        }
        case DetectorKind::AncillaConsistency: {
            if (cal->error) std::rethrow_exception(cal->error);
            const auto r = ancilla_consistency_analysis(box, p, qubit_run(2, s, exec), rng, cal->value);
            out.verdict = r.verdict;
            out.samples = r.direct.shots + r.ancilla.shots;
            out.objects["direct_choi"] = matrix_to_json(r.direct.choi.matrix());
            out.objects["ancilla_choi"] = matrix_to_json(r.ancilla.choi.matrix());
            out.objects["trace_distance"] = r.trace_distance;
            out.objects["calibration"] = calibration_json(r.calibration);
            break;
        }
        case DetectorKind::ConcatenationGap: {
            const auto& chain = std::get<CompositeBox>(box.kind());
            const PureState psi = PureState::bloch(s["theta"].get<double>(), s["phi"].get<double>());
            const auto shots = s["shots_per_setting"].get<std::uint64_t>();
            const auto r = concatenation_gap_analysis(*chain.first, *chain.second, psi, p, shots, rng,
                                                      s["calibration_replications"].get<std::size_t>(), exec);
            out.verdict = r.verdict;
            out.samples = 6 * shots;
            out.objects["exact_gap"] = r.exact_gap;
            out.objects["composed"] = matrix_to_json(r.composed.matrix());
            out.objects["concatenated"] = matrix_to_json(r.concatenated.matrix());
            out.objects["calibration"] = calibration_json(r.calibration);
            break;
        }
        default:
            fail(ErrorKind::Scenario, to_string(d.kind) + ": not a box detector");
    }
    return out;
}

DetectorOutcome run_pair_detector(const DetectorSpec& d, const BoxPair& pair, RngStream& rng, const Exec& exec) {
    DetectorOutcome out;
    if (d.kind == DetectorKind::Qrac) {
        const auto rounds = d.settings["rounds"].get<std::uint64_t>();
        const auto r = qrac_fidelity_estimate(pair, rounds, rng, exec);
        out.verdict = qrac_verdict(r);
        out.samples = rounds;
        out.objects = Json{{"f_hat", r.f_hat},
                           {"ci_halfwidth", r.ci_halfwidth},
                           {"kept_rounds", r.kept_rounds},
                           {"total_rounds", r.total_rounds}};
        return out;
    }
    const auto& nsq = std::get<NsqPair>(pair.kind());
    const auto r = nsq_signalling_measure(nsq.lambda, nsq.dim_a, nsq.dim_b, rng);
    // Maps with zero signalling are the measure-zero (anomalous) set.
    out.verdict = decide(r.signalling_measure, kSurveySignallingTol, 0.0, 0, Tail::Lower);
    out.objects = Json{{"a_to_b", r.a_to_b},
                       {"b_to_a", r.b_to_a},
                       {"sampled_violations", r.sampled_violations},
                       {"marginal_drift", r.marginal_drift}};
    return out;
}

Json verdict_json(const DetectorSpec& d, const DetectorOutcome& o) {
    const TestVerdict& v = *o.verdict;
    return Json{{"kind", to_string(d.kind)},
                {"verdict", to_string(v.verdict)},
                {"statistic", v.statistic},
                {"threshold", v.threshold},
                {"std_error", v.std_error},
                {"tail", v.tail == Tail::Upper ? "upper" : "lower"},
                {"n_trials", v.n_trials},
                {"samples", o.samples},
                {"objects", o.objects}};
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t detector) {
    return derive_seed({master_seed, cell, detector});
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json run_scenario(const Scenario& s, const HarnessOptions& options) {
    const std::uint64_t seed = options.seed.value_or(s.master_seed);
    const std::size_t n_cells = s.cell_count();
    const bool pair_mode = !s.pair.is_null();

    // Models per cell (construction can fail for individual cells).
    std::vector<ClassicalParams> params(n_cells);
    std::vector<std::optional<BoxModel>> boxes(n_cells);
    std::vector<std::optional<BoxPair>> pairs(n_cells);
    std::vector<std::exception_ptr> build_errors(n_cells);
    for_each_block(n_cells, options.exec, [&](std::size_t c) {
        params[c] = s.cell(c);
        try {
            if (pair_mode)
                pairs[c] = build_pair(s.pair, params[c]);
            else
                boxes[c] = build_box(s.box, params[c]);
        } catch (...) {
            build_errors[c] = std::current_exception();
        }
    });

    std::map<CalibrationKey, CalibrationSlot> calibrations;
    for (std::size_t di = 0; di < s.detectors.size(); ++di) {
        const auto& d = s.detectors[di];
        if (d.kind != DetectorKind::BasisInvariance && d.kind != DetectorKind::AncillaConsistency) continue;
        for (std::size_t c = 0; c < n_cells; ++c) {
            if (!boxes[c]) continue;
            const Eigen::Index dim = d.kind == DetectorKind::AncillaConsistency ? 2 : boxes[c]->dim_in();
            const CalibrationKey key{di, dim};
            if (!calibrations.count(key)) calibrations[key] = calibrate(d, di, dim, seed, options.exec);
        }
    }

    std::vector<Json> cells(n_cells);
    for_each_block(n_cells, options.exec, [&](std::size_t c) {
        Json cell{{"index", c}, {"params", params_to_json(params[c])}};
        std::uint64_t generated = 0, attributed = 0;
        Json results = Json::array();
        if (build_errors[c]) {
            cell["error"] = error_record(build_errors[c]);
        } else {
            for (std::size_t di = 0; di < s.detectors.size(); ++di) {
                const auto& d = s.detectors[di];
                RngStream rng(cell_seed(seed, c, di), 0);
                try {
                    DetectorOutcome o;
                    if (pair_mode) {
                        o = run_pair_detector(d, *pairs[c], rng, options.exec);
                    } else {
                        const CalibrationSlot* cal = nullptr;
                        if (d.kind == DetectorKind::BasisInvariance)
                            cal = &calibrations.at({di, boxes[c]->dim_in()});
                        else if (d.kind == DetectorKind::AncillaConsistency)
                            cal = &calibrations.at({di, 2});
                        o = run_box_detector(d, *boxes[c], params[c], rng, options.exec, cal);
                    }
                    generated += o.samples;
                    attributed += o.verdict->n_trials;
                    results.push_back(verdict_json(d, o));
                } catch (...) {
                    results.push_back(Json{{"kind", to_string(d.kind)}, {"verdict", "error"},
                                           {"error", error_record(std::current_exception())}});
                }
            }
            cell["error"] = nullptr;
        }
        cell["samples"] = Json{{"generated", generated}, {"attributed", attributed}};
        cell["detectors"] = std::move(results);
        cells[c] = std::move(cell);
    });

    Json summary = Json::array();
    for (std::size_t di = 0; di < s.detectors.size(); ++di) {
        Json counts{{"quantum-consistent", 0}, {"post-quantum", 0}, {"inconclusive", 0}, {"error", 0}};
        for (const auto& cell : cells) {
            if (!cell["error"].is_null()) {
                counts["error"] = counts["error"].get<int>() + 1;
                continue;
            }
            const auto v = cell["detectors"][di]["verdict"].get<std::string>();
            counts[v] = counts[v].get<int>() + 1;
        }
        summary.push_back(Json{{"detector", di}, {"kind", to_string(s.detectors[di].kind)}, {"counts", counts}});
    }

    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["scenario"] = s.source;
    report["provenance"] = Json{{"seed", seed},
                                {"version", QDATA_VERSION},
                                {"timestamp", options.timestamp.empty() ? utc_now() : options.timestamp}};
    report["cells"] = std::move(cells);
    report["summary"] = std::move(summary);
    return report;
}

std::string summarize_report(const Json& report) {
    require(report.is_object() && report.contains("schema_version") && report.contains("summary") &&
                report.contains("cells"),
            ErrorKind::Scenario, "report: missing schema_version, cells or summary");
    require(report["schema_version"] == kReportSchemaVersion, ErrorKind::Scenario, "report: unsupported schema_version");
    std::ostringstream os;
    const auto& prov = report["provenance"];
    os << "scenario: " << report["scenario"].value("name", "?") << "\n";
    os << "seed: " << prov.value("seed", std::uint64_t{0}) << "  version: " << prov.value("version", "?")
       << "  cells: " << report["cells"].size() << "\n";
    os << std::left << std::setw(24) << "detector" << std::right << std::setw(20) << "quantum-consistent"
       << std::setw(14) << "post-quantum" << std::setw(14) << "inconclusive" << std::setw(8) << "error" << "\n";
    for (const auto& row : report["summary"]) {
        const auto& c = row["counts"];
        os << std::left << std::setw(24) << row["kind"].get<std::string>() << std::right << std::setw(20)
           << c["quantum-consistent"].get<int>() << std::setw(14) << c["post-quantum"].get<int>() << std::setw(14)
           << c["inconclusive"].get<int>() << std::setw(8) << c["error"].get<int>() << "\n";
    }
    return os.str();
}

}  // namespace qdata
