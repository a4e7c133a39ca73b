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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdata/cli.hpp"
#include "qdata/error.hpp"
#include "qdata/harness.hpp"

namespace qdata {
namespace {

namespace fs = std::filesystem;

std::string scenario_error(const std::string& text) {
    try {
        parse_scenario_text(text);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Scenario);
        return e.what();
    }
    ADD_FAILURE() << "expected a scenario error";
    return "";
}

const char* kMinimal = R"({
  "schema_version": 1, "name": "min", "master_seed": 1,
  "box": {"kind": "linear", "channel": {"type": "identity", "dim": 2}},
  "detectors": [{"kind": "helstrom", "trials": 2000}]
})";

TEST(Scenario, MinimalParses) {
    const Scenario s = parse_scenario_text(kMinimal);
    EXPECT_EQ(s.name, "min");
    EXPECT_EQ(s.cell_count(), 1u);
    ASSERT_EQ(s.detectors.size(), 1u);
    EXPECT_EQ(s.detectors[0].settings["trials"], 2000);
    EXPECT_TRUE(s.detectors[0].settings.contains("theta1"));
}

TEST(Scenario, UnknownDetectorNamesField) {
    const auto msg = scenario_error(R"({"schema_version": 1, "name": "x", "master_seed": 1,
        "box": {"kind": "linear", "channel": {"type": "identity", "dim": 2}},
        "detectors": [{"kind": "helstrom"}, {"kind": "telepathy"}]})");
    EXPECT_NE(msg.find("scenario.detectors[1].kind"), std::string::npos) << msg;
    EXPECT_NE(msg.find("telepathy"), std::string::npos);
}

TEST(Scenario, UnknownKeysRejected) {
    EXPECT_NE(scenario_error(R"({"schema_version": 1, "name": "x", "master_seed": 1, "colour": 3,
        "box": {"kind": "linear", "channel": {"type": "identity", "dim": 2}},
        "detectors": [{"kind": "helstrom"}]})").find("scenario.colour"), std::string::npos);
    EXPECT_NE(scenario_error(R"({"schema_version": 1, "name": "x", "master_seed": 1,
        "box": {"kind": "linear", "channel": {"type": "identity", "dim": 2, "p": 1}},
        "detectors": [{"kind": "helstrom"}]})").find("scenario.box.channel.p"), std::string::npos);
    EXPECT_NE(scenario_error(R"({"schema_version": 1, "name": "x", "master_seed": 1,
        "box": {"kind": "linear", "channel": {"type": "identity", "dim": 2}},
        "detectors": [{"kind": "helstrom", "shots": 5}]})").find("scenario.detectors[0].shots"), std::string::npos);
}

TEST(Scenario, MalformedJsonReportsLine) {
    const auto msg = scenario_error("{\n  \"schema_version\": 1,\n  \"name\": oops\n}");
    EXPECT_NE(msg.find(":3:"), std::string::npos) << msg;
}

TEST(Scenario, GridIsCartesianInDeclarationOrder) {
    const Scenario s = parse_scenario_text(R"({"schema_version": 1, "name": "g", "master_seed": 1,
        "box": {"kind": "linear", "channel": {"type": "dephasing", "p": {"param": "energy"}}},
        "grid": [{"name": "energy", "values": [0.1, 0.2, 0.3]}, {"name": "angle", "values": ["a", "b"]}],
        "detectors": [{"kind": "ensemble_signalling"}]})");
    ASSERT_EQ(s.cell_count(), 6u);
    const std::vector<std::pair<double, std::string>> expect{{0.1, "a"}, {0.1, "b"}, {0.2, "a"},
                                                             {0.2, "b"}, {0.3, "a"}, {0.3, "b"}};
    for (std::size_t c = 0; c < 6; ++c) {
        const auto p = s.cell(c);
        EXPECT_EQ(p.real("energy"), expect[c].first);
        EXPECT_EQ(std::get<std::string>(*p.find("angle")), expect[c].second);
    }
}

TEST(Scenario, ValidationErrors) {
    // Grid too large.
    std::string big = R"({"schema_version": 1, "name": "g", "master_seed": 1,
        "box": {"kind": "linear", "channel": {"type": "identity", "dim": 2}}, "grid": [)";
    for (int a = 0; a < 3; ++a) {
        big += std::string(a ? "," : "") + R"({"name": "a)" + std::to_string(a) + R"(", "values": [)";
        for (int v = 0; v < 30; ++v) big += std::string(v ? "," : "") + std::to_string(v);
        big += "]}";
    }
    big += R"(], "detectors": [{"kind": "helstrom"}]})";
    EXPECT_NE(scenario_error(big).find("10000"), std::string::npos);
    // Parameter reference without a grid axis.
    EXPECT_NE(scenario_error(R"({"schema_version": 1, "name": "x", "master_seed": 1,
        "box": {"kind": "nonlinear_bloch", "kappa": {"param": "k"}}, "detectors": [{"kind": "helstrom"}]})")
                  .find("no grid axis named 'k'"),
              std::string::npos);
    // Box detector on a pair.
    EXPECT_NE(scenario_error(R"({"schema_version": 1, "name": "x", "master_seed": 1,
        "pair": {"kind": "qrac_oracle"}, "detectors": [{"kind": "helstrom"}]})").find("needs a box"),
              std::string::npos);
    // Both box and pair.
    EXPECT_NE(scenario_error(R"({"schema_version": 1, "name": "x", "master_seed": 1,
        "pair": {"kind": "qrac_oracle"}, "box": {"kind": "nonlinear_bloch", "kappa": 2},
        "detectors": [{"kind": "qrac"}]})").find("exactly one"),
              std::string::npos);
    EXPECT_NE(scenario_error(R"({"schema_version": 1, "name": "x", "master_seed": 1,
        "box": {"kind": "nonlinear_bloch", "kappa": 2},
        "detectors": [{"kind": "concatenation_gap"}]})").find("compose box"),
              std::string::npos);
    EXPECT_NE(scenario_error(R"({"schema_version": 2, "name": "x", "master_seed": 1,
        "pair": {"kind": "qrac_oracle"}, "detectors": [{"kind": "qrac"}]})").find("schema_version"),
              std::string::npos);
}

TEST(Scenario, BuildsComplexMatrices) {
    const Scenario s = parse_scenario_text(R"({"schema_version": 1, "name": "u", "master_seed": 1,
        "box": {"kind": "linear", "channel": {"type": "unitary", "matrix": [[0, [0, -1]], [[0, 1], 0]]}},
        "detectors": [{"kind": "ensemble_signalling"}]})");
    const auto c = build_box(s.box, s.cell(0)).channel({});
    EXPECT_LT(max_abs_diff(c.choi().matrix(), channels::unitary(pauli::Y()).choi().matrix()), 1e-15);
}

TEST(Scenario, ShippedScenariosParse) {
    int n = 0;
    for (const auto& entry : fs::directory_iterator(QDATA_SCENARIO_DIR)) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW(parse_scenario(entry.path())) << entry.path();
        ++n;
    }
    EXPECT_GE(n, 5);
}

// ---------------------------------------------------------------------------

HarnessOptions fixed(int threads = 1) {
    HarnessOptions o;
    o.exec = threads == 1 ? Exec::serial() : Exec::parallel(threads);
    o.timestamp = "2000-01-01T00:00:00Z";
    return o;
}

const char* kNull = R"({
  "schema_version": 1, "name": "null", "master_seed": 99,
  "box": {"kind": "linear", "channel": {"type": "identity", "dim": 2}},
  "grid": [{"name": "energy", "values": [1, 2, 3, 4]}],
  "detectors": [
    {"kind": "helstrom", "trials": 20000},
    {"kind": "ensemble_signalling"},
    {"kind": "basis_invariance", "shots_per_setting": 5000, "calibration_replications": 20},
    {"kind": "ancilla_consistency", "shots_per_setting": 5000, "calibration_replications": 20}
  ]
})";

TEST(Harness, NullScenarioNeverPostQuantum) {
    const Json r = run_scenario(parse_scenario_text(kNull), fixed());
    ASSERT_EQ(r["cells"].size(), 4u);
    for (const auto& cell : r["cells"]) {
        EXPECT_TRUE(cell["error"].is_null());
        for (const auto& d : cell["detectors"]) EXPECT_NE(d["verdict"], "post-quantum") << d["kind"];
        const auto& h = cell["detectors"][0];
        EXPECT_LT(std::abs(h["statistic"].get<double>() - h["threshold"].get<double>()), 3 * h["std_error"].get<double>());
        EXPECT_EQ(cell["detectors"][1]["verdict"], "quantum-consistent");
    }
    for (const auto& row : r["summary"]) EXPECT_EQ(row["counts"]["post-quantum"], 0);
}

TEST(Harness, KappaSweepVerdicts) {
    const Json r = run_scenario(parse_scenario_text(R"({"schema_version": 1, "name": "k", "master_seed": 7,
        "box": {"kind": "nonlinear_bloch", "kappa": {"param": "kappa"}},
        "grid": [{"name": "kappa", "values": [1, 2, 4]}],
        "detectors": [{"kind": "helstrom", "trials": 100000}]})"),
                                fixed());
    EXPECT_NE(r["cells"][0]["detectors"][0]["verdict"], "post-quantum");
    EXPECT_EQ(r["cells"][2]["detectors"][0]["verdict"], "post-quantum");
    EXPECT_EQ(r["cells"][2]["params"]["kappa"], 4);
}

TEST(Harness, DeterministicAcrossRunsAndThreads) {
    const Scenario s = parse_scenario_text(kNull);
    const std::string one = run_scenario(s, fixed(1)).dump();
    EXPECT_EQ(one, run_scenario(s, fixed(1)).dump());
    EXPECT_EQ(one, run_scenario(s, fixed(2)).dump());
    EXPECT_EQ(one, run_scenario(s, fixed(8)).dump());
    HarnessOptions other = fixed();
    other.seed = 100;
    EXPECT_NE(one, run_scenario(s, other).dump());
}

TEST(Harness, FailingCellIsIsolated) {
    const Json r = run_scenario(parse_scenario_text(R"({"schema_version": 1, "name": "bad", "master_seed": 1,
        "box": {"kind": "linear", "channel": {"type": "amplitude_damping", "gamma": {"param": "g"}}},
        "grid": [{"name": "g", "values": [0.2, 1.5, 0.4]}],
        "detectors": [{"kind": "helstrom", "trials": 1000}]})"),
                                fixed());
    EXPECT_TRUE(r["cells"][0]["error"].is_null());
    EXPECT_FALSE(r["cells"][1]["error"].is_null());
    EXPECT_EQ(r["cells"][1]["error"]["kind"], "invalid-channel");
    EXPECT_TRUE(r["cells"][2]["error"].is_null());
    EXPECT_EQ(r["summary"][0]["counts"]["error"], 1);
}

TEST(Harness, FailingDetectorIsIsolated) {
    // Helstrom needs a qubit input; the swap box is two-qubit.
    const Json r = run_scenario(parse_scenario_text(R"({"schema_version": 1, "name": "d", "master_seed": 1,
        "box": {"kind": "linear", "channel": {"type": "swap", "dim": 2}},
        "detectors": [{"kind": "helstrom", "trials": 1000}, {"kind": "basis_invariance", "shots_per_setting": 500,
                       "deltas": [0.0, 0.5], "calibration_replications": 5}]})"),
                                fixed());
    const auto& dets = r["cells"][0]["detectors"];
    EXPECT_EQ(dets[0]["verdict"], "error");
    EXPECT_NE(dets[1]["verdict"], "error");
}

TEST(Harness, SampleAccounting) {
    const Json r = run_scenario(parse_scenario_text(kNull), fixed());
    for (const auto& cell : r["cells"]) {
        EXPECT_EQ(cell["samples"]["generated"], cell["samples"]["attributed"]);
        // helstrom 2e4 trials; 3 deltas x 4 probes x 3 settings x 5000;
        // direct 4 x 3 x 5000 plus ancilla 9 x 5000.
        EXPECT_EQ(cell["samples"]["generated"], 20000 + 180000 + 60000 + 45000);
    }
}

TEST(Harness, ReportShape) {
    const Json r = run_scenario(parse_scenario_text(kMinimal), fixed());
    EXPECT_EQ(r["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(r["scenario"]["name"], "min");
    EXPECT_EQ(r["provenance"]["timestamp"], "2000-01-01T00:00:00Z");
    EXPECT_EQ(r["provenance"]["seed"], 1);
    const std::string table = summarize_report(r);
    EXPECT_NE(table.find("helstrom"), std::string::npos);
    const Json m = matrix_to_json(pauli::Y());
    EXPECT_EQ(m["data"][1], Json::array({0.0, -1.0}));
}

TEST(Harness, PairScenarios) {
    const Json q = run_scenario(parse_scenario_text(R"({"schema_version": 1, "name": "q", "master_seed": 3,
        "pair": {"kind": "qrac_oracle"}, "detectors": [{"kind": "qrac", "rounds": 20000}]})"),
                                fixed());
    EXPECT_EQ(q["cells"][0]["detectors"][0]["verdict"], "post-quantum");
    const Json n = run_scenario(parse_scenario_text(R"({"schema_version": 1, "name": "n", "master_seed": 3,
        "pair": {"kind": "nsq", "channel": {"type": "swap", "dim": 2}, "dims": [2, 2]},
        "detectors": [{"kind": "nsq_measure"}]})"),
                                fixed());
    EXPECT_NEAR(n["cells"][0]["detectors"][0]["statistic"].get<double>(), 1.0, 1e-12);
}

// ---------------------------------------------------------------------------

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "qdata");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_timestamp(std::string s) {
    Json j = Json::parse(s);
    j["provenance"].erase("timestamp");
    return j.dump();
}

TEST(Cli, MissingFileExitsOne) {
    std::string err;
    EXPECT_EQ(cli({"run", "missing.file"}, nullptr, &err), kExitScenarioError);
    EXPECT_NE(err.find("not found"), std::string::npos) << err;
}

TEST(Cli, UsageErrorsPrintSynopsis) {
    std::string err;
    EXPECT_EQ(cli({}, nullptr, &err), kExitScenarioError);
    EXPECT_NE(err.find("Usage"), std::string::npos);
    EXPECT_EQ(cli({"run"}, nullptr, &err), kExitScenarioError);
    EXPECT_EQ(cli({"demo", "nope"}, nullptr, &err), kExitScenarioError);
    EXPECT_EQ(cli({"run", "x.json", "--threads", "-3"}), kExitScenarioError);
    EXPECT_EQ(cli({"--help"}), kExitOk);
}

TEST(Cli, DemoGisinPrintsStatistic) {
    std::string out;
    EXPECT_EQ(cli({"demo", "gisin"}, &out), kExitOk);
    EXPECT_NE(out.find("statistic="), std::string::npos);
}

TEST(Cli, RunWithSeedIsDeterministic) {
    const fs::path dir = fs::temp_directory_path() / "qdata_cli_test";
    fs::create_directories(dir);
    const fs::path scenario = dir / "s.json";
    std::ofstream(scenario) << kMinimal;
    const auto a = (dir / "a.json").string(), b = (dir / "b.json").string();
    ASSERT_EQ(cli({"run", scenario.string(), "--out", a, "--seed", "7"}), kExitOk);
    ASSERT_EQ(cli({"run", scenario.string(), "--out", b, "--seed", "7", "--threads", "3"}), kExitOk);
    EXPECT_EQ(without_timestamp(read_file(a)), without_timestamp(read_file(b)));
    EXPECT_EQ(Json::parse(read_file(a))["provenance"]["seed"], 7);
    std::string out;
    EXPECT_EQ(cli({"report", "summarize", a}, &out), kExitOk);
    EXPECT_NE(out.find("helstrom"), std::string::npos);
    std::ofstream(dir / "junk.json") << "{not json";
    EXPECT_EQ(cli({"report", "summarize", (dir / "junk.json").string()}), kExitScenarioError);
    std::ofstream(dir / "bad.json") << R"({"schema_version": 1})";
    EXPECT_EQ(cli({"run", (dir / "bad.json").string()}), kExitScenarioError);
    fs::remove_all(dir);
}

TEST(Cli, RunToStdout) {
    const fs::path p = fs::temp_directory_path() / "qdata_cli_stdout.json";
    std::ofstream(p) << kMinimal;
    std::string out;
    EXPECT_EQ(cli({"run", p.string()}, &out), kExitOk);
    EXPECT_EQ(Json::parse(out)["scenario"]["name"], "min");
    fs::remove(p);
}

}  // namespace
}  // namespace qdata
