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

#include "qdata/scenario.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qdata/error.hpp"

namespace qdata {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    fail(ErrorKind::Scenario, where + ": " + what);
}

std::string child_path(const std::string& path, const std::string& key) { return path + "." + key; }
std::string child_path(const std::string& path, std::size_t index) {
    return path + "[" + std::to_string(index) + "]";
}

// Structural validation; numeric ranges are left to the constructors so
// that one bad grid cell fails alone.
class Checker {
 public:
    explicit Checker(std::set<std::string> params) : params_(std::move(params)) {}

    void keys(const Json& obj, const std::string& path, std::initializer_list<const char*> required,
              std::initializer_list<const char*> optional = {}) const {
        if (!obj.is_object()) bad(path, "expected an object");
        std::set<std::string> allowed;
        for (const char* k : required) {
            allowed.insert(k);
            if (!obj.contains(k)) bad(path, std::string("missing required field '") + k + "'");
        }
        for (const char* k : optional) allowed.insert(k);
        for (const auto& [k, v] : obj.items())
            if (!allowed.count(k)) bad(child_path(path, k), "unknown field");
    }

    void string(const Json& v, const std::string& path) const {
        if (!v.is_string()) bad(path, "expected a string");
    }

    // Number literal or {"param": name}.
    void number(const Json& v, const std::string& path) const {
        if (v.is_number()) return;
        if (v.is_object()) {
            keys(v, path, {"param"});
            string(v["param"], child_path(path, "param"));
            const auto name = v["param"].get<std::string>();
            if (!params_.count(name)) bad(child_path(path, "param"), "no grid axis named '" + name + "'");
            return;
        }
        bad(path, "expected a number or {\"param\": name}");
    }

    void count(const Json& v, const std::string& path) const {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) bad(path, "expected a positive integer");
    }

    void complex(const Json& v, const std::string& path) const {
        if (v.is_number()) return;
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return;
        bad(path, "expected a number or [re, im]");
    }

    void matrix(const Json& v, const std::string& path) const {
        if (!v.is_array() || v.empty()) bad(path, "expected a non-empty array of rows");
        for (std::size_t r = 0; r < v.size(); ++r) {
            const auto rp = child_path(path, r);
            if (!v[r].is_array() || v[r].size() != v[0].size()) bad(rp, "rows must be arrays of equal length");
            for (std::size_t c = 0; c < v[r].size(); ++c) complex(v[r][c], child_path(rp, c));
        }
    }

    void unitary(const Json& v, const std::string& path) const {
        if (v.is_object() && v.contains("matrix")) {
            keys(v, path, {"matrix"});
            matrix(v["matrix"], child_path(path, "matrix"));
            return;
        }
        keys(v, path, {"gate"}, {"angle"});
        string(v["gate"], child_path(path, "gate"));
        const auto gate = v["gate"].get<std::string>();
        static const std::set<std::string> fixed{"identity", "hadamard", "x", "y", "z"};
        if (gate == "ry" || gate == "rz") {
            if (!v.contains("angle")) bad(path, "gate '" + gate + "' needs an 'angle'");
            number(v["angle"], child_path(path, "angle"));
        } else if (fixed.count(gate)) {
            if (v.contains("angle")) bad(child_path(path, "angle"), "gate '" + gate + "' takes no angle");
        } else {
            bad(child_path(path, "gate"), "unknown gate '" + gate + "'");
        }
    }

    void channel(const Json& v, const std::string& path) const {
        if (!v.is_object() || !v.contains("type")) bad(path, "channel needs a 'type'");
        string(v["type"], child_path(path, "type"));
        const auto type = v["type"].get<std::string>();
        if (type == "identity" || type == "swap") {
            keys(v, path, {"type", "dim"});
            count(v["dim"], child_path(path, "dim"));
        } else if (type == "depolarizing") {
            keys(v, path, {"type", "p"}, {"dim"});
            number(v["p"], child_path(path, "p"));
            if (v.contains("dim")) count(v["dim"], child_path(path, "dim"));
        } else if (type == "amplitude_damping") {
            keys(v, path, {"type", "gamma"});
            number(v["gamma"], child_path(path, "gamma"));
        } else if (type == "dephasing") {
            keys(v, path, {"type", "p"});
            number(v["p"], child_path(path, "p"));
        } else if (type == "unitary") {
            Json rest = v;
            rest.erase("type");
            unitary(rest, path);
        } else if (type == "random") {
            keys(v, path, {"type", "dim_in", "dim_out", "seed"}, {"env_dim"});
            count(v["dim_in"], child_path(path, "dim_in"));
            count(v["dim_out"], child_path(path, "dim_out"));
            if (!v["seed"].is_number_unsigned()) bad(child_path(path, "seed"), "expected an unsigned integer");
            if (v.contains("env_dim")) count(v["env_dim"], child_path(path, "env_dim"));
        } else if (type == "kraus") {
            keys(v, path, {"type", "operators"});
            const auto& ops = v["operators"];
            if (!ops.is_array() || ops.empty()) bad(child_path(path, "operators"), "expected a non-empty array");
            for (std::size_t i = 0; i < ops.size(); ++i) matrix(ops[i], child_path(child_path(path, "operators"), i));
        } else if (type == "product") {
            keys(v, path, {"type", "first", "second"});
            channel(v["first"], child_path(path, "first"));
            channel(v["second"], child_path(path, "second"));
        } else {
            bad(child_path(path, "type"), "unknown channel type '" + type + "'");
        }
    }

    void box(const Json& v, const std::string& path) const {
        if (!v.is_object() || !v.contains("kind")) bad(path, "box needs a 'kind'");
        string(v["kind"], child_path(path, "kind"));
        const auto kind = v["kind"].get<std::string>();
        if (kind == "linear") {
            keys(v, path, {"kind", "channel"});
            channel(v["channel"], child_path(path, "channel"));
        } else if (kind == "nonlinear_bloch" || kind == "collapse_nonlinear") {
            if (kind == "nonlinear_bloch")
                keys(v, path, {"kind", "kappa"}, {"pre", "post"});
            else
                keys(v, path, {"kind", "kappa", "basis"}, {"pre", "post"});
            number(v["kappa"], child_path(path, "kappa"));
            if (v.contains("pre")) unitary(v["pre"], child_path(path, "pre"));
            if (v.contains("post")) unitary(v["post"], child_path(path, "post"));
            if (v.contains("basis")) {
                const auto& b = v["basis"];
                if (b.is_string()) {
                    const auto s = b.get<std::string>();
                    if (s != "x" && s != "y" && s != "z") bad(child_path(path, "basis"), "expected x, y, z or {\"matrix\"}");
                } else {
                    unitary(b, child_path(path, "basis"));
                }
            }
        } else if (kind == "compose") {
            keys(v, path, {"kind", "first", "second"});
            box(v["first"], child_path(path, "first"));
            box(v["second"], child_path(path, "second"));
        } else {
            bad(child_path(path, "kind"), "unknown box kind '" + kind + "'");
        }
    }

    void pair(const Json& v, const std::string& path) const {
        if (!v.is_object() || !v.contains("kind")) bad(path, "pair needs a 'kind'");
        string(v["kind"], child_path(path, "kind"));
        const auto kind = v["kind"].get<std::string>();
        if (kind == "qrac_oracle" || kind == "qrac_measure_prepare" || kind == "qrac_blind") {
            keys(v, path, {"kind"});
        } else if (kind == "nsq") {
            keys(v, path, {"kind", "channel", "dims"});
            channel(v["channel"], child_path(path, "channel"));
            const auto& d = v["dims"];
            if (!d.is_array() || d.size() != 2) bad(child_path(path, "dims"), "expected [dA, dB]");
            count(d[0], child_path(path, "dims[0]"));
            count(d[1], child_path(path, "dims[1]"));
        } else {
            bad(child_path(path, "kind"), "unknown pair kind '" + kind + "'");
        }
    }

 private:
    std::set<std::string> params_;
};

struct DetectorSchema {
    DetectorKind kind;
    const char* name;
    bool needs_pair;
    Json defaults;
};

const std::vector<DetectorSchema>& detector_schemas() {
    static const std::vector<DetectorSchema> schemas = [] {
        const double pi = std::numbers::pi;
        std::vector<DetectorSchema> s;
        s.push_back({DetectorKind::Helstrom, "helstrom", false,
                     Json{{"trials", 100000}, {"theta1", pi / 2 - pi / 8}, {"theta2", pi / 2 + pi / 8}}});
        s.push_back({DetectorKind::EnsembleSignalling, "ensemble_signalling", false, Json::object()});
        s.push_back({DetectorKind::BasisInvariance, "basis_invariance", false,
                     Json{{"shots_per_setting", 10000},
                          {"deltas", Json::array({0.0, pi / 5, pi / 3})},
                          {"calibration_replications", 50}}});
        s.push_back({DetectorKind::AncillaConsistency, "ancilla_consistency", false,
                     Json{{"shots_per_setting", 10000}, {"calibration_replications", 50}}});
        s.push_back({DetectorKind::Qrac, "qrac", true, Json{{"rounds", 100000}}});
        s.push_back({DetectorKind::NsqMeasure, "nsq_measure", true, Json::object()});
        s.push_back({DetectorKind::ConcatenationGap, "concatenation_gap", false,
                     Json{{"theta", pi / 4}, {"phi", 0.0}, {"shots_per_setting", 100000},
                          {"calibration_replications", 50}}});
        return s;
    }();
    return schemas;
}

DetectorSpec parse_detector(const Json& v, const std::string& path, bool have_pair, const Json& model) {
    if (!v.is_object() || !v.contains("kind") || !v["kind"].is_string()) bad(path, "detector needs a string 'kind'");
    const auto name = v["kind"].get<std::string>();
    const DetectorSchema* schema = nullptr;
    for (const auto& s : detector_schemas())
        if (name == s.name) schema = &s;
    if (!schema) bad(child_path(path, "kind"), "unknown detector '" + name + "'");
    if (schema->needs_pair != have_pair)
        bad(child_path(path, "kind"), "detector '" + name + "' needs a " + (schema->needs_pair ? "pair" : "box"));
    if (!have_pair && schema->kind == DetectorKind::ConcatenationGap && model["kind"] != "compose")
        bad(path, "concatenation_gap needs a compose box");
    if (have_pair) {
        const bool nsq = model["kind"] == "nsq";
        if (schema->kind == DetectorKind::Qrac && nsq) bad(path, "qrac needs a QRAC pair");
        if (schema->kind == DetectorKind::NsqMeasure && !nsq) bad(path, "nsq_measure needs an nsq pair");
    }

    Json settings = schema->defaults;
    for (const auto& [k, val] : v.items()) {
        if (k == "kind") continue;
        const auto kp = child_path(path, k);
        if (!settings.contains(k)) bad(kp, "unknown setting for detector '" + name + "'");
        const Json& def = settings[k];
        if (def.is_number_integer()) {
            if (!val.is_number_unsigned() || val.get<std::uint64_t>() == 0) bad(kp, "expected a positive integer");
        } else if (def.is_number()) {
            if (!val.is_number()) bad(kp, "expected a number");
        } else if (def.is_array()) {
            if (!val.is_array() || val.empty()) bad(kp, "expected a non-empty array of numbers");
            for (const auto& x : val)
                if (!x.is_number()) bad(kp, "expected a non-empty array of numbers");
        }
        settings[k] = val;
    }
    return {schema->kind, std::move(settings)};
}

// --- building ---------------------------------------------------------------

double resolve(const Json& v, const ClassicalParams& p) {
    if (v.is_object()) return p.real(v["param"].get<std::string>());
    return v.get<double>();
}

Eigen::Index dim_of(const Json& v) { return static_cast<Eigen::Index>(v.get<std::uint64_t>()); }

ComplexMatrix parse_matrix(const Json& v) {
    ComplexMatrix m(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v[0].size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const Json& e = v[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            m(r, c) = e.is_array() ? cplx(e[0].get<double>(), e[1].get<double>()) : cplx(e.get<double>(), 0.0);
        }
    return m;
}

ComplexMatrix build_unitary(const Json& v, const ClassicalParams& p) {
    if (v.contains("matrix")) return parse_matrix(v["matrix"]);
    const auto gate = v["gate"].get<std::string>();
    if (gate == "identity") return pauli::I();
    if (gate == "x") return pauli::X();
    if (gate == "y") return pauli::Y();
    if (gate == "z") return pauli::Z();
    if (gate == "hadamard") return (pauli::X() + pauli::Z()) / std::numbers::sqrt2;
    if (gate == "ry") return rotation_y(resolve(v["angle"], p));
    return rotation_z(resolve(v["angle"], p));
}

std::vector<PureState> build_basis(const Json& v, const ClassicalParams& p) {
    ComplexMatrix cols;
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "z") return {PureState::basis(2, 0), PureState::basis(2, 1)};
        if (s == "x") return {states::plus(), states::minus()};
        return {states::plus_i(), PureState::normalized(ComplexVector{{1.0, cplx(0.0, -1.0)}})};
    }
    cols = build_unitary(v, p);
    std::vector<PureState> out;
    for (Eigen::Index k = 0; k < cols.cols(); ++k) out.push_back(PureState::normalized(cols.col(k)));
    return out;
}

ComplexMatrix pre_post(const Json& box, const char* key, const ClassicalParams& p) {
    return box.contains(key) ? build_unitary(box[key], p) : pauli::I();
}

std::size_t line_of(std::string_view text, std::size_t byte, std::size_t* column) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    *column = col;
    return line;
}

ParamValue grid_value(const Json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    bad(path, "grid values must be numbers or strings");
}

}  // namespace

std::string to_string(DetectorKind k) {
    for (const auto& s : detector_schemas())
        if (s.kind == k) return s.name;
    return "unknown";
}

std::size_t Scenario::cell_count() const {
    std::size_t n = 1;
    for (const auto& axis : grid) n *= axis.values.size();
    return n;
}

ClassicalParams Scenario::cell(std::size_t index) const {
    require(index < cell_count(), ErrorKind::InvalidInput, "Scenario::cell: index out of range");
    std::vector<std::size_t> digits(grid.size());
    for (std::size_t a = grid.size(); a-- > 0;) {
        digits[a] = index % grid[a].values.size();
        index /= grid[a].values.size();
    }
    ClassicalParams p;
    for (std::size_t a = 0; a < grid.size(); ++a) p.add(grid[a].name, grid[a].values[digits[a]]);
    return p;
}

Scenario parse_scenario_text(std::string_view text, const std::string& origin) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t column = 0;
        const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1, &column);
        fail(ErrorKind::Scenario, origin + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                      ": malformed JSON (" + e.what() + ")");
    }

    const std::string root = "scenario";
    if (!doc.is_object()) bad(root, "expected a JSON object");
    std::set<std::string> param_names;
    Scenario s;
    s.source = doc;

    // Grid first so that parameter references can be checked.
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (!g.is_array()) bad(child_path(root, "grid"), "expected an array of axes");
        std::size_t cells = 1;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto ap = child_path(child_path(root, "grid"), i);
            Checker({}).keys(g[i], ap, {"name", "values"});
            if (!g[i]["name"].is_string()) bad(child_path(ap, "name"), "expected a string");
            const auto name = g[i]["name"].get<std::string>();
            if (!param_names.insert(name).second) bad(child_path(ap, "name"), "duplicate axis '" + name + "'");
            const auto& vals = g[i]["values"];
            if (!vals.is_array() || vals.empty()) bad(child_path(ap, "values"), "expected a non-empty array");
            GridAxis axis{name, {}};
            for (std::size_t k = 0; k < vals.size(); ++k)
                axis.values.push_back(grid_value(vals[k], child_path(child_path(ap, "values"), k)));
            cells *= axis.values.size();
            if (cells > kMaxGridCells)
                bad(child_path(root, "grid"), "more than " + std::to_string(kMaxGridCells) + " cells");
            s.grid.push_back(std::move(axis));
        }
    }

    const Checker check(param_names);
    check.keys(doc, root, {"schema_version", "name", "master_seed", "detectors"}, {"box", "pair", "grid"});
    if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kScenarioSchemaVersion)
        bad(child_path(root, "schema_version"), "unsupported (expected " + std::to_string(kScenarioSchemaVersion) + ")");
    check.string(doc["name"], child_path(root, "name"));
    s.name = doc["name"].get<std::string>();
    if (!doc["master_seed"].is_number_unsigned()) bad(child_path(root, "master_seed"), "expected an unsigned integer");
    s.master_seed = doc["master_seed"].get<std::uint64_t>();

    const bool has_box = doc.contains("box"), has_pair = doc.contains("pair");
    if (has_box == has_pair) bad(root, "exactly one of 'box' or 'pair' is required");
    if (has_box) {
        check.box(doc["box"], child_path(root, "box"));
        s.box = doc["box"];
    } else {
        check.pair(doc["pair"], child_path(root, "pair"));
        s.pair = doc["pair"];
    }

    const auto& dets = doc["detectors"];
    if (!dets.is_array() || dets.empty()) bad(child_path(root, "detectors"), "expected a non-empty array");
    for (std::size_t i = 0; i < dets.size(); ++i)
        s.detectors.push_back(parse_detector(dets[i], child_path(child_path(root, "detectors"), i), has_pair, has_pair ? s.pair : s.box));
    return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Scenario, path.string() + ": file not found or unreadable");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path.string());
}

QuantumChannel build_channel(const Json& spec, const ClassicalParams& p) {
    const auto type = spec["type"].get<std::string>();
    if (type == "identity") return channels::identity(dim_of(spec["dim"]));
    if (type == "swap") return channels::swap(dim_of(spec["dim"]));
    if (type == "depolarizing")
        return channels::depolarizing(spec.contains("dim") ? dim_of(spec["dim"]) : 2, resolve(spec["p"], p));
    if (type == "amplitude_damping") return channels::amplitude_damping(resolve(spec["gamma"], p));
    if (type == "dephasing") return channels::dephasing(resolve(spec["p"], p));
    if (type == "unitary") return channels::unitary(build_unitary(spec, p));
    if (type == "random") {
        RngStream rng(spec["seed"].get<std::uint64_t>(), 0);
        const Eigen::Index m = dim_of(spec["dim_in"]), n = dim_of(spec["dim_out"]);
        return random_channel(m, n, spec.contains("env_dim") ? dim_of(spec["env_dim"]) : m * n, rng);
    }
    if (type == "kraus") {
        std::vector<ComplexMatrix> ops;
        for (const auto& op : spec["operators"]) ops.push_back(parse_matrix(op));
        return choi_from_kraus(ops);
    }
    return tensor_channel(build_channel(spec["first"], p), build_channel(spec["second"], p));
}

BoxModel build_box(const Json& spec, const ClassicalParams& p) {
    const auto kind = spec["kind"].get<std::string>();
    if (kind == "linear") return BoxModel::linear(build_channel(spec["channel"], p));
    if (kind == "nonlinear_bloch")
        return BoxModel::nonlinear_bloch(resolve(spec["kappa"], p), pre_post(spec, "pre", p), pre_post(spec, "post", p));
    if (kind == "collapse_nonlinear")
        return BoxModel::collapse_nonlinear(build_basis(spec["basis"], p), resolve(spec["kappa"], p),
                                            pre_post(spec, "pre", p), pre_post(spec, "post", p));
    return compose_boxes(build_box(spec["first"], p), build_box(spec["second"], p));
}

BoxPair build_pair(const Json& spec, const ClassicalParams& p) {
    const auto kind = spec["kind"].get<std::string>();
    if (kind == "qrac_oracle") return BoxPair::qrac_oracle();
    if (kind == "qrac_measure_prepare") return BoxPair::qrac_measure_prepare();
    if (kind == "qrac_blind") return BoxPair::qrac_blind();
    return BoxPair::nsq(build_channel(spec["channel"], p), dim_of(spec["dims"][0]), dim_of(spec["dims"][1]));
}

}  // namespace qdata
