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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qdata/boxes.hpp"

namespace qdata {

using Json = nlohmann::ordered_json;

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr std::size_t kMaxGridCells = 10000;

struct GridAxis {
    std::string name;
    std::vector<ParamValue> values;
};

enum class DetectorKind {
    Helstrom,
    EnsembleSignalling,
    BasisInvariance,
    AncillaConsistency,
    Qrac,
    NsqMeasure,
    ConcatenationGap,
};

std::string to_string(DetectorKind k);

/// One detector entry; `settings` holds every setting with defaults filled in.
struct DetectorSpec {
    DetectorKind kind;
    Json settings;
};

struct Scenario {
    std::string name;
    std::uint64_t master_seed = 0;
    Json box;   // null when the scenario drives a pair
    Json pair;  // null when the scenario drives a single box
    std::vector<GridAxis> grid;
    std::vector<DetectorSpec> detectors;
    Json source;  // the document as read

    /// Cartesian product of the grid axes, first axis outermost.
    std::size_t cell_count() const;
    ClassicalParams cell(std::size_t index) const;
};

/// Throws Error{Scenario} with a line/column or field-path diagnostic.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text, const std::string& origin = "<scenario>");

/// Builds the declared model for one grid cell; `{"param": name}` leaves
/// are resolved against `p`.
BoxModel build_box(const Json& spec, const ClassicalParams& p);
BoxPair build_pair(const Json& spec, const ClassicalParams& p);
QuantumChannel build_channel(const Json& spec, const ClassicalParams& p);

}  // namespace qdata
