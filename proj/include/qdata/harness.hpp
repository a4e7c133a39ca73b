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
#include <optional>
#include <string>

#include "qdata/kernels.hpp"
#include "qdata/scenario.hpp"

namespace qdata {

inline constexpr int kReportSchemaVersion = 1;

struct HarnessOptions {
    std::optional<std::uint64_t> seed;  // overrides the scenario's master_seed
    Exec exec = default_exec();
    std::string timestamp;  // empty: current UTC time
};

/// Seed for one (cell, detector) run. The harness passes an RngStream built
/// from it to the detector, which splits trials into blocks with child().
std::uint64_t cell_seed(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t detector);

/// Runs every (cell, detector) pair. Failures are recorded per cell and
/// per detector; they never abort the rest of the grid.
Json run_scenario(const Scenario& s, const HarnessOptions& options = {});

/// Human-readable verdict table for a report document.
std::string summarize_report(const Json& report);

Json matrix_to_json(const ComplexMatrix& m);

}  // namespace qdata
