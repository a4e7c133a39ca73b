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
#include <ostream>
#include <string>
#include <vector>

#include "qdata/kernels.hpp"

namespace qdata {

inline constexpr int kExitOk = 0;
inline constexpr int kExitScenarioError = 1;
inline constexpr int kExitInternalError = 2;

/// `qdata run | demo | report summarize`; returns the process exit code.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const std::vector<std::string>& demo_names();
/// Throws Error{Scenario} for an unknown name.
void run_demo(const std::string& name, std::uint64_t seed, const Exec& exec, std::ostream& out);

}  // namespace qdata
