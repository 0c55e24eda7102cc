// Copyright 2026 The MRFC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MRFC_TRACE_IO_HPP_
#define MRFC_TRACE_IO_HPP_

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "mrfc/network.hpp"
#include "mrfc/solver.hpp"
#include "mrfc/subgradient.hpp"

namespace mrfc {

// Trace CSV, version 1. The first line is "# mrfc-trace v1"; the column
// order below is frozen. Values are printed with 17 significant digits so
// identical runs give identical bytes; unused fields are "nan".
inline constexpr const char* kTraceHeader = "# mrfc-trace v1";
inline constexpr const char* kTraceColumns =
    "iteration,stage,t,objective,utility,decrement,step,inner_iterations,"
    "balance_residual,min_slack";

std::string trace_to_csv(const RunTrace& trace);
void write_trace(const std::filesystem::path& path, const RunTrace& trace);

// Per-inner-iteration residuals: "# mrfc-dual-trace v1" then
// iteration,residual,alpha.
std::string dual_trace_to_csv(std::span<const double> residuals, double alpha);

// Solution file: {"format": "mrfc-solution", "version": 1, "status", "solver",
// "s": [F], "x": [L][F], "w": [N][F], "lambda", "t", "iterations",
// "stages", "utility"}.
nlohmann::json solution_to_json(const Instance& instance, const Solution& solution,
                                const std::string& status);
nlohmann::json subgradient_solution_to_json(const Instance& instance,
                                            const SubgradientResult& result);

// Run configuration: every key is optional and mirrors a command-line flag
// of the same name (with '_' for '-'). Unknown keys are rejected.
struct RunConfig {
  SolverConfig solver;
  SubgradientConfig subgradient;
};
RunConfig run_config_from_json(const nlohmann::json& doc, RunConfig base = {});
nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig read_run_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace mrfc

#endif  // MRFC_TRACE_IO_HPP_
