// Copyright 2026 The ncflow Authors
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

#ifndef NCFLOW_CLI_HPP
#define NCFLOW_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncflow/flow.hpp"
#include "ncflow/io.hpp"
#include "ncflow/tracking.hpp"

namespace ncflow {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitAcceptance = 4;

int exit_code_for(ErrorKind kind);

/// One run manifest. JSON keys match the long flag names with '-' -> '_'.
struct RunConfig {
    int n = 2;
    int m = 1;
    // "diag:v1,...,vn" | "random:seed=S,scale=s" | path to CMatrix JSON
    std::string initial = "random:seed=1,scale=0.3";
    std::uint64_t seed = 1; // used by "random" specs that omit seed=
    FlowConfig flow;
    std::string out = "out";
    std::vector<std::string> format{"csv", "json"};
    double time = 0.0; // spectrum: evaluation time
    TrackingConfig tracking;
    int fd_stride = 1;
    double residual_threshold = 1e-4;
    int n_max = 8;
    std::string geometry; // verify: optional geometry JSON to check instead
};

Json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig run_config_from_json(const Json& j);

Metric parse_initial_metric(const std::string& spec, int n, std::uint64_t default_seed);

struct CommandResult {
    int exit_code = kExitOk;
    Json summary;
};

// Each command writes its artifacts under cfg.out and returns a summary.
// Module errors propagate as ncflow::Error before anything is written.
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_track(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);

Json error_json(const Error& e);

} // namespace ncflow

#endif
