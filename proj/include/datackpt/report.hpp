/*
 * Copyright 2026 The datackpt Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Machine-readable reports for the command-line tool and the Python module.
// Every report is an ordered JSON object starting with
//   {"schema": "datackpt.report/1", "command": ..., ...}
// and ending with "ok" and "exit_code". Key order and content depend only on
// the inputs.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "datackpt/batch.hpp"
#include "datackpt/scenario.hpp"

namespace datackpt {

inline constexpr const char* kReportSchema = "datackpt.report/1";

enum ExitCode : int { kExitOk = 0, kExitViolated = 1, kExitInputError = 2 };

struct CommandResult {
  Json report;
  int exit_code = kExitOk;
};

Json edge_to_json(const Scenario& s, const DependenceEdge& e);

/// Serialization edges, dependence-edge counts, intervals, and the <_LS
/// matrix when the execution has at most `matrix_cap` local states.
CommandResult analyze_command(const Scenario& s, std::size_t matrix_cap = 64);

/// Theorem condition with witness, cross-checked by the oracle within `bound`.
CommandResult check_command(const Scenario& s, const CandidateSet& candidate,
                            std::uint64_t bound = kDefaultOracleBound);

/// The sufficiency construction with its m-value table.
CommandResult extend_command(const Scenario& s, const CandidateSet& candidate);

/// Runs the simulation; the trace is written to `trace_out` when non-null.
CommandResult simulate_command(const WorkloadSpec& workload, const SimConfig& config, Trace* trace_out = nullptr);

/// Protocol guarantees of a trace plus theorem spot checks on the trace's
/// execution with the logged checkpoints (closed with final states).
CommandResult verify_trace_command(const Trace& trace, std::size_t spot_check_limit = 2000);

CommandResult verify_batch_command(const BatchSpec& spec);

/// Report for an input error, exit code 2.
CommandResult input_error_report(const std::string& command, const std::string& message);

}  // namespace datackpt
