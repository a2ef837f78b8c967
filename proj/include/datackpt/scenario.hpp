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

// JSON file formats (scenarios, workloads, simulation configs, traces),
// built-in scenarios and the random instance generator.
//
// Scenario file:
//   {
//     "name": "optional label",
//     "objects": 3,
//     "object_names": ["x", "y", "z"],            optional
//     "transactions": [{"id": 1, "reads": ["x"], "writes": [1, "z"]}],
//     "commit_order": [1],
//     "checkpoints": {"x": [0], "2": [0, 1]},      optional, keys are names or indices
//     "close_final": true                          optional, default true
//   }
// Objects may be referenced by index or by name. Version 0 is always a
// checkpoint. With close_final, every object's final version is a checkpoint
// too (each object is eventually checkpointed). Unknown fields are rejected.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "datackpt/dependence.hpp"
#include "datackpt/simulation.hpp"
#include "datackpt/theory.hpp"
#include "datackpt/workload.hpp"
#include "json.hpp"

namespace datackpt {

using Json = nlohmann::ordered_json;

struct Scenario {
  std::string name;
  std::vector<std::string> object_names;  // one per object
  std::shared_ptr<const ExecutionAnalysis> analysis;
  CheckpointPattern pattern;
  bool close_final = true;

  const ValidatedExecution& execution() const { return analysis->execution(); }
  std::uint32_t num_objects() const { return analysis->num_objects(); }
  PatternAnalysis pattern_analysis() const { return PatternAnalysis(analysis, pattern); }

  const std::string& object_name(ObjectId x) const { return object_names.at(raw(x)); }
  /// By name first, then by decimal index.
  std::optional<ObjectId> find_object(std::string_view token) const;
};

/// Parses a scenario document. Throws InputError with a field path.
Scenario parse_scenario(const Json& doc, std::string name = "");
Scenario parse_scenario_text(std::string_view text, std::string name = "");
/// `spec` is either "builtin:NAME" or a file path.
Scenario load_scenario(const std::string& spec);

/// "fig1a", "fig1b", "fig3".
Scenario builtin_scenario(std::string_view name);
std::vector<std::string> builtin_names();

Json scenario_to_json(const Scenario& s);

/// Random execution (random commit order) plus a pattern holding version 0,
/// the final version and up to max_checkpoints - 2 random versions in between.
Scenario generate_random(const WorkloadSpec& spec);

/// Parses "obj:rank" tokens; a token may hold several comma-separated members.
CandidateSet parse_candidate(const Scenario& s, const std::vector<std::string>& tokens);
std::string format_checkpoint(const Scenario& s, CheckpointId c);
std::string format_state(const Scenario& s, LocalStateId st);

Json workload_to_json(const WorkloadSpec& w);
WorkloadSpec workload_from_json(const Json& doc);
Json config_to_json(const SimConfig& c);
SimConfig config_from_json(const Json& doc);
Json execution_to_json(const Execution& e);
Execution execution_from_json(const Json& doc, const std::string& path);
Json trace_to_json(const Trace& t);
Trace trace_from_json(const Json& doc);

/// Reads and parses a JSON file. Throws InputError.
Json read_json_file(const std::string& path);
/// Two-space indentation and a trailing newline.
std::string dump_json(const Json& doc);

}  // namespace datackpt
