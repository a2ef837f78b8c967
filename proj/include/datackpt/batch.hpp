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

// Seeded verification batches: random instances checked against the
// brute-force oracle, and random simulations checked by the protocol verifier.
//
// Batch file:
//   {
//     "theorem":  {"instances": 1000, "first_seed": 1, "max_objects": 5, "max_txns": 8,
//                  "max_checkpoints": 3, "max_set_size": 3},
//     "protocol": {"runs": 200, "first_seed": 1, "max_objects": 6, "max_txns": 40,
//                  "protocol": "B", "z_values": [1, 2, 4, 8], "commit_scope": "access-set"}
//   }
// Either section may be omitted; omitted fields take the defaults below.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "datackpt/scenario.hpp"

namespace datackpt {

struct TheoremBatch {
  std::uint32_t instances = 1000;
  std::uint64_t first_seed = 1;
  std::uint32_t max_objects = 5;
  std::uint32_t max_txns = 8;
  std::uint32_t max_checkpoints = 3;
  std::uint32_t max_set_size = 3;
};

struct ProtocolBatch {
  std::uint32_t runs = 200;
  std::uint64_t first_seed = 1;
  std::uint32_t max_objects = 6;
  std::uint32_t max_txns = 40;
  Protocol protocol = Protocol::kA;
  std::vector<std::uint32_t> z_values{1};
  CommitScope commit_scope = CommitScope::kAccessSet;
};

struct BatchSpec {
  std::optional<TheoremBatch> theorem;
  std::optional<ProtocolBatch> protocol;
};

BatchSpec batch_from_json(const Json& doc);
Json batch_to_json(const BatchSpec& spec);

/// Random instance k of a theorem batch: sizes drawn from the seed.
WorkloadSpec theorem_instance_workload(const TheoremBatch& batch, std::uint64_t seed);

struct TheoremBatchResult {
  std::uint32_t instances = 0;
  std::uint64_t sets_checked = 0;
  std::uint64_t extendable = 0;
  std::uint64_t disagreements = 0;
  std::uint64_t hidden_dependences = 0;  // pairwise causally independent, yet not extendable
  std::uint64_t constructions = 0;
  std::uint64_t construction_failures = 0;
  std::uint64_t globals_checked = 0;
  std::uint64_t line_mismatches = 0;
  std::uint64_t alpha_squared_failures = 0;
  std::uint64_t skipped = 0;
  std::vector<std::string> failures;  // first few, human readable

  bool ok() const {
    return disagreements == 0 && construction_failures == 0 && line_mismatches == 0 && alpha_squared_failures == 0;
  }
};

TheoremBatchResult run_theorem_batch(const TheoremBatch& batch);

/// Workload and simulation settings of run `seed`: sizes, delays, timer
/// period and jitter are all drawn from the seed. `z` and the protocol are
/// filled in by the caller.
std::pair<WorkloadSpec, SimConfig> protocol_run_setup(const ProtocolBatch& batch, std::uint64_t seed);

struct ProtocolRun {
  std::uint64_t seed = 0;
  std::uint32_t z = 1;
  std::uint32_t num_objects = 0;
  std::uint32_t num_txns = 0;
  std::uint64_t basic = 0;
  std::uint64_t forced = 0;
  ProtocolReport report;
};

struct ProtocolBatchResult {
  std::vector<ProtocolRun> runs;
  std::uint64_t violations = 0;
  std::map<std::uint32_t, std::uint64_t> forced_by_z;  // total forced checkpoints
  std::map<std::uint32_t, std::uint32_t> runs_by_z;

  /// Mean forced count does not increase with z.
  bool forced_non_increasing() const;
  bool ok() const { return violations == 0; }
};

ProtocolBatchResult run_protocol_batch(const ProtocolBatch& batch);

Json theorem_batch_to_json(const TheoremBatch& batch, const TheoremBatchResult& r);
Json protocol_batch_to_json(const ProtocolBatch& batch, const ProtocolBatchResult& r);

}  // namespace datackpt
