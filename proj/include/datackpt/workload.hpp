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

#include <cstdint>
#include <vector>

#include "datackpt/execution.hpp"

namespace datackpt {

/// Parameters of a random workload. Probabilities are in permille so that
/// files carry integers only.
struct WorkloadSpec {
  std::uint32_t num_objects = 4;
  std::uint32_t num_txns = 8;
  std::uint32_t ops_min = 1;  // accesses per transaction
  std::uint32_t ops_max = 3;
  std::uint32_t write_permille = 500;  // chance an access is a write
  std::uint32_t skew_permille = 0;     // chance an access targets the hot third of the objects
  std::uint32_t max_checkpoints = 3;   // per object, for generated patterns
  std::uint64_t seed = 1;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

/// Throws InputError on out-of-range fields.
void validate_workload(const WorkloadSpec& spec);

/// Transactions with ids 1..num_txns in arrival order, drawn from `spec.seed`.
std::vector<Transaction> generate_transactions(const WorkloadSpec& spec);

}  // namespace datackpt
