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

// Discrete-event simulation of transaction managers and data managers under
// strict two-phase locking with asynchronous, reliable COMMIT delivery.
//
// Locking: a transaction requests its locks one at a time in ascending object
// order (exclusive for written objects, shared otherwise); grants are FIFO.
// The data manager returns its current index with every grant. Once all locks
// are held the transaction commits; the TM then sends COMMIT(M) to the data
// managers in scope. An exclusive lock is released when the COMMIT reaches
// its data manager, after the write has been applied. A shared lock is
// released on COMMIT delivery under the access-set scope and at commit time
// under the write-set scope.
//
// Timers: each data manager has a periodic timer. An expiry while the object
// is exclusively locked is deferred to the release of that lock, so a basic
// checkpoint never falls between a writer's index observation and its write.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "datackpt/checkpoint_log.hpp"
#include "datackpt/execution.hpp"
#include "datackpt/protocol.hpp"
#include "datackpt/workload.hpp"

namespace datackpt {

struct SimConfig {
  std::uint64_t seed = 1;
  std::uint32_t num_sites = 1;
  std::vector<std::uint32_t> object_placement;  // object -> site; empty: object % num_sites
  Tick delay_min = 1;
  Tick delay_max = 5;
  Tick timer_period = 20;
  Tick timer_jitter = 0;  // each timer period is extended by uniform [0, jitter]
  Tick arrival_gap_min = 0;
  Tick arrival_gap_max = 4;
  Tick exec_min = 1;  // last lock grant to commit
  Tick exec_max = 3;
  Protocol protocol = Protocol::kA;
  std::uint32_t z = 1;
  CommitScope commit_scope = CommitScope::kAccessSet;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Throws InputError on out-of-range fields.
void validate_config(const SimConfig& config, std::uint32_t num_objects);

enum class SimEventKind : std::uint8_t { kTxnBegin, kLockAcquired, kTxnCommit, kCommitDelivered, kTimerExpired };

const char* to_string(SimEventKind kind);
std::optional<SimEventKind> parse_sim_event_kind(std::string_view s);

/// `value` is the index returned with a lock grant, the M of a commit or a
/// delivered COMMIT, or the index after a basic checkpoint.
struct SimEvent {
  Tick time = 0;
  std::uint64_t seq = 0;
  SimEventKind kind = SimEventKind::kTxnBegin;
  std::optional<TxnId> txn;
  std::optional<ObjectId> object;
  std::uint32_t value = 0;

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct Trace {
  SimConfig config;
  Execution execution;  // committed projection, normalized
  std::vector<SimEvent> events;
  std::vector<CheckpointRecord> checkpoint_log;

  friend bool operator==(const Trace&, const Trace&) = default;
};

Trace run_simulation(std::uint32_t num_objects, std::span<const Transaction> transactions, const SimConfig& config);
/// Transactions from generate_transactions(workload); timing from config.seed.
Trace run_simulation(const WorkloadSpec& workload, const SimConfig& config);

struct CheckpointCounts {
  std::vector<std::uint32_t> basic;  // per object
  std::vector<std::uint32_t> forced;
  std::uint64_t total_basic() const;
  std::uint64_t total_forced() const;
};

CheckpointCounts count_checkpoints(const Trace& trace);

ProtocolReport verify_protocol_guarantees(const Trace& trace);

}  // namespace datackpt
