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

// Transaction-manager and data-manager step functions of the two
// transaction-induced checkpointing protocols, and the checker for their
// guarantees over a finished run.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "datackpt/checkpoint_log.hpp"
#include "datackpt/execution.hpp"

namespace datackpt {

enum class Protocol : std::uint8_t { kA, kB };

const char* to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view s);

/// Which data managers receive a COMMIT message.
///   kWriteSet  - only objects the transaction writes.
///   kAccessSet - also objects it only read. Required for the guarantees when
///                a later writer overwrites what the transaction read.
enum class CommitScope : std::uint8_t { kWriteSet, kAccessSet };

const char* to_string(CommitScope s);
std::optional<CommitScope> parse_commit_scope(std::string_view s);

struct DataManagerState {
  ObjectId object{};
  std::uint32_t index = 0;        // i_x
  std::uint32_t v_threshold = 0;  // V_x, protocol B
  Tick timer_deadline = 0;
  Version version = 0;  // current local state

  friend bool operator==(const DataManagerState&, const DataManagerState&) = default;
};

struct CommitMessage {
  TxnId txn{};
  std::uint32_t max_index = 0;  // M
  ObjectId destination{};
  bool applies_write = true;  // false for read-only destinations

  friend bool operator==(const CommitMessage&, const CommitMessage&) = default;
};

/// M = max of the observed indices; one message per write-set object, plus
/// one per read-only object under kAccessSet. Throws InputError if an
/// accessed object has no observation.
std::vector<CommitMessage> tm_commit_metadata(const Transaction& txn,
                                              const std::map<ObjectId, std::uint32_t>& observed,
                                              CommitScope scope = CommitScope::kWriteSet);

template <typename T>
struct Step {
  DataManagerState state;
  T record;
};

/// Basic checkpoint: index + 1, taken at the current version. Under protocol
/// B a basic checkpoint landing on a multiple of z also moves V to index + z.
Step<CheckpointRecord> dm_on_timer(DataManagerState dm, Tick reset_deadline, Protocol protocol = Protocol::kA,
                                   std::uint32_t z = 1);

/// Forced checkpoint at the pre-commit state when index < M; then the commit
/// is applied. Throws InputError on a destination mismatch.
Step<std::optional<CheckpointRecord>> dm_on_commit_A(DataManagerState dm, const CommitMessage& msg,
                                                     Tick reset_deadline);

/// Forced checkpoint when V <= M and floor(M/z)*z > index: index becomes
/// floor(M/z)*z and V becomes index + z. Then the commit is applied.
Step<std::optional<CheckpointRecord>> dm_on_commit_B(DataManagerState dm, const CommitMessage& msg, std::uint32_t z,
                                                     Tick reset_deadline);

struct ProtocolViolation {
  std::string kind;
  std::string detail;
  std::vector<std::size_t> records;  // positions in the checkpoint log
};

struct ProtocolReport {
  Protocol protocol = Protocol::kA;
  std::uint32_t z = 1;
  std::size_t num_records = 0;
  std::size_t dp_pairs_checked = 0;
  std::size_t indexed_sets_checked = 0;
  std::size_t gap_filled_sets_checked = 0;
  std::vector<ProtocolViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks a run's checkpoint log against the execution it came from:
///   - per-object indices strictly increase along the log;
///   - no checkpoint has a DP to itself;
///   - a DP between two checkpoints implies a strictly smaller index;
///   - every S_n (exact) and every gap-filled S_n is a consistent global state.
/// Under protocol B the last three are restricted to indices that are
/// multiples of z.
ProtocolReport verify_protocol_guarantees(const ValidatedExecution& execution,
                                          std::span<const CheckpointRecord> log, Protocol protocol,
                                          std::uint32_t z = 1);

}  // namespace datackpt
