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

// Committed strict-serializable executions at commit-atomic granularity:
// a total commit order plus per-transaction read/write sets. Under strictness
// every write takes effect at its transaction's commit point, so the commit
// order fixes both the conflict order on each object and the version history.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "datackpt/bit_matrix.hpp"
#include "datackpt/types.hpp"

namespace datackpt {

struct Transaction {
  TxnId id{};
  std::vector<ObjectId> read_set;   // sorted, unique
  std::vector<ObjectId> write_set;  // sorted, unique

  bool reads(ObjectId x) const;
  bool writes(ObjectId x) const;
  bool accesses(ObjectId x) const { return reads(x) || writes(x); }
  // read_set ∪ write_set, sorted.
  std::vector<ObjectId> access_set() const;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Execution {
  std::uint32_t num_objects = 0;
  std::vector<Transaction> transactions;
  std::vector<TxnId> commit_order;

  friend bool operator==(const Execution&, const Execution&) = default;
};

/// An Execution that passed validate_execution(). Transactions are addressed
/// by commit position (0 = first to commit) as well as by id.
class ValidatedExecution {
 public:
  const Execution& execution() const { return exec_; }
  std::uint32_t num_objects() const { return exec_.num_objects; }
  std::size_t num_txns() const { return by_position_.size(); }

  // Transaction committed at `pos`.
  const Transaction& at_position(std::size_t pos) const { return exec_.transactions[by_position_[pos]]; }
  std::size_t position_of(TxnId id) const;
  const Transaction& txn(TxnId id) const { return at_position(position_of(id)); }
  bool contains(TxnId id) const;

 private:
  friend ValidatedExecution validate_execution(Execution execution);
  ValidatedExecution() = default;

  Execution exec_;
  std::vector<std::size_t> by_position_;                 // position -> index in transactions
  std::vector<std::pair<TxnId, std::size_t>> position_;  // sorted by id
};

/// Checks the structural invariants and normalizes read/write sets (sorted,
/// deduplicated). Throws InputError naming the offending field.
ValidatedExecution validate_execution(Execution execution);

/// Direct conflict edges of the serialization relation plus its transitive
/// closure. Edges always point forward in commit order.
class SerializationGraph {
 public:
  explicit SerializationGraph(const ValidatedExecution& execution);

  // Direct edges as (earlier, later) transaction ids, sorted by commit positions.
  const std::vector<std::pair<TxnId, TxnId>>& direct_edges() const { return direct_ids_; }
  // Direct successors of the transaction at `pos`, as positions.
  const std::vector<std::size_t>& successors(std::size_t pos) const { return succ_[pos]; }

  bool directly_precedes(TxnId a, TxnId b) const;
  /// a <_T^+ b
  bool precedes(TxnId a, TxnId b) const;
  bool precedes_position(std::size_t a, std::size_t b) const { return closure_.test(a, b); }

  /// A topological order of the direct edges, or nullopt when cyclic. Always
  /// succeeds for graphs built from a valid execution; kept as an independent check.
  std::optional<std::vector<std::size_t>> topological_order() const;

 private:
  std::vector<TxnId> ids_;  // by position
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::pair<TxnId, TxnId>> direct_ids_;
  BitMatrix closure_;
};

/// Per-object version history induced by the commit order.
class StateTimeline {
 public:
  explicit StateTimeline(const ValidatedExecution& execution);

  std::uint32_t num_objects() const { return static_cast<std::uint32_t>(writers_.size()); }
  Version final_version(ObjectId x) const { return static_cast<Version>(writers_[raw(x)].size()); }
  bool contains(LocalStateId s) const;

  /// Transaction that produced version k >= 1 of x.
  TxnId writer_of(LocalStateId s) const;
  /// Commit position of the writer of `s` (s.version >= 1).
  std::size_t writer_position(LocalStateId s) const;
  /// Version of x seen by the transaction at commit position `pos`.
  Version pre_version(std::size_t pos, ObjectId x) const;
  /// Version produced by the transaction at `pos` on x; nullopt if it does not write x.
  std::optional<Version> post_version(std::size_t pos, ObjectId x) const;

  // Dense numbering of all local states: state_offset(x) + version.
  std::size_t num_states() const { return offsets_.back(); }
  std::size_t state_index(LocalStateId s) const { return offsets_[raw(s.object)] + s.version; }
  LocalStateId state_at(std::size_t index) const;

 private:
  struct Access {
    ObjectId object;
    Version pre;
    bool writes;
  };
  const Access* find_access(std::size_t pos, ObjectId x) const;

  std::vector<TxnId> ids_;                         // by position
  std::vector<std::vector<std::size_t>> writers_;  // per object: writer positions, version k at [k-1]
  std::vector<std::vector<Access>> accesses_;      // per position, sorted by object
  std::vector<std::size_t> offsets_;
};

}  // namespace datackpt
