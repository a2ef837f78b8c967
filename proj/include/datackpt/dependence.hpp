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

// Happened-before on local states, dependence edges, checkpoint intervals and
// dependence-path (DP) reachability.
//
// Positions on an object's axis. A dependence edge pre_Ti(y) -> post_Tj(x)
// leaves y at the write event of Ti (just after state pre_Ti(y)) and arrives
// at x at the write event of Tj (just after state pre_Tj(x), just before
// post_Tj(x)). Consequently:
//   - an edge "starts after C" when its source version >= version(C);
//   - an edge "arrives before C" when its target version <= version(C),
//     i.e. the event lies in an interval of rank < rank(C).
// With these positions a single edge from C to C' is exactly C <_LS C'.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "datackpt/bit_matrix.hpp"
#include "datackpt/execution.hpp"

namespace datackpt {

/// <_LS, computed as reachability in the graph whose nodes are local states
/// and transactions, with edges pre_T(x) -> T -> post_T(x) for every write and
/// T_i -> T_j for every direct serialization edge.
class StatePrecedence {
 public:
  StatePrecedence(const ValidatedExecution& execution, const SerializationGraph& graph,
                  const StateTimeline& timeline);

  /// a <_LS b. Throws InputError for states outside the timeline.
  bool happened_before(LocalStateId a, LocalStateId b) const;

 private:
  const StateTimeline* timeline_;
  BitMatrix reach_;  // state index -> state index
};

enum class EdgeKind : std::uint8_t { kBlack, kDashed };

const char* to_string(EdgeKind kind);

struct DependenceEdge {
  LocalStateId source;
  LocalStateId target;
  EdgeKind kind = EdgeKind::kBlack;
  TxnId source_txn{};
  TxnId target_txn{};

  friend auto operator<=>(const DependenceEdge&, const DependenceEdge&) = default;
};

/// For every pair (T_i, T_j) with T_i = T_j or T_i <_T^+ T_j and every
/// y in W(T_i), x in W(T_j): pre_Ti(y) -> post_Tj(x). Black when T_i = T_j.
/// Sorted by (source commit position, target commit position, y, x).
std::vector<DependenceEdge> derive_dependence_edges(const ValidatedExecution& execution,
                                                    const SerializationGraph& graph,
                                                    const StateTimeline& timeline);

/// Pattern-independent analysis of one execution.
class ExecutionAnalysis {
 public:
  explicit ExecutionAnalysis(ValidatedExecution execution);
  // Members point into each other; share it through std::shared_ptr instead.
  ExecutionAnalysis(const ExecutionAnalysis&) = delete;
  ExecutionAnalysis& operator=(const ExecutionAnalysis&) = delete;

  const ValidatedExecution& execution() const { return execution_; }
  const SerializationGraph& graph() const { return graph_; }
  const StateTimeline& timeline() const { return timeline_; }
  const StatePrecedence& precedence() const { return precedence_; }
  const std::vector<DependenceEdge>& edges() const { return edges_; }
  std::uint32_t num_objects() const { return execution_.num_objects(); }

 private:
  ValidatedExecution execution_;
  SerializationGraph graph_;
  StateTimeline timeline_;
  StatePrecedence precedence_;
  std::vector<DependenceEdge> edges_;
};

bool happened_before_ls(LocalStateId a, LocalStateId b, const ExecutionAnalysis& analysis);

/// Which local states are data checkpoints: per object, strictly increasing
/// versions starting at 0.
class CheckpointPattern {
 public:
  CheckpointPattern() = default;

  /// Sorts and deduplicates each list, inserts version 0, and checks every
  /// version against the timeline. With `close_final`, also inserts each
  /// object's final version (every object is eventually checkpointed).
  static CheckpointPattern make(std::vector<std::vector<Version>> versions, const StateTimeline& timeline,
                                bool close_final);
  /// Every local state is a checkpoint.
  static CheckpointPattern all_states(const StateTimeline& timeline);
  /// Only the initial states.
  static CheckpointPattern initial_only(std::uint32_t num_objects);

  std::uint32_t num_objects() const { return static_cast<std::uint32_t>(versions_.size()); }
  std::span<const Version> versions(ObjectId x) const { return versions_[raw(x)]; }
  std::uint32_t count(ObjectId x) const { return static_cast<std::uint32_t>(versions_[raw(x)].size()); }
  bool contains(CheckpointId c) const { return raw(c.object) < versions_.size() && c.rank < count(c.object); }
  /// The local state a checkpoint names. Throws InputError if absent.
  LocalStateId state(CheckpointId c) const;
  /// Rank of the checkpoint taken at `s`, if `s` is a checkpoint.
  std::optional<std::uint32_t> rank_of(LocalStateId s) const;
  /// Rank of the interval holding state `s`: the last checkpoint at or before it.
  std::uint32_t interval_rank(LocalStateId s) const;

  friend bool operator==(const CheckpointPattern&, const CheckpointPattern&) = default;

 private:
  std::vector<std::vector<Version>> versions_;
};

struct Interval {
  ObjectId object{};
  std::uint32_t rank = 0;
  Version start = 0;  // version of C^rank
  Version end = 0;    // inclusive

  std::uint32_t size() const { return end - start + 1; }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Assignment of every local state to its checkpoint interval. The last
/// interval of an object runs to the object's final state.
std::vector<Interval> build_intervals(const CheckpointPattern& pattern, const StateTimeline& timeline);

/// Interval graph (succession + dependence edges) and the DP relation over a
/// pattern's checkpoints.
class DependencePaths {
 public:
  DependencePaths(const ExecutionAnalysis& analysis, const CheckpointPattern& pattern);

  /// C_from DP-> C_to. Throws InputError if either checkpoint is not in the pattern.
  bool reachable(CheckpointId from, CheckpointId to) const;

  /// Dependence edges of a DP from `from` to `to` with the fewest edges, or
  /// nullopt if none exists. Empty for the same-object clause (rank order).
  std::optional<std::vector<DependenceEdge>> witness(CheckpointId from, CheckpointId to) const;

  std::size_t num_intervals() const { return node_object_.size(); }
  /// Interval-graph dependence edges as (from interval, to interval).
  std::vector<std::pair<Interval, Interval>> interval_dependence_edges() const;
  const CheckpointPattern& pattern() const { return *pattern_; }

 private:
  std::size_t node(ObjectId x, std::uint32_t rank) const { return offsets_[raw(x)] + rank; }
  void check(CheckpointId c) const;

  const ExecutionAnalysis* analysis_;
  const CheckpointPattern* pattern_;
  std::vector<std::size_t> offsets_;      // per object, first node
  std::vector<ObjectId> node_object_;     // node -> object
  // Dependence edges between intervals, each with a representative edge.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> dep_out_;  // node -> (node, edge index)
  BitMatrix via_dep_;  // node -> nodes reachable through >= 1 dependence edge
};

/// Convenience wrapper over DependencePaths::reachable.
bool dp_reachable(CheckpointId from, CheckpointId to, const DependencePaths& paths);

/// An execution analysis together with a checkpoint pattern. Owns everything.
class PatternAnalysis {
 public:
  PatternAnalysis(std::shared_ptr<const ExecutionAnalysis> analysis, CheckpointPattern pattern);

  const ExecutionAnalysis& execution() const { return *analysis_; }
  const CheckpointPattern& pattern() const { return *pattern_; }
  const DependencePaths& paths() const { return *paths_; }
  std::shared_ptr<const ExecutionAnalysis> shared_execution() const { return analysis_; }

 private:
  std::shared_ptr<const ExecutionAnalysis> analysis_;
  std::unique_ptr<const CheckpointPattern> pattern_;
  std::unique_ptr<const DependencePaths> paths_;
};

}  // namespace datackpt
