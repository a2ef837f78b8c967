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

// Consistency of global checkpoints: the DP-based extendability condition,
// the constructive extension of a candidate set, the brute-force oracle and
// the recovery-line crossing check.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "datackpt/dependence.hpp"

namespace datackpt {

/// At most one checkpoint per object, at least one member.
struct CandidateSet {
  std::map<ObjectId, std::uint32_t> ranks;  // object -> rank

  std::vector<CheckpointId> members() const;
};

/// Exactly one checkpoint rank per object.
struct GlobalCheckpoint {
  std::vector<std::uint32_t> ranks;  // indexed by object

  bool contains(const CandidateSet& s) const;
  std::vector<LocalStateId> states(const CheckpointPattern& pattern) const;
  friend auto operator<=>(const GlobalCheckpoint&, const GlobalCheckpoint&) = default;
};

/// Throws InputError unless `s` is non-empty and every member is in the pattern.
void validate_candidate(const CandidateSet& s, const CheckpointPattern& pattern);

/// No member happened-before another. `states` holds one state per object.
bool is_consistent_global_state(std::span<const LocalStateId> states, const ExecutionAnalysis& analysis);
bool is_consistent_global_state(const GlobalCheckpoint& g, const PatternAnalysis& analysis);

/// For every ordered pair of members (including a member with itself), no DP.
bool theorem_condition(const CandidateSet& s, const PatternAnalysis& analysis);

/// First ordered pair (from, to) of members with from DP-> to, if any.
std::optional<std::pair<CheckpointId, CheckpointId>> find_dp_violation(const CandidateSet& s,
                                                                       const PatternAnalysis& analysis);

struct ConditionViolation {
  CheckpointId from;
  CheckpointId to;
  std::vector<DependenceEdge> witness;  // empty for the same-object clause
};

/// m_x(y) for one object outside the candidate set and one member y.
struct MinRank {
  ObjectId object{};
  ObjectId member{};
  std::uint32_t value = 0;
};

struct Extension {
  GlobalCheckpoint global;
  std::vector<MinRank> m_values;  // by (object, member)
};

/// Extends `s` to a global checkpoint: members keep their rank; every other
/// object x takes max over members y of m_x(y), the smallest rank whose
/// checkpoint has no DP to y's member (0 when y's member has rank 0 or no
/// such rank exists). Returns the violating pair when the condition fails.
std::variant<Extension, ConditionViolation> extend_to_global(const CandidateSet& s, const PatternAnalysis& analysis);

inline constexpr std::uint64_t kDefaultOracleBound = 1'000'000;

class OracleBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of global checkpoints over the pattern (saturating).
std::uint64_t global_checkpoint_count(const CheckpointPattern& pattern);

/// Every consistent global checkpoint, in lexicographic rank order. Throws
/// OracleBoundExceeded when the candidate count exceeds `bound`.
std::vector<GlobalCheckpoint> enumerate_consistent_globals(const PatternAnalysis& analysis,
                                                           std::uint64_t bound = kDefaultOracleBound);

/// Backtracking search for a consistent global checkpoint containing `s`,
/// using only <_LS. Independent of DP. nullopt when none exists; throws
/// OracleBoundExceeded after visiting `bound` partial assignments.
std::optional<GlobalCheckpoint> find_consistent_extension(const CandidateSet& s, const PatternAnalysis& analysis,
                                                          std::uint64_t bound = kDefaultOracleBound);

/// Crossing rules on the line through g's members: no black edge crosses it
/// and no dashed edge crosses it from right to left. An edge leaves its
/// source's object left of the line iff source.version < line version, and
/// reaches its target's object left of the line iff target.version <= line
/// version (the write event precedes the post-state).
bool recovery_line_check(const GlobalCheckpoint& g, const PatternAnalysis& analysis);
bool recovery_line_check(std::span<const Version> line, std::span<const DependenceEdge> edges);

/// Every candidate set with 1..max_size members, objects ascending, ranks
/// varying fastest in the last member. Stops after `limit` sets.
std::vector<CandidateSet> candidate_sets(const CheckpointPattern& pattern, std::uint32_t max_size,
                                         std::size_t limit = std::numeric_limits<std::size_t>::max());

struct AgreementStats {
  std::size_t checked = 0;
  std::size_t extendable = 0;
  std::size_t disagreements = 0;
  std::size_t skipped = 0;  // oracle bound exceeded
  std::vector<CandidateSet> first_disagreements;  // at most 5
};

/// Compares theorem_condition with the brute-force oracle on candidate_sets().
AgreementStats check_theorem_agreement(const PatternAnalysis& analysis, std::uint32_t max_size,
                                       std::size_t limit = std::numeric_limits<std::size_t>::max(),
                                       std::uint64_t bound = kDefaultOracleBound);

}  // namespace datackpt
