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

#include <gtest/gtest.h>

#include "datackpt/checkpoint_log.hpp"
#include "datackpt/theory.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using namespace datackpt;
using namespace testing_util;

CandidateSet cand(const Scenario& s, std::initializer_list<std::pair<const char*, std::uint32_t>> members) {
  CandidateSet c;
  for (const auto& [name, rank] : members) c.ranks[*s.find_object(name)] = rank;
  return c;
}

std::vector<std::vector<std::uint32_t>> rank_vectors(const std::vector<GlobalCheckpoint>& gs) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& g : gs) out.push_back(g.ranks);
  return out;
}

TEST(Consistency, Fig1aStates) {
  const Scenario s = builtin_scenario("fig1a");
  const std::vector<LocalStateId> bad = {st(s, "x", 1), st(s, "y", 0), st(s, "z", 1)};
  EXPECT_FALSE(is_consistent_global_state(bad, *s.analysis));
  const std::vector<LocalStateId> good = {st(s, "x", 0), st(s, "y", 1), st(s, "z", 1)};
  EXPECT_TRUE(is_consistent_global_state(good, *s.analysis));
}

TEST(Enumerate, Fig1a) {
  const Scenario s = builtin_scenario("fig1a");
  const auto gs = enumerate_consistent_globals(s.pattern_analysis());
  const std::vector<std::vector<std::uint32_t>> expected = {{0, 0, 0}, {0, 1, 1}, {1, 1, 1}};
  EXPECT_EQ(rank_vectors(gs), expected);
}

TEST(Enumerate, Fig1b) {
  const Scenario s = builtin_scenario("fig1b");
  const auto gs = enumerate_consistent_globals(s.pattern_analysis());
  const std::vector<std::vector<std::uint32_t>> expected = {{0, 0, 0}, {1, 0, 0}, {1, 1, 1}};
  EXPECT_EQ(rank_vectors(gs), expected);
}

TEST(Enumerate, NoTransactionsGivesInitialOnly) {
  const auto v = validate_execution(execution(3, {}, {}));
  auto a = std::make_shared<const ExecutionAnalysis>(v);
  const PatternAnalysis pa(a, CheckpointPattern::initial_only(3));
  const auto gs = enumerate_consistent_globals(pa);
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_EQ(gs[0].ranks, (std::vector<std::uint32_t>{0, 0, 0}));
}

TEST(Enumerate, BoundExceeded) {
  const Scenario s = fig3();
  const auto pa = s.pattern_analysis();
  EXPECT_EQ(global_checkpoint_count(s.pattern), 16u);
  EXPECT_THROW(enumerate_consistent_globals(pa, 4), OracleBoundExceeded);
  EXPECT_THROW(find_consistent_extension(cand(s, {{"u", 0}, {"x", 1}}), pa, 1), OracleBoundExceeded);
}

TEST(Theorem, Fig3HiddenDependenceBlocksExtension) {
  const Scenario s = fig3();
  const auto pa = s.pattern_analysis();
  const auto c = cand(s, {{"u", 0}, {"x", 1}});
  EXPECT_FALSE(theorem_condition(c, pa));
  EXPECT_FALSE(find_consistent_extension(c, pa).has_value());
  const auto ext = extend_to_global(c, pa);
  ASSERT_TRUE(std::holds_alternative<ConditionViolation>(ext));
  const auto& v = std::get<ConditionViolation>(ext);
  EXPECT_EQ(v.from, ck(s, "u", 0));
  EXPECT_EQ(v.to, ck(s, "x", 1));
  EXPECT_EQ(v.witness.size(), 2u);
  // Neither state happened-before the other: the dependence is not causal.
  EXPECT_FALSE(s.analysis->precedence().happened_before(st(s, "u", 0), st(s, "x", 2)));
}

TEST(Theorem, Fig3SingleMembers) {
  const Scenario s = fig3();
  const auto pa = s.pattern_analysis();
  const auto c = cand(s, {{"u", 0}});
  EXPECT_TRUE(theorem_condition(c, pa));
  const auto g = find_consistent_extension(c, pa);
  ASSERT_TRUE(g.has_value());
  EXPECT_TRUE(g->contains(c));
}

TEST(Theorem, Fig3CausalPairWitness) {
  const Scenario s = fig3();
  const auto pa = s.pattern_analysis();
  const auto c = cand(s, {{"u", 0}, {"y", 1}});
  EXPECT_FALSE(theorem_condition(c, pa));
  const auto ext = extend_to_global(c, pa);
  ASSERT_TRUE(std::holds_alternative<ConditionViolation>(ext));
  const auto& v = std::get<ConditionViolation>(ext);
  ASSERT_FALSE(v.witness.empty());
  EXPECT_EQ(v.witness.front().source.object, v.from.object);
  EXPECT_EQ(v.witness.back().target.object, v.to.object);
  EXPECT_TRUE(pa.paths().reachable(v.from, v.to));
}

TEST(Extend, Fig3XRankOne) {
  const Scenario s = fig3();
  const auto pa = s.pattern_analysis();
  const auto c = cand(s, {{"x", 1}});
  const auto ext = extend_to_global(c, pa);
  ASSERT_TRUE(std::holds_alternative<Extension>(ext));
  const auto& e = std::get<Extension>(ext);
  EXPECT_EQ(e.global.ranks, (std::vector<std::uint32_t>{1, 1, 1, 1}));  // u1 z4 y2 x2
  ASSERT_EQ(e.m_values.size(), 3u);
  for (const auto& m : e.m_values) EXPECT_EQ(m.value, 1u);
  EXPECT_TRUE(is_consistent_global_state(e.global, pa));
  EXPECT_TRUE(recovery_line_check(e.global, pa));
}

TEST(Theorem, SelfDependencePathMakesCheckpointUseless) {
  // T1 w y; T2 r y w x; T3 w x; T4 r x w y. x1 reaches itself through y.
  auto v = validate_execution(execution(
      2, {txn(1, {}, {1}), txn(2, {1}, {0}), txn(3, {}, {0}), txn(4, {0}, {1})}, {1, 2, 3, 4}));
  auto a = std::make_shared<const ExecutionAnalysis>(v);
  const PatternAnalysis pa(a, CheckpointPattern::make({{0, 1, 2}, {0, 2}}, a->timeline(), true));
  CandidateSet c;
  c.ranks[object_id(0)] = 1;
  EXPECT_TRUE(pa.paths().reachable({object_id(0), 1}, {object_id(0), 1}));
  EXPECT_FALSE(theorem_condition(c, pa));
  EXPECT_FALSE(find_consistent_extension(c, pa).has_value());
}

TEST(Theorem, CandidateValidation) {
  const Scenario s = fig3();
  const auto pa = s.pattern_analysis();
  EXPECT_THROW(theorem_condition(CandidateSet{}, pa), InputError);
  EXPECT_THROW(theorem_condition(cand(s, {{"u", 7}}), pa), InputError);
}

TEST(RecoveryLine, Fig1aExamples) {
  const Scenario s = builtin_scenario("fig1a");
  const auto& edges = s.analysis->edges();
  EXPECT_TRUE(recovery_line_check(std::vector<Version>{0, 1, 1}, edges));
  EXPECT_TRUE(recovery_line_check(std::vector<Version>{0, 0, 0}, edges));
  EXPECT_FALSE(recovery_line_check(std::vector<Version>{1, 0, 0}, edges));  // dashed y0 -> x1 crosses right to left
  EXPECT_FALSE(recovery_line_check(std::vector<Version>{0, 1, 0}, edges));  // black y0 -> z1 crosses
}

TEST(RecoveryLine, MatchesConsistencyOnBuiltins) {
  for (const auto& name : builtin_names()) {
    const Scenario s = builtin_scenario(name);
    const auto pa = s.pattern_analysis();
    std::vector<std::uint32_t> ranks(s.num_objects(), 0);
    while (true) {
      const GlobalCheckpoint g{ranks};
      EXPECT_EQ(recovery_line_check(g, pa), is_consistent_global_state(g, pa)) << name;
      std::uint32_t x = 0;
      while (x < ranks.size() && ++ranks[x] == s.pattern.count(object_id(x))) ranks[x++] = 0;
      if (x == ranks.size()) break;
    }
  }
}

TEST(Assemble, PicksExactThenNextHigher) {
  const std::vector<CheckpointRecord> log = {
      {object_id(0), 0, CheckpointKind::kInitial, 0}, {object_id(1), 0, CheckpointKind::kInitial, 0},
      {object_id(0), 3, CheckpointKind::kForced, 2},  {object_id(1), 1, CheckpointKind::kBasic, 1},
  };
  const auto s1 = assemble_indexed_gc(1, log, 2);
  ASSERT_TRUE(s1.has_value());
  EXPECT_EQ(*s1, (std::vector<std::size_t>{2, 3}));
  EXPECT_FALSE(assemble_indexed_gc(1, log, 2, false).has_value());
  EXPECT_FALSE(assemble_indexed_gc(2, log, 2).has_value());  // object 1 has nothing at index >= 2
  EXPECT_EQ(*assemble_indexed_gc(0, log, 2, false), (std::vector<std::size_t>{0, 1}));
}

// Independent brute force: a consistent global containing the set, using
// only the oracle model's happened-before.
bool oracle_extendable(const oracle::Model& m, const std::vector<std::vector<std::uint32_t>>& pattern,
                       const CandidateSet& c) {
  std::vector<std::uint32_t> ranks(pattern.size(), 0);
  for (const auto& [x, r] : c.ranks) ranks[raw(x)] = r;
  std::function<bool(std::uint32_t)> go = [&](std::uint32_t x) -> bool {
    if (x == pattern.size()) {
      for (std::uint32_t a = 0; a < pattern.size(); ++a) {
        for (std::uint32_t b = 0; b < pattern.size(); ++b) {
          if (m.happened_before({a, pattern[a][ranks[a]]}, {b, pattern[b][ranks[b]]})) return false;
        }
      }
      return true;
    }
    if (c.ranks.contains(object_id(x))) return go(x + 1);
    for (std::uint32_t r = 0; r < pattern[x].size(); ++r) {
      ranks[x] = r;
      if (go(x + 1)) return true;
    }
    return false;
  };
  return go(0);
}

TEST(TheoremProperties, ConditionMatchesBruteForce) {
  std::size_t extendable = 0, blocked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    WorkloadSpec w;
    w.num_objects = 2 + seed % 4;
    w.num_txns = 1 + seed % 8;
    w.max_checkpoints = 2 + seed % 3;
    w.seed = seed;
    const Scenario s = generate_random(w);
    const oracle::Model model(s.execution().execution());
    std::vector<std::vector<std::uint32_t>> pattern;
    for (std::uint32_t x = 0; x < s.num_objects(); ++x) {
      const auto v = s.pattern.versions(object_id(x));
      pattern.emplace_back(v.begin(), v.end());
    }
    const auto pa = s.pattern_analysis();
    const auto all = enumerate_consistent_globals(pa);
    for (const auto& g : all) ASSERT_TRUE(recovery_line_check(g, pa)) << seed;
    for (const auto& c : candidate_sets(s.pattern, 3)) {
      const bool cond = theorem_condition(c, pa);
      const bool expect = oracle_extendable(model, pattern, c);
      ASSERT_EQ(cond, expect) << "seed " << seed;
      ASSERT_EQ(find_consistent_extension(c, pa).has_value(), expect) << "seed " << seed;
      const auto ext = extend_to_global(c, pa);
      if (cond) {
        ++extendable;
        const auto& e = std::get<Extension>(ext);
        ASSERT_TRUE(e.global.contains(c));
        ASSERT_TRUE(is_consistent_global_state(e.global, pa)) << "seed " << seed;
        ASSERT_TRUE(std::find(all.begin(), all.end(), e.global) != all.end());
      } else {
        ++blocked;
        ASSERT_TRUE(std::holds_alternative<ConditionViolation>(ext));
      }
    }
  }
  EXPECT_GT(extendable, 0u);
  EXPECT_GT(blocked, 0u);
}

}  // namespace
