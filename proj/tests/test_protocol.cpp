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

#include <algorithm>

#include "datackpt/protocol.hpp"
#include "test_util.hpp"

namespace {

using namespace datackpt;
using namespace testing_util;

DataManagerState dm(std::uint32_t object, std::uint32_t index, Version version = 0, std::uint32_t v = 0) {
  DataManagerState s;
  s.object = object_id(object);
  s.index = index;
  s.version = version;
  s.v_threshold = v;
  return s;
}

CommitMessage msg(std::uint32_t object, std::uint32_t m, bool writes = true) {
  return {txn_id(1), m, object_id(object), writes};
}

TEST(TransactionManager, MaxOfObservedIndices) {
  const auto t = txn(1, {0}, {1});
  const auto out = tm_commit_metadata(t, {{object_id(0), 0}, {object_id(1), 3}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].max_index, 3u);
  EXPECT_EQ(out[0].destination, object_id(1));
  EXPECT_TRUE(out[0].applies_write);
}

TEST(TransactionManager, ReadOnlyWriteSetScopeSendsNothing) {
  const auto t = txn(1, {0, 1}, {});
  EXPECT_TRUE(tm_commit_metadata(t, {{object_id(0), 4}, {object_id(1), 2}}).empty());
  const auto all = tm_commit_metadata(t, {{object_id(0), 4}, {object_id(1), 2}}, CommitScope::kAccessSet);
  ASSERT_EQ(all.size(), 2u);
  for (const auto& m : all) {
    EXPECT_EQ(m.max_index, 4u);
    EXPECT_FALSE(m.applies_write);
  }
}

TEST(TransactionManager, OneMessagePerWrittenObject) {
  const auto t = txn(1, {}, {0, 1});
  const auto out = tm_commit_metadata(t, {{object_id(0), 2}, {object_id(1), 1}});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].max_index, 2u);
  EXPECT_EQ(out[1].max_index, 2u);
  EXPECT_NE(out[0].destination, out[1].destination);
}

TEST(TransactionManager, MissingObservationThrows) {
  EXPECT_THROW(tm_commit_metadata(txn(1, {0}, {1}), {{object_id(1), 0}}), InputError);
}

TEST(DataManager, TimerIncrementsIndex) {
  auto s = dm_on_timer(dm(0, 0, 3), 40);
  EXPECT_EQ(s.state.index, 1u);
  EXPECT_EQ(s.state.timer_deadline, 40u);
  EXPECT_EQ(s.record.kind, CheckpointKind::kBasic);
  EXPECT_EQ(s.record.version, 3u);
  EXPECT_EQ(dm_on_timer(dm(0, 7), 0).state.index, 8u);
}

TEST(ProtocolA, ForcedWhenBehind) {
  const auto s = dm_on_commit_A(dm(2, 0, 5), msg(2, 3), 99);
  ASSERT_TRUE(s.record.has_value());
  EXPECT_EQ(s.record->kind, CheckpointKind::kForced);
  EXPECT_EQ(s.record->index, 3u);
  EXPECT_EQ(s.record->version, 5u);  // pre-commit state
  EXPECT_EQ(s.state.index, 3u);
  EXPECT_EQ(s.state.version, 6u);
  EXPECT_EQ(s.state.timer_deadline, 99u);
}

TEST(ProtocolA, NoForcedWhenAheadOrEqual) {
  for (std::uint32_t index : {5u, 3u}) {
    const auto s = dm_on_commit_A(dm(0, index, 1), msg(0, 3), 99);
    EXPECT_FALSE(s.record.has_value());
    EXPECT_EQ(s.state.index, index);
    EXPECT_EQ(s.state.version, 2u);
    EXPECT_EQ(s.state.timer_deadline, 0u);
  }
}

TEST(ProtocolA, ReadOnlyCommitDoesNotAdvanceVersion) {
  const auto s = dm_on_commit_A(dm(0, 0, 4), msg(0, 2, false), 0);
  ASSERT_TRUE(s.record.has_value());
  EXPECT_EQ(s.state.version, 4u);
}

TEST(ProtocolB, ForcedToMultipleOfZ) {
  const auto s = dm_on_commit_B(dm(0, 0), msg(0, 6), 4, 0);
  ASSERT_TRUE(s.record.has_value());
  EXPECT_EQ(s.state.index, 4u);
  EXPECT_EQ(s.state.v_threshold, 8u);
  const auto next = dm_on_commit_B(s.state, msg(0, 7), 4, 0);
  EXPECT_FALSE(next.record.has_value());
  EXPECT_EQ(next.state.index, 4u);
}

TEST(ProtocolB, NoForcedBelowNextMultiple) {
  EXPECT_FALSE(dm_on_commit_B(dm(0, 0), msg(0, 3), 4, 0).record.has_value());
  EXPECT_FALSE(dm_on_commit_B(dm(0, 5, 0, 8), msg(0, 7), 4, 0).record.has_value());
}

TEST(ProtocolB, BasicOnMultipleMovesThreshold) {
  const auto s = dm_on_timer(dm(0, 3, 0, 4), 0, Protocol::kB, 4);
  EXPECT_EQ(s.state.index, 4u);
  EXPECT_EQ(s.state.v_threshold, 8u);
  const auto t = dm_on_timer(dm(0, 4, 0, 8), 0, Protocol::kB, 4);
  EXPECT_EQ(t.state.v_threshold, 8u);
}

TEST(ProtocolB, ZOneBehavesLikeA) {
  for (std::uint32_t index = 0; index < 6; ++index) {
    for (std::uint32_t m = 0; m < 6; ++m) {
      DataManagerState b = dm(0, index, 2, index + 1);
      const auto a = dm_on_commit_A(dm(0, index, 2), msg(0, m), 7);
      const auto bb = dm_on_commit_B(b, msg(0, m), 1, 7);
      EXPECT_EQ(a.record, bb.record) << index << " " << m;
      EXPECT_EQ(a.state.index, bb.state.index);
    }
  }
}

TEST(DataManager, DestinationMismatchThrows) {
  EXPECT_THROW(dm_on_commit_A(dm(0, 0), msg(1, 1), 0), InputError);
  EXPECT_THROW(dm_on_commit_B(dm(0, 0), msg(1, 1), 2, 0), InputError);
  EXPECT_THROW(dm_on_commit_B(dm(0, 0), msg(0, 1), 0, 0), InputError);
}

bool has_kind(const ProtocolReport& r, const std::string& kind) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const ProtocolViolation& v) { return v.kind == kind; });
}

CheckpointRecord rec(std::uint32_t x, std::uint32_t index, Version v) {
  return {object_id(x), index, index == 0 ? CheckpointKind::kInitial : CheckpointKind::kBasic, v};
}

TEST(Verifier, ReportsAdversarialLog) {
  // x1 reaches itself through y; S_1 = {x1, y2} is inconsistent.
  const auto v = validate_execution(execution(
      2, {txn(1, {}, {1}), txn(2, {1}, {0}), txn(3, {}, {0}), txn(4, {0}, {1})}, {1, 2, 3, 4}));
  const std::vector<CheckpointRecord> log = {rec(0, 0, 0), rec(1, 0, 0), rec(0, 1, 1), rec(0, 2, 2), rec(1, 1, 2)};
  const auto r = verify_protocol_guarantees(v, log, Protocol::kA);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_kind(r, "self_dp"));
  EXPECT_TRUE(has_kind(r, "inconsistent_indexed_set"));
  EXPECT_EQ(r.num_records, log.size());
}

TEST(Verifier, ReportsNonIncreasingIndex) {
  const auto v = validate_execution(execution(1, {txn(1, {}, {0}), txn(2, {}, {0})}, {1, 2}));
  const std::vector<CheckpointRecord> log = {rec(0, 0, 0), rec(0, 2, 1), rec(0, 2, 2)};
  const auto r = verify_protocol_guarantees(v, log, Protocol::kA);
  EXPECT_TRUE(has_kind(r, "index_not_increasing"));
}

TEST(Verifier, HonestLogPasses) {
  const Scenario s = builtin_scenario("fig1a");
  const std::vector<CheckpointRecord> log = {rec(0, 0, 0), rec(1, 0, 0), rec(2, 0, 0),
                                             rec(1, 1, 1), rec(2, 1, 1), rec(0, 1, 1)};
  const auto r = verify_protocol_guarantees(s.execution(), log, Protocol::kA);
  EXPECT_TRUE(r.ok());
  EXPECT_GT(r.dp_pairs_checked, 0u);
  EXPECT_GT(r.indexed_sets_checked, 0u);
}

TEST(Verifier, ReportsDpIndexOrder) {
  // T1 w x; T2 w x,y: black x1 -> y1, so x's rank-1 checkpoint needs a smaller index than y1.
  const auto v = validate_execution(execution(2, {txn(1, {}, {0}), txn(2, {}, {0, 1})}, {1, 2}));
  const std::vector<CheckpointRecord> log = {rec(0, 0, 0), rec(1, 0, 0), rec(0, 2, 1), rec(1, 1, 1), rec(0, 3, 2)};
  const auto r = verify_protocol_guarantees(v, log, Protocol::kA);
  EXPECT_TRUE(has_kind(r, "dp_index_order"));
  EXPECT_TRUE(has_kind(r, "inconsistent_gap_filled_set"));
  EXPECT_FALSE(has_kind(r, "index_not_increasing"));
}

TEST(Verifier, ZZeroIsInputError) {
  const Scenario s = builtin_scenario("fig1a");
  EXPECT_THROW(verify_protocol_guarantees(s.execution(), {}, Protocol::kB, 0), InputError);
}

}  // namespace
