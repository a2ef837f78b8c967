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

#include "datackpt/execution.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using namespace datackpt;
using namespace testing_util;

// x=0, y=1, z=2
Execution fig1(std::vector<std::uint32_t> order) {
  return execution(3, {txn(1, {0}, {1, 2}), txn(2, {1}, {0})}, std::move(order));
}

TEST(ValidateExecution, AcceptsFig1a) {
  const auto v = validate_execution(fig1({1, 2}));
  EXPECT_EQ(v.num_txns(), 2u);
  EXPECT_EQ(v.at_position(0).id, txn_id(1));
  EXPECT_EQ(v.position_of(txn_id(2)), 1u);
}

TEST(ValidateExecution, AcceptsEmpty) {
  const auto v = validate_execution(execution(0, {}, {}));
  EXPECT_EQ(v.num_txns(), 0u);
  const StateTimeline tl(v);
  EXPECT_EQ(tl.num_states(), 0u);
}

TEST(ValidateExecution, RejectsDuplicateInOrder) {
  EXPECT_THROW(validate_execution(execution(1, {txn(1, {0}, {})}, {1, 1})), InputError);
}

TEST(ValidateExecution, RejectsDuplicateId) {
  EXPECT_THROW(validate_execution(execution(1, {txn(1, {0}, {}), txn(1, {}, {0})}, {1})), InputError);
}

TEST(ValidateExecution, RejectsUnknownIdInOrder) {
  try {
    validate_execution(execution(1, {txn(1, {0}, {})}, {1, 2}));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.field(), "commit_order[1]");
  }
}

TEST(ValidateExecution, RejectsEmptySets) {
  EXPECT_THROW(validate_execution(execution(1, {txn(1, {}, {})}, {1})), InputError);
}

TEST(ValidateExecution, RejectsObjectOutOfRange) {
  try {
    validate_execution(execution(2, {txn(1, {0}, {2})}, {1}));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.field(), "transactions[0].writes");
  }
}

TEST(ValidateExecution, RejectsUncommittedTransaction) {
  EXPECT_THROW(validate_execution(execution(1, {txn(1, {0}, {}), txn(2, {0}, {})}, {1})), InputError);
}

TEST(ValidateExecution, NormalizesSets) {
  const auto v = validate_execution(execution(3, {txn(1, {2, 0, 2}, {1, 1})}, {1}));
  EXPECT_EQ(v.txn(txn_id(1)).read_set, (std::vector<ObjectId>{object_id(0), object_id(2)}));
  EXPECT_EQ(v.txn(txn_id(1)).write_set, (std::vector<ObjectId>{object_id(1)}));
}

TEST(SerializationGraph, Fig1aSingleEdge) {
  const auto v = validate_execution(fig1({1, 2}));
  const SerializationGraph g(v);
  using P = std::pair<TxnId, TxnId>;
  EXPECT_EQ(g.direct_edges(), (std::vector<P>{{txn_id(1), txn_id(2)}}));
  EXPECT_TRUE(g.precedes(txn_id(1), txn_id(2)));
  EXPECT_FALSE(g.precedes(txn_id(2), txn_id(1)));
}

TEST(SerializationGraph, Fig1bReversed) {
  const auto v = validate_execution(fig1({2, 1}));
  const SerializationGraph g(v);
  using P = std::pair<TxnId, TxnId>;
  EXPECT_EQ(g.direct_edges(), (std::vector<P>{{txn_id(2), txn_id(1)}}));
}

TEST(SerializationGraph, SingleTransactionNoEdges) {
  const SerializationGraph g(validate_execution(execution(2, {txn(1, {0}, {1})}, {1})));
  EXPECT_TRUE(g.direct_edges().empty());
}

TEST(SerializationGraph, ReadReadIsNotAConflict) {
  const SerializationGraph g(validate_execution(execution(1, {txn(1, {0}, {}), txn(2, {0}, {})}, {1, 2})));
  EXPECT_TRUE(g.direct_edges().empty());
}

TEST(SerializationGraph, ClosureThroughReadOnlyTransaction) {
  // T1 writes x; T2 reads x and y; T3 writes y. T1 <_T T2 <_T T3.
  const SerializationGraph g(
      validate_execution(execution(2, {txn(1, {}, {0}), txn(2, {0, 1}, {}), txn(3, {}, {1})}, {1, 2, 3})));
  EXPECT_FALSE(g.directly_precedes(txn_id(1), txn_id(3)));
  EXPECT_TRUE(g.precedes(txn_id(1), txn_id(3)));
  ASSERT_TRUE(g.topological_order().has_value());
}

TEST(StateTimeline, Fig1aWriters) {
  const auto v = validate_execution(fig1({1, 2}));
  const StateTimeline tl(v);
  EXPECT_EQ(tl.writer_of({object_id(0), 1}), txn_id(2));
  EXPECT_EQ(tl.writer_of({object_id(1), 1}), txn_id(1));
  EXPECT_EQ(tl.writer_of({object_id(2), 1}), txn_id(1));
  EXPECT_EQ(tl.pre_version(1, object_id(1)), 1u);  // T2 reads y after T1
  EXPECT_EQ(tl.num_states(), 6u);
}

TEST(StateTimeline, Fig3ZVersions) {
  const Scenario s = fig3();
  const auto& tl = s.analysis->timeline();
  const ObjectId z = *s.find_object("z");
  const std::uint32_t writers[] = {2, 3, 4, 5};
  for (Version k = 1; k <= 4; ++k) EXPECT_EQ(tl.writer_of({z, k}), txn_id(writers[k - 1])) << k;
  EXPECT_EQ(tl.final_version(z), 4u);
}

TEST(StateTimeline, NoWritesKeepsVersionZero) {
  const auto v = validate_execution(execution(2, {txn(1, {0, 1}, {}), txn(2, {1}, {})}, {2, 1}));
  const StateTimeline tl(v);
  EXPECT_EQ(tl.final_version(object_id(0)), 0u);
  EXPECT_EQ(tl.final_version(object_id(1)), 0u);
}

TEST(StateTimeline, UnknownStateThrows) {
  const auto v = validate_execution(fig1({1, 2}));
  const StateTimeline tl(v);
  EXPECT_FALSE(tl.contains({object_id(0), 2}));
  EXPECT_THROW(tl.writer_of({object_id(0), 2}), InputError);
}

TEST(ExecutionProperties, RandomInstancesMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    WorkloadSpec w;
    w.num_objects = 1 + seed % 5;
    w.num_txns = seed % 9;
    w.seed = seed;
    const Scenario s = generate_random(w);
    const auto& v = s.execution();
    const oracle::Model model(v.execution());
    const auto& g = s.analysis->graph();
    const auto& tl = s.analysis->timeline();
    ASSERT_TRUE(g.topological_order().has_value());
    for (std::size_t a = 0; a < v.num_txns(); ++a) {
      for (std::size_t b = 0; b < v.num_txns(); ++b) {
        ASSERT_EQ(g.precedes_position(a, b), model.txn_closure[a][b]) << seed;
        if (g.precedes_position(a, b)) { ASSERT_LT(a, b); }
      }
      for (ObjectId x : v.at_position(a).write_set) {
        ASSERT_EQ(*tl.post_version(a, x), tl.pre_version(a, x) + 1);
        ASSERT_EQ(tl.pre_version(a, x), model.pre[a][raw(x)]);
      }
    }
    for (std::uint32_t x = 0; x < v.num_objects(); ++x) {
      ASSERT_EQ(tl.final_version(object_id(x)), model.final_version[x]);
      for (Version k = 1; k <= tl.final_version(object_id(x)); ++k) {
        ASSERT_LT(tl.writer_position({object_id(x), k - 1 + 1}), v.num_txns());
      }
    }
  }
}

}  // namespace
