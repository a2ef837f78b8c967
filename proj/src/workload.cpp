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

#include "datackpt/workload.hpp"

#include <algorithm>
#include <string>

#include "datackpt/rng.hpp"

namespace datackpt {

void validate_workload(const WorkloadSpec& spec) {
  if (spec.num_txns > 0 && spec.num_objects == 0) throw InputError("num_objects", "must be >= 1 when num_txns > 0");
  if (spec.ops_min < 1) throw InputError("ops_min", "must be >= 1");
  if (spec.ops_max < spec.ops_min) throw InputError("ops_max", "must be >= ops_min");
  if (spec.write_permille > 1000) throw InputError("write_permille", "must be in [0, 1000]");
  if (spec.skew_permille > 1000) throw InputError("skew_permille", "must be in [0, 1000]");
  if (spec.max_checkpoints < 1) throw InputError("max_checkpoints", "must be >= 1");
}

std::vector<Transaction> generate_transactions(const WorkloadSpec& spec) {
  validate_workload(spec);
  Rng rng(spec.seed);
  const std::uint32_t hot = std::max<std::uint32_t>(1, spec.num_objects / 3);
  std::vector<Transaction> out;
  out.reserve(spec.num_txns);
  for (std::uint32_t t = 0; t < spec.num_txns; ++t) {
    Transaction txn;
    txn.id = txn_id(t + 1);
    const auto ops = rng.uniform(spec.ops_min, spec.ops_max);
    for (std::uint64_t k = 0; k < ops; ++k) {
      const std::uint32_t range = rng.chance(spec.skew_permille) ? hot : spec.num_objects;
      const ObjectId x = object_id(static_cast<std::uint32_t>(rng.uniform(0, range - 1)));
      (rng.chance(spec.write_permille) ? txn.write_set : txn.read_set).push_back(x);
    }
    for (auto* set : {&txn.read_set, &txn.write_set}) {
      std::sort(set->begin(), set->end());
      set->erase(std::unique(set->begin(), set->end()), set->end());
    }
    out.push_back(std::move(txn));
  }
  return out;
}

}  // namespace datackpt
