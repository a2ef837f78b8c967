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

#include "datackpt/protocol.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "datackpt/dependence.hpp"
#include "datackpt/theory.hpp"

namespace datackpt {

const char* to_string(Protocol p) { return p == Protocol::kA ? "A" : "B"; }

std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "A" || s == "a") return Protocol::kA;
  if (s == "B" || s == "b") return Protocol::kB;
  return std::nullopt;
}

const char* to_string(CommitScope s) { return s == CommitScope::kWriteSet ? "write-set" : "access-set"; }

std::optional<CommitScope> parse_commit_scope(std::string_view s) {
  if (s == "write-set") return CommitScope::kWriteSet;
  if (s == "access-set") return CommitScope::kAccessSet;
  return std::nullopt;
}

std::vector<CommitMessage> tm_commit_metadata(const Transaction& txn,
                                              const std::map<ObjectId, std::uint32_t>& observed,
                                              CommitScope scope) {
  std::uint32_t m = 0;
  for (ObjectId x : txn.access_set()) {
    auto it = observed.find(x);
    if (it == observed.end()) {
      throw InputError("observed", "no index observed for object " + std::to_string(raw(x)) + " accessed by T" +
                                       std::to_string(raw(txn.id)));
    }
    m = std::max(m, it->second);
  }
  std::vector<CommitMessage> out;
  for (ObjectId x : txn.access_set()) {
    const bool writes = txn.writes(x);
    if (writes || scope == CommitScope::kAccessSet) out.push_back({txn.id, m, x, writes});
  }
  return out;
}

Step<CheckpointRecord> dm_on_timer(DataManagerState dm, Tick reset_deadline, Protocol protocol, std::uint32_t z) {
  dm.index += 1;
  if (protocol == Protocol::kB && z > 0 && dm.index % z == 0) dm.v_threshold = std::max(dm.v_threshold, dm.index + z);
  dm.timer_deadline = reset_deadline;
  return {dm, CheckpointRecord{dm.object, dm.index, CheckpointKind::kBasic, dm.version}};
}

namespace {

void check_destination(const DataManagerState& dm, const CommitMessage& msg) {
  if (msg.destination != dm.object) {
    throw InputError("destination", "commit message for object " + std::to_string(raw(msg.destination)) +
                                        " delivered to object " + std::to_string(raw(dm.object)));
  }
}

void apply(DataManagerState& dm, const CommitMessage& msg) {
  if (msg.applies_write) ++dm.version;
}

}  // namespace

Step<std::optional<CheckpointRecord>> dm_on_commit_A(DataManagerState dm, const CommitMessage& msg,
                                                     Tick reset_deadline) {
  check_destination(dm, msg);
  std::optional<CheckpointRecord> record;
  if (dm.index < msg.max_index) {
    dm.index = msg.max_index;
    record = CheckpointRecord{dm.object, dm.index, CheckpointKind::kForced, dm.version};
    dm.timer_deadline = reset_deadline;
  }
  apply(dm, msg);
  return {dm, record};
}

Step<std::optional<CheckpointRecord>> dm_on_commit_B(DataManagerState dm, const CommitMessage& msg, std::uint32_t z,
                                                     Tick reset_deadline) {
  check_destination(dm, msg);
  if (z == 0) throw InputError("z", "must be >= 1");
  std::optional<CheckpointRecord> record;
  const std::uint32_t floor_m = msg.max_index / z * z;
  if (dm.v_threshold <= msg.max_index && floor_m > dm.index) {
    dm.index = floor_m;
    dm.v_threshold = floor_m + z;
    record = CheckpointRecord{dm.object, dm.index, CheckpointKind::kForced, dm.version};
    dm.timer_deadline = reset_deadline;
  }
  apply(dm, msg);
  return {dm, record};
}

namespace {

std::string describe(const CheckpointRecord& r, std::size_t pos) {
  std::ostringstream os;
  os << "log[" << pos << "] (object " << raw(r.object) << ", index " << r.index << ", version " << r.version << ")";
  return os.str();
}

}  // namespace

ProtocolReport verify_protocol_guarantees(const ValidatedExecution& execution,
                                          std::span<const CheckpointRecord> log, Protocol protocol,
                                          std::uint32_t z) {
  if (z == 0) throw InputError("z", "must be >= 1");
  ProtocolReport report;
  report.protocol = protocol;
  report.z = protocol == Protocol::kB ? z : 1;
  report.num_records = log.size();
  const std::uint32_t m = execution.num_objects();

  auto shared = std::make_shared<const ExecutionAnalysis>(execution);
  const auto& timeline = shared->timeline();
  std::vector<std::vector<Version>> versions(m);
  for (std::size_t k = 0; k < log.size(); ++k) {
    const auto& r = log[k];
    if (raw(r.object) >= m) throw InputError("checkpoint_log[" + std::to_string(k) + "]", "object out of range");
    if (r.version > timeline.final_version(r.object)) {
      throw InputError("checkpoint_log[" + std::to_string(k) + "]", "version beyond the object's final state");
    }
    versions[raw(r.object)].push_back(r.version);
  }

  // Per-object strictly increasing indices.
  std::vector<std::optional<std::size_t>> last(m);
  for (std::size_t k = 0; k < log.size(); ++k) {
    auto& prev = last[raw(log[k].object)];
    if (prev && log[*prev].index >= log[k].index) {
      report.violations.push_back({"index_not_increasing",
                                   describe(log[k], k) + " does not exceed " + describe(log[*prev], *prev),
                                   {*prev, k}});
    }
    prev = k;
  }

  PatternAnalysis pa(shared, CheckpointPattern::make(std::move(versions), timeline, false));
  const auto& paths = pa.paths();
  std::vector<CheckpointId> ck(log.size());
  for (std::size_t k = 0; k < log.size(); ++k) {
    ck[k] = {log[k].object, *pa.pattern().rank_of({log[k].object, log[k].version})};
  }
  const std::uint32_t zz = report.z;
  auto eligible = [&](std::uint32_t index) { return index % zz == 0; };

  for (std::size_t k = 0; k < log.size(); ++k) {
    if (!eligible(log[k].index)) continue;
    if (paths.reachable(ck[k], ck[k])) {
      report.violations.push_back({"self_dp", describe(log[k], k) + " has a DP to itself", {k}});
    }
    for (std::size_t l = 0; l < log.size(); ++l) {
      if (l == k || !eligible(log[l].index)) continue;
      ++report.dp_pairs_checked;
      if (paths.reachable(ck[k], ck[l]) && log[k].index >= log[l].index) {
        report.violations.push_back(
            {"dp_index_order", describe(log[k], k) + " DP-> " + describe(log[l], l) + " without a smaller index",
             {k, l}});
      }
    }
  }

  std::uint32_t max_index = 0;
  std::set<std::uint32_t> present;
  for (const auto& r : log) {
    max_index = std::max(max_index, r.index);
    if (eligible(r.index)) present.insert(r.index);
  }
  auto check_set = [&](std::uint32_t n, bool gap_fill) {
    auto picks = assemble_indexed_gc(n, log, m, gap_fill);
    if (!picks) return;
    (gap_fill ? report.gap_filled_sets_checked : report.indexed_sets_checked) += 1;
    std::vector<LocalStateId> states;
    for (std::size_t k : *picks) states.push_back({log[k].object, log[k].version});
    if (!is_consistent_global_state(states, *shared)) {
      report.violations.push_back({gap_fill ? "inconsistent_gap_filled_set" : "inconsistent_indexed_set",
                                   "S_" + std::to_string(n) + " is not a consistent global state", *picks});
    }
  };
  for (std::uint32_t n : present) check_set(n, false);
  if (m > 0) {
    for (std::uint32_t n = 0; n <= max_index; n += zz) check_set(n, true);
  }
  return report;
}

}  // namespace datackpt
