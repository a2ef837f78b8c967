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

#include "datackpt/simulation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

#include "datackpt/rng.hpp"

namespace datackpt {

void validate_config(const SimConfig& c, std::uint32_t num_objects) {
  if (c.num_sites < 1) throw InputError("num_sites", "must be >= 1");
  if (!c.object_placement.empty()) {
    if (c.object_placement.size() != num_objects) {
      throw InputError("object_placement", "must list one site per object (" + std::to_string(num_objects) + ")");
    }
    for (std::size_t x = 0; x < c.object_placement.size(); ++x) {
      if (c.object_placement[x] >= c.num_sites) {
        throw InputError("object_placement[" + std::to_string(x) + "]", "site out of range");
      }
    }
  }
  if (c.delay_min > c.delay_max) throw InputError("delay", "min must be <= max");
  if (c.timer_period < 1) throw InputError("timer_period", "must be >= 1");
  if (c.arrival_gap_min > c.arrival_gap_max) throw InputError("arrival_gap", "min must be <= max");
  if (c.exec_min > c.exec_max) throw InputError("exec", "min must be <= max");
  if (c.z < 1) throw InputError("z", "must be >= 1");
}

const char* to_string(SimEventKind kind) {
  switch (kind) {
    case SimEventKind::kTxnBegin: return "txn_begin";
    case SimEventKind::kLockAcquired: return "lock_acquired";
    case SimEventKind::kTxnCommit: return "txn_commit";
    case SimEventKind::kCommitDelivered: return "commit_msg_delivered";
    case SimEventKind::kTimerExpired: return "timer_expired";
  }
  return "?";
}

std::optional<SimEventKind> parse_sim_event_kind(std::string_view s) {
  for (auto k : {SimEventKind::kTxnBegin, SimEventKind::kLockAcquired, SimEventKind::kTxnCommit,
                 SimEventKind::kCommitDelivered, SimEventKind::kTimerExpired}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

namespace {

enum class Action : std::uint8_t { kBegin, kLockRequest, kCommit, kDeliver, kTimer };

struct Pending {
  Tick time;
  std::uint64_t seq;
  Action action;
  std::size_t txn;  // index into the transaction list
  std::uint32_t object;
  std::uint32_t value;  // M for kDeliver, timer generation for kTimer

  bool operator>(const Pending& o) const { return std::tie(time, seq) > std::tie(o.time, o.seq); }
};

struct TxnState {
  std::vector<ObjectId> access;
  std::size_t next_lock = 0;
  std::map<ObjectId, std::uint32_t> observed;
  std::uint32_t site = 0;
};

struct ObjectState {
  DataManagerState dm;
  std::optional<std::size_t> exclusive;
  std::set<std::size_t> shared;
  std::deque<std::pair<std::size_t, bool>> queue;  // (txn, exclusive)
  std::uint32_t timer_gen = 0;
  bool timer_pending = false;
  std::uint32_t site = 0;
};

class Simulator {
 public:
  Simulator(std::uint32_t num_objects, std::span<const Transaction> txns, const SimConfig& config)
      : config_(config), txns_(txns.begin(), txns.end()), rng_(config.seed) {
    trace_.config = config;
    trace_.execution.num_objects = num_objects;
    objects_.resize(num_objects);
    for (std::uint32_t x = 0; x < num_objects; ++x) {
      auto& o = objects_[x];
      o.dm.object = object_id(x);
      o.site = config.object_placement.empty() ? x % config.num_sites : config.object_placement[x];
      trace_.checkpoint_log.push_back({o.dm.object, 0, CheckpointKind::kInitial, 0});
    }
    states_.resize(txns_.size());
    for (std::size_t t = 0; t < txns_.size(); ++t) {
      states_[t].access = txns_[t].access_set();
      states_[t].site = static_cast<std::uint32_t>(t % config.num_sites);
    }
  }

  Trace run() {
    for (std::uint32_t x = 0; x < objects_.size(); ++x) arm_timer(x);
    Tick arrival = 0;
    for (std::size_t t = 0; t < txns_.size(); ++t) {
      if (t > 0) arrival += rng_.uniform(config_.arrival_gap_min, config_.arrival_gap_max);
      schedule(arrival, Action::kBegin, t, 0, 0);
    }
    while (!queue_.empty()) {
      const Pending p = queue_.top();
      queue_.pop();
      if (p.action == Action::kTimer) {
        if (outstanding_ == 0) break;  // no work left; timers alone never end
      } else {
        --outstanding_;
      }
      now_ = p.time;
      dispatch(p);
    }
    finish();
    return std::move(trace_);
  }

 private:
  void schedule(Tick time, Action action, std::size_t txn, std::uint32_t object, std::uint32_t value) {
    if (action != Action::kTimer) ++outstanding_;
    queue_.push({time, next_seq_++, action, txn, object, value});
  }

  void record(SimEventKind kind, std::optional<std::size_t> txn, std::optional<std::uint32_t> object,
              std::uint32_t value) {
    SimEvent e;
    e.time = now_;
    e.seq = trace_.events.size();
    e.kind = kind;
    if (txn) e.txn = txns_[*txn].id;
    if (object) e.object = object_id(*object);
    e.value = value;
    trace_.events.push_back(e);
  }

  Tick delay(std::uint32_t from_site, std::uint32_t to_site) {
    if (from_site == to_site) return config_.delay_min;
    return rng_.uniform(config_.delay_min, config_.delay_max);
  }

  Tick timer_deadline() { return now_ + config_.timer_period + rng_.uniform(0, config_.timer_jitter); }

  void arm_timer(std::uint32_t x) {
    auto& o = objects_[x];
    o.dm.timer_deadline = timer_deadline();
    schedule(o.dm.timer_deadline, Action::kTimer, 0, x, ++o.timer_gen);
  }

  void dispatch(const Pending& p) {
    switch (p.action) {
      case Action::kBegin:
        record(SimEventKind::kTxnBegin, p.txn, std::nullopt, 0);
        request_next(p.txn);
        break;
      case Action::kLockRequest: {
        auto& o = objects_[p.object];
        o.queue.emplace_back(p.txn, txns_[p.txn].writes(object_id(p.object)));
        try_grant(p.object);
        break;
      }
      case Action::kCommit:
        commit(p.txn);
        break;
      case Action::kDeliver:
        deliver(p.txn, p.object, p.value);
        break;
      case Action::kTimer:
        on_timer(p.object, p.value);
        break;
    }
  }

  void request_next(std::size_t t) {
    auto& s = states_[t];
    const std::uint32_t x = raw(s.access[s.next_lock]);
    schedule(now_ + delay(s.site, objects_[x].site), Action::kLockRequest, t, x, 0);
  }

  void try_grant(std::uint32_t x) {
    auto& o = objects_[x];
    while (!o.queue.empty()) {
      const auto [t, exclusive] = o.queue.front();
      if (o.exclusive || (exclusive && !o.shared.empty())) break;
      o.queue.pop_front();
      if (exclusive) {
        o.exclusive = t;
      } else {
        o.shared.insert(t);
      }
      granted(t, x);
    }
  }

  void granted(std::size_t t, std::uint32_t x) {
    auto& s = states_[t];
    const std::uint32_t index = objects_[x].dm.index;
    s.observed[object_id(x)] = index;
    record(SimEventKind::kLockAcquired, t, x, index);
    ++s.next_lock;
    if (s.next_lock < s.access.size()) {
      request_next(t);
    } else {
      schedule(now_ + rng_.uniform(config_.exec_min, config_.exec_max), Action::kCommit, t, 0, 0);
    }
  }

  void commit(std::size_t t) {
    const auto& txn = txns_[t];
    auto& s = states_[t];
    trace_.execution.commit_order.push_back(txn.id);
    const auto msgs = tm_commit_metadata(txn, s.observed, config_.commit_scope);
    std::uint32_t m = 0;
    for (const auto& [x, i] : s.observed) m = std::max(m, i);
    record(SimEventKind::kTxnCommit, t, std::nullopt, m);
    std::set<ObjectId> notified;
    for (const auto& msg : msgs) {
      notified.insert(msg.destination);
      const std::uint32_t x = raw(msg.destination);
      schedule(now_ + delay(s.site, objects_[x].site), Action::kDeliver, t, x, msg.max_index);
    }
    for (ObjectId x : s.access) {
      if (!notified.contains(x)) release(t, raw(x));
    }
  }

  void deliver(std::size_t t, std::uint32_t x, std::uint32_t m) {
    auto& o = objects_[x];
    const CommitMessage msg{txns_[t].id, m, object_id(x), txns_[t].writes(object_id(x))};
    const Tick deadline = timer_deadline();
    auto step = config_.protocol == Protocol::kA ? dm_on_commit_A(o.dm, msg, deadline)
                                                 : dm_on_commit_B(o.dm, msg, config_.z, deadline);
    o.dm = step.state;
    if (step.record) {
      trace_.checkpoint_log.push_back(*step.record);
      o.timer_pending = false;
      schedule(o.dm.timer_deadline, Action::kTimer, 0, x, ++o.timer_gen);
    }
    record(SimEventKind::kCommitDelivered, t, x, m);
    release(t, x);
  }

  void release(std::size_t t, std::uint32_t x) {
    auto& o = objects_[x];
    if (o.exclusive == t) o.exclusive.reset();
    o.shared.erase(t);
    if (o.timer_pending && !o.exclusive) {
      o.timer_pending = false;
      basic_checkpoint(x);
    }
    try_grant(x);
  }

  void on_timer(std::uint32_t x, std::uint32_t gen) {
    auto& o = objects_[x];
    if (gen != o.timer_gen) return;
    if (o.exclusive) {
      o.timer_pending = true;
      return;
    }
    basic_checkpoint(x);
  }

  void basic_checkpoint(std::uint32_t x) {
    auto& o = objects_[x];
    auto step = dm_on_timer(o.dm, timer_deadline(), config_.protocol, config_.z);
    o.dm = step.state;
    trace_.checkpoint_log.push_back(step.record);
    record(SimEventKind::kTimerExpired, std::nullopt, x, o.dm.index);
    schedule(o.dm.timer_deadline, Action::kTimer, 0, x, ++o.timer_gen);
  }

  void finish() {
    if (trace_.execution.commit_order.size() != txns_.size()) {
      throw std::logic_error("simulation ended with uncommitted transactions");
    }
    trace_.execution.transactions = txns_;
    // Normalizes the sets and double-checks the run against the model.
    const auto validated = validate_execution(trace_.execution);
    trace_.execution = validated.execution();
    const StateTimeline timeline(validated);
    for (const auto& o : objects_) {
      if (timeline.final_version(o.dm.object) != o.dm.version) {
        throw std::logic_error("data manager version disagrees with the commit-order timeline");
      }
      if (o.exclusive || !o.shared.empty() || !o.queue.empty()) throw std::logic_error("locks left held");
    }
  }

  const SimConfig& config_;
  std::vector<Transaction> txns_;
  Rng rng_;
  Trace trace_;
  std::vector<ObjectState> objects_;
  std::vector<TxnState> states_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t outstanding_ = 0;
  Tick now_ = 0;
};

}  // namespace

Trace run_simulation(std::uint32_t num_objects, std::span<const Transaction> transactions, const SimConfig& config) {
  validate_config(config, num_objects);
  // Reuse the model checks on the transaction sets before running.
  Execution probe{num_objects, {transactions.begin(), transactions.end()}, {}};
  for (const auto& t : transactions) probe.commit_order.push_back(t.id);
  const auto validated = validate_execution(probe);
  std::vector<Transaction> normalized;
  for (const auto& t : transactions) normalized.push_back(validated.txn(t.id));
  return Simulator(num_objects, normalized, config).run();
}

Trace run_simulation(const WorkloadSpec& workload, const SimConfig& config) {
  const auto txns = generate_transactions(workload);
  return run_simulation(workload.num_objects, txns, config);
}

std::uint64_t CheckpointCounts::total_basic() const { return std::accumulate(basic.begin(), basic.end(), 0ULL); }
std::uint64_t CheckpointCounts::total_forced() const { return std::accumulate(forced.begin(), forced.end(), 0ULL); }

CheckpointCounts count_checkpoints(const Trace& trace) {
  CheckpointCounts c;
  c.basic.assign(trace.execution.num_objects, 0);
  c.forced.assign(trace.execution.num_objects, 0);
  for (const auto& r : trace.checkpoint_log) {
    if (raw(r.object) >= trace.execution.num_objects) continue;
    if (r.kind == CheckpointKind::kBasic) ++c.basic[raw(r.object)];
    if (r.kind == CheckpointKind::kForced) ++c.forced[raw(r.object)];
  }
  return c;
}

ProtocolReport verify_protocol_guarantees(const Trace& trace) {
  return verify_protocol_guarantees(validate_execution(trace.execution), trace.checkpoint_log, trace.config.protocol,
                                    trace.config.z);
}

}  // namespace datackpt
