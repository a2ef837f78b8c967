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

#include "datackpt/execution.hpp"

#include <algorithm>
#include <string>

namespace datackpt {

namespace {

void normalize(std::vector<ObjectId>& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

bool contains_sorted(const std::vector<ObjectId>& set, ObjectId x) {
  return std::binary_search(set.begin(), set.end(), x);
}

}  // namespace

bool Transaction::reads(ObjectId x) const { return contains_sorted(read_set, x); }
bool Transaction::writes(ObjectId x) const { return contains_sorted(write_set, x); }

std::vector<ObjectId> Transaction::access_set() const {
  std::vector<ObjectId> out;
  std::set_union(read_set.begin(), read_set.end(), write_set.begin(), write_set.end(),
                 std::back_inserter(out));
  return out;
}

std::size_t ValidatedExecution::position_of(TxnId id) const {
  auto it = std::lower_bound(position_.begin(), position_.end(), std::make_pair(id, std::size_t{0}));
  if (it == position_.end() || it->first != id) {
    throw InputError("", "unknown transaction T" + std::to_string(raw(id)));
  }
  return it->second;
}

bool ValidatedExecution::contains(TxnId id) const {
  auto it = std::lower_bound(position_.begin(), position_.end(), std::make_pair(id, std::size_t{0}));
  return it != position_.end() && it->first == id;
}

ValidatedExecution validate_execution(Execution execution) {
  const std::size_t n = execution.transactions.size();

  std::vector<std::pair<TxnId, std::size_t>> index;  // id -> slot in transactions
  index.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& t = execution.transactions[i];
    const std::string field = "transactions[" + std::to_string(i) + "]";
    normalize(t.read_set);
    normalize(t.write_set);
    if (t.read_set.empty() && t.write_set.empty()) {
      throw InputError(field, "transaction T" + std::to_string(raw(t.id)) + " has empty read and write sets");
    }
    for (const auto* set : {&t.read_set, &t.write_set}) {
      if (!set->empty() && raw(set->back()) >= execution.num_objects) {
        throw InputError(field + (set == &t.read_set ? ".reads" : ".writes"),
                         "object " + std::to_string(raw(set->back())) + " out of range [0, " +
                             std::to_string(execution.num_objects) + ")");
      }
    }
    index.emplace_back(t.id, i);
  }
  std::sort(index.begin(), index.end());
  for (std::size_t i = 1; i < index.size(); ++i) {
    if (index[i].first == index[i - 1].first) {
      throw InputError("transactions[" + std::to_string(index[i].second) + "].id",
                       "duplicate transaction T" + std::to_string(raw(index[i].first)));
    }
  }

  ValidatedExecution out;
  out.by_position_.reserve(execution.commit_order.size());
  std::vector<bool> seen(n, false);
  for (std::size_t p = 0; p < execution.commit_order.size(); ++p) {
    const TxnId id = execution.commit_order[p];
    const std::string field = "commit_order[" + std::to_string(p) + "]";
    auto it = std::lower_bound(index.begin(), index.end(), std::make_pair(id, std::size_t{0}));
    if (it == index.end() || it->first != id) {
      throw InputError(field, "T" + std::to_string(raw(id)) + " is not a listed transaction");
    }
    if (seen[it->second]) {
      throw InputError(field, "duplicate T" + std::to_string(raw(id)) + " in commit order");
    }
    seen[it->second] = true;
    out.by_position_.push_back(it->second);
    out.position_.emplace_back(id, p);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw InputError("transactions[" + std::to_string(i) + "]",
                       "T" + std::to_string(raw(execution.transactions[i].id)) +
                           " never commits (only committed transactions belong to an execution)");
    }
  }
  std::sort(out.position_.begin(), out.position_.end());
  out.exec_ = std::move(execution);
  return out;
}

// ---------------------------------------------------------------------------

SerializationGraph::SerializationGraph(const ValidatedExecution& execution)
    : succ_(execution.num_txns()), closure_(execution.num_txns()) {
  const std::size_t n = execution.num_txns();
  ids_.reserve(n);
  for (std::size_t p = 0; p < n; ++p) ids_.push_back(execution.at_position(p).id);

  // Accessors of each object so far, split by mode, as positions.
  std::vector<std::vector<std::size_t>> readers(execution.num_objects());
  std::vector<std::vector<std::size_t>> writers(execution.num_objects());
  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Transaction& t = execution.at_position(j);
    std::vector<std::size_t> p;
    for (ObjectId x : t.access_set()) {
      // W_i(x) <_x R_j(x) / W_i(x) <_x W_j(x)
      p.insert(p.end(), writers[raw(x)].begin(), writers[raw(x)].end());
      // R_i(x) <_x W_j(x)
      if (t.writes(x)) p.insert(p.end(), readers[raw(x)].begin(), readers[raw(x)].end());
    }
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    std::erase(p, j);
    pred[j] = std::move(p);
    for (ObjectId x : t.read_set) readers[raw(x)].push_back(j);
    for (ObjectId x : t.write_set) writers[raw(x)].push_back(j);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i : pred[j]) succ_[i].push_back(j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(succ_[i].begin(), succ_[i].end());
    for (std::size_t j : succ_[i]) direct_ids_.emplace_back(ids_[i], ids_[j]);
  }
  // Successors commit later, so a reverse sweep sees every closure row it needs.
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j : succ_[i]) {
      closure_.set(i, j);
      closure_.merge_row(i, j);
    }
  }
}

bool SerializationGraph::directly_precedes(TxnId a, TxnId b) const {
  auto pa = std::find(ids_.begin(), ids_.end(), a);
  auto pb = std::find(ids_.begin(), ids_.end(), b);
  if (pa == ids_.end() || pb == ids_.end()) return false;
  const auto& s = succ_[static_cast<std::size_t>(pa - ids_.begin())];
  return std::binary_search(s.begin(), s.end(), static_cast<std::size_t>(pb - ids_.begin()));
}

bool SerializationGraph::precedes(TxnId a, TxnId b) const {
  auto pa = std::find(ids_.begin(), ids_.end(), a);
  auto pb = std::find(ids_.begin(), ids_.end(), b);
  if (pa == ids_.end() || pb == ids_.end()) return false;
  return closure_.test(static_cast<std::size_t>(pa - ids_.begin()), static_cast<std::size_t>(pb - ids_.begin()));
}

std::optional<std::vector<std::size_t>> SerializationGraph::topological_order() const {
  const std::size_t n = succ_.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& s : succ_) {
    for (std::size_t j : s) ++indegree[j];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = n; i-- > 0;) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t i = ready.back();
    ready.pop_back();
    order.push_back(i);
    for (std::size_t j : succ_[i]) {
      if (--indegree[j] == 0) ready.push_back(j);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

// ---------------------------------------------------------------------------

StateTimeline::StateTimeline(const ValidatedExecution& execution)
    : writers_(execution.num_objects()), accesses_(execution.num_txns()) {
  for (std::size_t p = 0; p < execution.num_txns(); ++p) {
    const Transaction& t = execution.at_position(p);
    ids_.push_back(t.id);
    for (ObjectId x : t.access_set()) {
      accesses_[p].push_back({x, static_cast<Version>(writers_[raw(x)].size()), t.writes(x)});
    }
    for (ObjectId x : t.write_set) writers_[raw(x)].push_back(p);
  }
  offsets_.assign(writers_.size() + 1, 0);
  for (std::size_t x = 0; x < writers_.size(); ++x) offsets_[x + 1] = offsets_[x] + writers_[x].size() + 1;
}

bool StateTimeline::contains(LocalStateId s) const {
  return raw(s.object) < writers_.size() && s.version <= writers_[raw(s.object)].size();
}

std::size_t StateTimeline::writer_position(LocalStateId s) const {
  if (!contains(s) || s.version == 0) {
    throw InputError("", "state (" + std::to_string(raw(s.object)) + "," + std::to_string(s.version) +
                             ") has no writer");
  }
  return writers_[raw(s.object)][s.version - 1];
}

TxnId StateTimeline::writer_of(LocalStateId s) const { return ids_[writer_position(s)]; }

const StateTimeline::Access* StateTimeline::find_access(std::size_t pos, ObjectId x) const {
  const auto& a = accesses_.at(pos);
  auto it = std::lower_bound(a.begin(), a.end(), x, [](const Access& e, ObjectId o) { return e.object < o; });
  return (it != a.end() && it->object == x) ? &*it : nullptr;
}

Version StateTimeline::pre_version(std::size_t pos, ObjectId x) const {
  const Access* a = find_access(pos, x);
  if (a == nullptr) {
    throw InputError("", "T" + std::to_string(raw(ids_.at(pos))) + " does not access object " +
                             std::to_string(raw(x)));
  }
  return a->pre;
}

std::optional<Version> StateTimeline::post_version(std::size_t pos, ObjectId x) const {
  const Access* a = find_access(pos, x);
  if (a == nullptr || !a->writes) return std::nullopt;
  return a->pre + 1;
}

LocalStateId StateTimeline::state_at(std::size_t index) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const auto x = static_cast<std::uint32_t>(it - offsets_.begin() - 1);
  return {object_id(x), static_cast<Version>(index - offsets_[x])};
}

}  // namespace datackpt
