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

#include "datackpt/dependence.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <string>

namespace datackpt {

namespace {

std::string describe(LocalStateId s) {
  return "(" + std::to_string(raw(s.object)) + "," + std::to_string(s.version) + ")";
}

std::string describe(CheckpointId c) {
  return std::to_string(raw(c.object)) + ":" + std::to_string(c.rank);
}

}  // namespace

StatePrecedence::StatePrecedence(const ValidatedExecution& execution, const SerializationGraph& graph,
                                 const StateTimeline& timeline)
    : timeline_(&timeline), reach_(timeline.num_states()) {
  const std::size_t n = execution.num_txns();
  // States reachable from each transaction node: its own post-states and,
  // through direct serialization edges, those of every later transaction.
  BitMatrix from_txn(n, timeline.num_states());
  std::vector<char> seen(n);
  std::vector<std::size_t> stack;
  for (std::size_t t = 0; t < n; ++t) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, t);
    seen[t] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (ObjectId x : execution.at_position(u).write_set) {
        from_txn.set(t, timeline.state_index({x, *timeline.post_version(u, x)}));
      }
      for (std::size_t v : graph.successors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  // A state's only outgoing edge goes to the transaction that overwrites it.
  for (std::size_t s = 0; s < timeline.num_states(); ++s) {
    const LocalStateId st = timeline.state_at(s);
    const LocalStateId next{st.object, st.version + 1};
    if (timeline.contains(next)) reach_.merge_row_from(s, from_txn, timeline.writer_position(next));
  }
}

bool StatePrecedence::happened_before(LocalStateId a, LocalStateId b) const {
  if (!timeline_->contains(a)) throw InputError("", "unknown local state " + describe(a));
  if (!timeline_->contains(b)) throw InputError("", "unknown local state " + describe(b));
  return reach_.test(timeline_->state_index(a), timeline_->state_index(b));
}

const char* to_string(EdgeKind kind) { return kind == EdgeKind::kBlack ? "black" : "dashed"; }

std::vector<DependenceEdge> derive_dependence_edges(const ValidatedExecution& execution,
                                                    const SerializationGraph& graph,
                                                    const StateTimeline& timeline) {
  std::vector<DependenceEdge> edges;
  const std::size_t n = execution.num_txns();
  for (std::size_t i = 0; i < n; ++i) {
    const Transaction& ti = execution.at_position(i);
    if (ti.write_set.empty()) continue;
    for (std::size_t j = i; j < n; ++j) {
      if (j != i && !graph.precedes_position(i, j)) continue;
      const Transaction& tj = execution.at_position(j);
      const EdgeKind kind = (i == j) ? EdgeKind::kBlack : EdgeKind::kDashed;
      for (ObjectId y : ti.write_set) {
        const LocalStateId source{y, timeline.pre_version(i, y)};
        for (ObjectId x : tj.write_set) {
          edges.push_back({source, {x, *timeline.post_version(j, x)}, kind, ti.id, tj.id});
        }
      }
    }
  }
  return edges;
}

ExecutionAnalysis::ExecutionAnalysis(ValidatedExecution execution)
    : execution_(std::move(execution)),
      graph_(execution_),
      timeline_(execution_),
      precedence_(execution_, graph_, timeline_),
      edges_(derive_dependence_edges(execution_, graph_, timeline_)) {}

bool happened_before_ls(LocalStateId a, LocalStateId b, const ExecutionAnalysis& analysis) {
  return analysis.precedence().happened_before(a, b);
}

// ---------------------------------------------------------------------------

CheckpointPattern CheckpointPattern::make(std::vector<std::vector<Version>> versions,
                                          const StateTimeline& timeline, bool close_final) {
  if (versions.size() != timeline.num_objects()) {
    throw InputError("checkpoints", "pattern covers " + std::to_string(versions.size()) + " objects, execution has " +
                                        std::to_string(timeline.num_objects()));
  }
  CheckpointPattern p;
  for (std::uint32_t x = 0; x < versions.size(); ++x) {
    auto& v = versions[x];
    v.push_back(0);
    if (close_final) v.push_back(timeline.final_version(object_id(x)));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.back() > timeline.final_version(object_id(x))) {
      throw InputError("checkpoints." + std::to_string(x),
                       "version " + std::to_string(v.back()) + " exceeds final version " +
                           std::to_string(timeline.final_version(object_id(x))));
    }
  }
  p.versions_ = std::move(versions);
  return p;
}

CheckpointPattern CheckpointPattern::all_states(const StateTimeline& timeline) {
  CheckpointPattern p;
  for (std::uint32_t x = 0; x < timeline.num_objects(); ++x) {
    std::vector<Version> v(timeline.final_version(object_id(x)) + 1);
    for (Version k = 0; k < v.size(); ++k) v[k] = k;
    p.versions_.push_back(std::move(v));
  }
  return p;
}

CheckpointPattern CheckpointPattern::initial_only(std::uint32_t num_objects) {
  CheckpointPattern p;
  p.versions_.assign(num_objects, std::vector<Version>{0});
  return p;
}

LocalStateId CheckpointPattern::state(CheckpointId c) const {
  if (!contains(c)) throw InputError("", "checkpoint " + describe(c) + " is not in the pattern");
  return {c.object, versions_[raw(c.object)][c.rank]};
}

std::optional<std::uint32_t> CheckpointPattern::rank_of(LocalStateId s) const {
  if (raw(s.object) >= versions_.size()) return std::nullopt;
  const auto& v = versions_[raw(s.object)];
  auto it = std::lower_bound(v.begin(), v.end(), s.version);
  if (it == v.end() || *it != s.version) return std::nullopt;
  return static_cast<std::uint32_t>(it - v.begin());
}

std::uint32_t CheckpointPattern::interval_rank(LocalStateId s) const {
  const auto& v = versions_.at(raw(s.object));
  return static_cast<std::uint32_t>(std::upper_bound(v.begin(), v.end(), s.version) - v.begin() - 1);
}

std::vector<Interval> build_intervals(const CheckpointPattern& pattern, const StateTimeline& timeline) {
  std::vector<Interval> out;
  for (std::uint32_t xi = 0; xi < pattern.num_objects(); ++xi) {
    const ObjectId x = object_id(xi);
    const auto v = pattern.versions(x);
    for (std::uint32_t r = 0; r < v.size(); ++r) {
      const Version end = (r + 1 < v.size()) ? v[r + 1] - 1 : timeline.final_version(x);
      out.push_back({x, r, v[r], end});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

DependencePaths::DependencePaths(const ExecutionAnalysis& analysis, const CheckpointPattern& pattern)
    : analysis_(&analysis), pattern_(&pattern) {
  if (pattern.num_objects() != analysis.num_objects()) {
    throw InputError("checkpoints", "pattern does not match the execution's object count");
  }
  offsets_.push_back(0);
  for (std::uint32_t x = 0; x < pattern.num_objects(); ++x) {
    for (std::uint32_t r = 0; r < pattern.count(object_id(x)); ++r) node_object_.push_back(object_id(x));
    offsets_.push_back(node_object_.size());
  }
  const std::size_t n = node_object_.size();

  // Project dependence edges onto intervals; keep one representative per
  // interval pair, preferring black edges, then the smallest edge.
  const auto& edges = analysis.edges();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> rep;
  auto better = [&](std::size_t a, std::size_t b) {
    const auto& ea = edges[a];
    const auto& eb = edges[b];
    return std::tie(ea.kind, ea.source, ea.target) < std::tie(eb.kind, eb.source, eb.target);
  };
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const std::size_t from = node(e.source.object, pattern.interval_rank(e.source));
    const std::size_t to = node(e.target.object, pattern.interval_rank({e.target.object, e.target.version - 1}));
    auto [it, inserted] = rep.try_emplace({from, to}, k);
    if (!inserted && better(k, it->second)) it->second = k;
  }
  dep_out_.assign(n, {});
  for (const auto& [key, k] : rep) dep_out_[key.first].emplace_back(key.second, k);

  via_dep_ = BitMatrix(n);
  std::vector<char> seen(n);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.clear();
    // Any dependence edge leaving s or a later interval of the same object.
    for (std::size_t u = s; u < offsets_[raw(node_object_[s]) + 1]; ++u) {
      for (const auto& [v, k] : dep_out_[u]) stack.push_back(v);
    }
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (seen[v]) continue;
      seen[v] = 1;
      via_dep_.set(s, v);
      if (v + 1 < offsets_[raw(node_object_[v]) + 1]) stack.push_back(v + 1);
      for (const auto& [w, k] : dep_out_[v]) stack.push_back(w);
    }
  }
}

void DependencePaths::check(CheckpointId c) const {
  if (!pattern_->contains(c)) throw InputError("", "checkpoint " + describe(c) + " is not in the pattern");
}

bool DependencePaths::reachable(CheckpointId from, CheckpointId to) const {
  check(from);
  check(to);
  if (from.object == to.object && from.rank < to.rank) return true;
  if (to.rank == 0) return false;
  return via_dep_.test(node(from.object, from.rank), node(to.object, to.rank - 1));
}

std::optional<std::vector<DependenceEdge>> DependencePaths::witness(CheckpointId from, CheckpointId to) const {
  check(from);
  check(to);
  if (from.object == to.object && from.rank < to.rank) return std::vector<DependenceEdge>{};
  if (to.rank == 0) return std::nullopt;

  // 0-1 BFS over (interval, used a dependence edge yet): succession costs 0,
  // dependence edges cost 1.
  const std::size_t n = node_object_.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  struct Parent {
    std::size_t state = kNone;
    std::size_t edge = kNone;
  };
  std::vector<std::size_t> dist(2 * n, kNone);
  std::vector<Parent> parent(2 * n);
  std::deque<std::size_t> queue;
  const std::size_t start = 2 * node(from.object, from.rank);
  const std::size_t goal = 2 * node(to.object, to.rank - 1) + 1;
  dist[start] = 0;
  queue.push_back(start);
  while (!queue.empty()) {
    const std::size_t st = queue.front();
    queue.pop_front();
    if (st == goal) break;
    const std::size_t v = st / 2;
    const std::size_t flag = st % 2;
    if (v + 1 < offsets_[raw(node_object_[v]) + 1]) {
      const std::size_t nx = 2 * (v + 1) + flag;
      if (dist[nx] == kNone || dist[nx] > dist[st]) {
        dist[nx] = dist[st];
        parent[nx] = {st, kNone};
        queue.push_front(nx);
      }
    }
    for (const auto& [w, k] : dep_out_[v]) {
      const std::size_t nx = 2 * w + 1;
      if (dist[nx] == kNone || dist[nx] > dist[st] + 1) {
        dist[nx] = dist[st] + 1;
        parent[nx] = {st, k};
        queue.push_back(nx);
      }
    }
  }
  if (dist[goal] == kNone) return std::nullopt;
  std::vector<DependenceEdge> path;
  for (std::size_t st = goal; st != start; st = parent[st].state) {
    if (parent[st].edge != kNone) path.push_back(analysis_->edges()[parent[st].edge]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::pair<Interval, Interval>> DependencePaths::interval_dependence_edges() const {
  const auto intervals = build_intervals(*pattern_, analysis_->timeline());
  std::vector<std::pair<Interval, Interval>> out;
  for (std::size_t v = 0; v < dep_out_.size(); ++v) {
    for (const auto& [w, k] : dep_out_[v]) out.emplace_back(intervals[v], intervals[w]);
  }
  return out;
}

bool dp_reachable(CheckpointId from, CheckpointId to, const DependencePaths& paths) {
  return paths.reachable(from, to);
}

PatternAnalysis::PatternAnalysis(std::shared_ptr<const ExecutionAnalysis> analysis, CheckpointPattern pattern)
    : analysis_(std::move(analysis)),
      pattern_(std::make_unique<const CheckpointPattern>(std::move(pattern))),
      paths_(std::make_unique<const DependencePaths>(*analysis_, *pattern_)) {}

}  // namespace datackpt
