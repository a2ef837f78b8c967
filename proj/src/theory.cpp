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

#include "datackpt/theory.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "datackpt/checkpoint_log.hpp"

namespace datackpt {

std::vector<CheckpointId> CandidateSet::members() const {
  std::vector<CheckpointId> out;
  for (const auto& [x, r] : ranks) out.push_back({x, r});
  return out;
}

bool GlobalCheckpoint::contains(const CandidateSet& s) const {
  return std::all_of(s.ranks.begin(), s.ranks.end(),
                     [&](const auto& kv) { return raw(kv.first) < ranks.size() && ranks[raw(kv.first)] == kv.second; });
}

std::vector<LocalStateId> GlobalCheckpoint::states(const CheckpointPattern& pattern) const {
  std::vector<LocalStateId> out;
  out.reserve(ranks.size());
  for (std::uint32_t x = 0; x < ranks.size(); ++x) out.push_back(pattern.state({object_id(x), ranks[x]}));
  return out;
}

void validate_candidate(const CandidateSet& s, const CheckpointPattern& pattern) {
  if (s.ranks.empty()) throw InputError("candidate", "candidate set is empty");
  for (const auto& [x, r] : s.ranks) {
    if (!pattern.contains({x, r})) {
      throw InputError("candidate", "checkpoint " + std::to_string(raw(x)) + ":" + std::to_string(r) +
                                        " is not in the pattern");
    }
  }
}

bool is_consistent_global_state(std::span<const LocalStateId> states, const ExecutionAnalysis& analysis) {
  if (states.size() != analysis.num_objects()) {
    throw InputError("global_state", "expected one state per object (" + std::to_string(analysis.num_objects()) +
                                         "), got " + std::to_string(states.size()));
  }
  for (std::uint32_t x = 0; x < states.size(); ++x) {
    if (raw(states[x].object) != x) throw InputError("global_state", "states must be ordered by object");
  }
  for (const auto& a : states) {
    for (const auto& b : states) {
      if (analysis.precedence().happened_before(a, b)) return false;
    }
  }
  return true;
}

bool is_consistent_global_state(const GlobalCheckpoint& g, const PatternAnalysis& analysis) {
  const auto states = g.states(analysis.pattern());
  return is_consistent_global_state(states, analysis.execution());
}

std::optional<std::pair<CheckpointId, CheckpointId>> find_dp_violation(const CandidateSet& s,
                                                                       const PatternAnalysis& analysis) {
  validate_candidate(s, analysis.pattern());
  const auto members = s.members();
  for (const auto& from : members) {
    for (const auto& to : members) {
      if (analysis.paths().reachable(from, to)) return std::make_pair(from, to);
    }
  }
  return std::nullopt;
}

bool theorem_condition(const CandidateSet& s, const PatternAnalysis& analysis) {
  return !find_dp_violation(s, analysis).has_value();
}

std::variant<Extension, ConditionViolation> extend_to_global(const CandidateSet& s,
                                                             const PatternAnalysis& analysis) {
  if (auto v = find_dp_violation(s, analysis)) {
    auto witness = analysis.paths().witness(v->first, v->second);
    return ConditionViolation{v->first, v->second, witness.value_or(std::vector<DependenceEdge>{})};
  }
  const auto& pattern = analysis.pattern();
  const auto& paths = analysis.paths();
  Extension ext;
  ext.global.ranks.assign(pattern.num_objects(), 0);
  for (std::uint32_t xi = 0; xi < pattern.num_objects(); ++xi) {
    const ObjectId x = object_id(xi);
    if (auto it = s.ranks.find(x); it != s.ranks.end()) {
      ext.global.ranks[xi] = it->second;
      continue;
    }
    std::uint32_t rank = 0;
    for (const auto& [y, ry] : s.ranks) {
      std::uint32_t m = 0;
      if (ry != 0) {
        for (std::uint32_t i = 0; i < pattern.count(x); ++i) {
          if (!paths.reachable({x, i}, {y, ry})) {
            m = i;
            break;
          }
        }
      }
      ext.m_values.push_back({x, y, m});
      rank = std::max(rank, m);
    }
    ext.global.ranks[xi] = rank;
  }
  return ext;
}

std::uint64_t global_checkpoint_count(const CheckpointPattern& pattern) {
  std::uint64_t total = 1;
  for (std::uint32_t x = 0; x < pattern.num_objects(); ++x) {
    const std::uint64_t c = pattern.count(object_id(x));
    if (total > std::numeric_limits<std::uint64_t>::max() / c) return std::numeric_limits<std::uint64_t>::max();
    total *= c;
  }
  return total;
}

namespace {

// Pairwise <_LS test between two checkpoints, both directions.
bool dependent(const PatternAnalysis& a, LocalStateId s, LocalStateId t) {
  const auto& hb = a.execution().precedence();
  return hb.happened_before(s, t) || hb.happened_before(t, s);
}

}  // namespace

std::vector<GlobalCheckpoint> enumerate_consistent_globals(const PatternAnalysis& analysis, std::uint64_t bound) {
  const auto& pattern = analysis.pattern();
  const std::uint64_t total = global_checkpoint_count(pattern);
  if (total > bound) {
    throw OracleBoundExceeded("pattern has " + std::to_string(total) + " global checkpoints, bound is " +
                              std::to_string(bound));
  }
  const std::uint32_t m = pattern.num_objects();
  std::vector<GlobalCheckpoint> out;
  GlobalCheckpoint g;
  g.ranks.assign(m, 0);
  if (m == 0) return {g};
  for (;;) {
    if (is_consistent_global_state(g, analysis)) out.push_back(g);
    // Odometer: the last object varies fastest, giving lexicographic order.
    std::uint32_t x = m;
    while (x > 0) {
      --x;
      if (++g.ranks[x] < pattern.count(object_id(x))) break;
      g.ranks[x] = 0;
      if (x == 0) return out;
    }
  }
}

std::optional<GlobalCheckpoint> find_consistent_extension(const CandidateSet& s, const PatternAnalysis& analysis,
                                                          std::uint64_t bound) {
  const auto& pattern = analysis.pattern();
  validate_candidate(s, pattern);
  const std::uint32_t m = pattern.num_objects();
  for (const auto& a : s.ranks) {
    for (const auto& b : s.ranks) {
      if (analysis.execution().precedence().happened_before(pattern.state({a.first, a.second}),
                                                            pattern.state({b.first, b.second}))) {
        return std::nullopt;
      }
    }
  }
  GlobalCheckpoint g;
  g.ranks.assign(m, 0);
  std::vector<std::uint32_t> next(m, 0);  // next rank to try per depth
  std::uint64_t visited = 0;
  std::uint32_t depth = 0;
  auto fits = [&](std::uint32_t x, std::uint32_t r) {
    const LocalStateId st = pattern.state({object_id(x), r});
    for (std::uint32_t y = 0; y < x; ++y) {
      if (dependent(analysis, st, pattern.state({object_id(y), g.ranks[y]}))) return false;
    }
    return true;
  };
  while (true) {
    if (depth == m) return g;
    const ObjectId x = object_id(depth);
    const auto fixed = s.ranks.find(x);
    const std::uint32_t lo = fixed != s.ranks.end() ? fixed->second : 0;
    const std::uint32_t hi = fixed != s.ranks.end() ? fixed->second + 1 : pattern.count(x);
    bool advanced = false;
    for (std::uint32_t r = std::max(lo, next[depth]); r < hi; ++r) {
      if (++visited > bound) throw OracleBoundExceeded("extension search exceeded " + std::to_string(bound) + " steps");
      if (fits(depth, r)) {
        g.ranks[depth] = r;
        next[depth] = r + 1;
        ++depth;
        if (depth < m) next[depth] = 0;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      if (depth == 0) return std::nullopt;
      next[depth] = 0;
      --depth;
    }
  }
}

bool recovery_line_check(std::span<const Version> line, std::span<const DependenceEdge> edges) {
  for (const auto& e : edges) {
    const bool source_left = e.source.version < line[raw(e.source.object)];
    const bool target_left = e.target.version <= line[raw(e.target.object)];
    if (e.kind == EdgeKind::kBlack && source_left != target_left) return false;
    if (e.kind == EdgeKind::kDashed && !source_left && target_left) return false;
  }
  return true;
}

bool recovery_line_check(const GlobalCheckpoint& g, const PatternAnalysis& analysis) {
  if (g.ranks.size() != analysis.pattern().num_objects()) {
    throw InputError("line", "recovery line must have one checkpoint per object");
  }
  std::vector<Version> line;
  for (const auto& s : g.states(analysis.pattern())) line.push_back(s.version);
  return recovery_line_check(line, analysis.execution().edges());
}

std::vector<CandidateSet> candidate_sets(const CheckpointPattern& pattern, std::uint32_t max_size,
                                         std::size_t limit) {
  std::vector<CandidateSet> out;
  const std::uint32_t m = pattern.num_objects();
  std::vector<std::uint32_t> objs;
  // Recursive choice of an ascending object subset, then of ranks.
  auto ranks = [&](auto&& self, std::size_t k, CandidateSet& cur) -> void {
    if (out.size() >= limit) return;
    if (k == objs.size()) {
      out.push_back(cur);
      return;
    }
    const ObjectId x = object_id(objs[k]);
    for (std::uint32_t r = 0; r < pattern.count(x) && out.size() < limit; ++r) {
      cur.ranks[x] = r;
      self(self, k + 1, cur);
    }
    cur.ranks.erase(x);
  };
  auto subsets = [&](auto&& self, std::uint32_t from, std::uint32_t size) -> void {
    if (objs.size() == size) {
      CandidateSet cur;
      ranks(ranks, 0, cur);
      return;
    }
    for (std::uint32_t x = from; x < m && out.size() < limit; ++x) {
      objs.push_back(x);
      self(self, x + 1, size);
      objs.pop_back();
    }
  };
  for (std::uint32_t size = 1; size <= std::min(max_size, m); ++size) subsets(subsets, 0, size);
  return out;
}

AgreementStats check_theorem_agreement(const PatternAnalysis& analysis, std::uint32_t max_size, std::size_t limit,
                                       std::uint64_t bound) {
  AgreementStats stats;
  std::optional<std::vector<GlobalCheckpoint>> all;
  if (global_checkpoint_count(analysis.pattern()) <= bound) all = enumerate_consistent_globals(analysis, bound);
  for (const auto& s : candidate_sets(analysis.pattern(), max_size, limit)) {
    bool oracle = false;
    if (all) {
      oracle = std::any_of(all->begin(), all->end(), [&](const GlobalCheckpoint& g) { return g.contains(s); });
    } else {
      try {
        oracle = find_consistent_extension(s, analysis, bound).has_value();
      } catch (const OracleBoundExceeded&) {
        ++stats.skipped;
        continue;
      }
    }
    ++stats.checked;
    if (oracle) ++stats.extendable;
    if (oracle != theorem_condition(s, analysis)) {
      ++stats.disagreements;
      if (stats.first_disagreements.size() < 5) stats.first_disagreements.push_back(s);
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------

const char* to_string(CheckpointKind kind) {
  switch (kind) {
    case CheckpointKind::kInitial: return "initial";
    case CheckpointKind::kBasic: return "basic";
    case CheckpointKind::kForced: return "forced";
  }
  return "?";
}

std::optional<CheckpointKind> parse_checkpoint_kind(std::string_view s) {
  if (s == "initial") return CheckpointKind::kInitial;
  if (s == "basic") return CheckpointKind::kBasic;
  if (s == "forced") return CheckpointKind::kForced;
  return std::nullopt;
}

std::optional<std::vector<std::size_t>> assemble_indexed_gc(std::uint32_t n, std::span<const CheckpointRecord> log,
                                                            std::uint32_t num_objects, bool gap_fill) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> exact(num_objects, kNone);
  std::vector<std::size_t> after(num_objects, kNone);  // first with index > n
  for (std::size_t k = 0; k < log.size(); ++k) {
    const auto& r = log[k];
    const auto x = raw(r.object);
    if (x >= num_objects) continue;
    if (r.index == n && exact[x] == kNone) exact[x] = k;
    if (r.index > n && after[x] == kNone) after[x] = k;
  }
  std::vector<std::size_t> out(num_objects);
  for (std::uint32_t x = 0; x < num_objects; ++x) {
    if (exact[x] != kNone) {
      out[x] = exact[x];
    } else if (gap_fill && after[x] != kNone) {
      out[x] = after[x];
    } else {
      return std::nullopt;
    }
  }
  return out;
}

}  // namespace datackpt
