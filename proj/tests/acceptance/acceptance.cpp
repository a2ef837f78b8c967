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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "datackpt/batch.hpp"
#include "datackpt/report.hpp"

namespace {

using namespace datackpt;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body, double limit_seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_seconds) {
    o.pass = false;
    o.detail += " [over time limit]";
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%s; %.3f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

CheckpointId ck(const Scenario& s, const char* name, std::uint32_t rank) { return {*s.find_object(name), rank}; }
LocalStateId st(const Scenario& s, const char* name, Version v) { return {*s.find_object(name), v}; }

Outcome fig1a_golden() {
  const Scenario s = builtin_scenario("fig1a");
  const PatternAnalysis pa(s.analysis, CheckpointPattern::all_states(s.analysis->timeline()));
  const auto gs = enumerate_consistent_globals(pa);
  std::vector<std::string> got;
  for (const auto& g : gs) {
    std::string name;
    for (const auto& state : g.states(pa.pattern())) name += format_state(s, state);
    got.push_back(name);
  }
  const std::vector<std::string> expected = {"x0y0z0", "x0y1z1", "x1y1z1"};
  const bool excluded = std::find(got.begin(), got.end(), "x1y0z1") == got.end();
  std::ostringstream d;
  d << gs.size() << " consistent globals";
  return {got == expected && excluded, d.str()};
}

Outcome alpha_squared() {
  const Scenario s = builtin_scenario("fig1a");
  std::size_t t1 = 0;
  for (const auto& e : s.analysis->edges()) t1 += e.kind == EdgeKind::kBlack && e.source_txn == txn_id(1);
  const auto r = run_theorem_batch(TheoremBatch{});
  std::ostringstream d;
  d << "T1 black edges " << t1 << ", alpha^2 failures " << r.alpha_squared_failures << " over " << r.instances
    << " random scenarios";
  return {t1 == 4 && r.alpha_squared_failures == 0 && r.instances == 1000, d.str()};
}

Outcome fig3_hidden() {
  const Scenario s = builtin_scenario("fig3");
  const auto& g = s.analysis->graph();
  const bool pre = g.precedes(txn_id(1), txn_id(6)) && !g.precedes(txn_id(1), txn_id(7)) &&
                   !g.precedes(txn_id(7), txn_id(1));
  std::size_t z0 = 0;
  for (const auto& iv : build_intervals(s.pattern, s.analysis->timeline())) {
    if (iv.object == *s.find_object("z") && iv.rank == 0) z0 = iv.size();
  }
  const auto& hb = s.analysis->precedence();
  const bool unrelated = !hb.happened_before(st(s, "u", 0), st(s, "x", 2)) &&
                         !hb.happened_before(st(s, "x", 2), st(s, "u", 0));
  const bool causal = hb.happened_before(st(s, "u", 0), st(s, "y", 2));
  const PatternAnalysis pa = s.pattern_analysis();
  const bool dp = dp_reachable(ck(s, "u", 0), ck(s, "x", 1), pa.paths());
  CandidateSet both;
  both.ranks[*s.find_object("u")] = 0;
  both.ranks[*s.find_object("x")] = 1;
  const auto all = enumerate_consistent_globals(pa);
  const bool none = std::none_of(all.begin(), all.end(), [&](const GlobalCheckpoint& gc) { return gc.contains(both); });
  std::ostringstream d;
  d << "preconditions " << pre << ", |I0_z| " << z0 << ", u0||x2 " << unrelated << ", u0<y2 " << causal << ", DP "
    << dp << ", " << all.size() << " consistent globals, none with both " << none;
  return {pre && z0 == 4 && unrelated && causal && dp && none, d.str()};
}

TheoremBatchResult theorem_result;
bool theorem_ran = false;

const TheoremBatchResult& theorem_batch() {
  if (!theorem_ran) {
    theorem_result = run_theorem_batch(TheoremBatch{});
    theorem_ran = true;
  }
  return theorem_result;
}

Outcome theorem_equivalence() {
  const auto& r = theorem_batch();
  std::ostringstream d;
  d << r.instances << " instances, " << r.sets_checked << " sets, " << r.extendable << " extendable, "
    << r.hidden_dependences << " hidden, " << r.disagreements << " disagreements, " << r.skipped << " skipped";
  return {r.instances == 1000 && r.disagreements == 0 && r.skipped == 0 && r.sets_checked > 0, d.str()};
}

Outcome construction_validity() {
  const auto& r = theorem_batch();
  std::ostringstream d;
  d << r.constructions << " constructions, " << r.construction_failures << " failures";
  return {r.constructions == r.extendable && r.construction_failures == 0 && r.constructions > 0, d.str()};
}

Outcome recovery_line() {
  TheoremBatch b;
  b.instances = 100;
  b.first_seed = 5001;
  b.max_set_size = 1;
  const auto r = run_theorem_batch(b);
  std::ostringstream d;
  d << r.instances << " instances, " << r.globals_checked << " globals, " << r.line_mismatches << " mismatches";
  return {r.instances == 100 && r.line_mismatches == 0 && r.globals_checked > 0, d.str()};
}

ProtocolBatchResult protocol_b;
bool protocol_b_ran = false;

const ProtocolBatchResult& protocol_b_batch() {
  if (!protocol_b_ran) {
    ProtocolBatch b;
    b.protocol = Protocol::kB;
    b.z_values = {1, 2, 4, 8};
    protocol_b = run_protocol_batch(b);
    protocol_b_ran = true;
  }
  return protocol_b;
}

std::string protocol_detail(const ProtocolBatchResult& r) {
  std::size_t dp = 0, sets = 0, gaps = 0;
  for (const auto& run : r.runs) {
    dp += run.report.dp_pairs_checked;
    sets += run.report.indexed_sets_checked;
    gaps += run.report.gap_filled_sets_checked;
  }
  std::ostringstream d;
  d << r.runs.size() << " runs, " << dp << " DP pairs, " << sets << " indexed sets, " << gaps
    << " gap-filled sets, " << r.violations << " violations";
  return d.str();
}

Outcome protocol_a() {
  const auto r = run_protocol_batch(ProtocolBatch{});
  return {r.runs.size() == 200 && r.violations == 0, protocol_detail(r)};
}

Outcome protocol_b_guarantees() {
  const auto& r = protocol_b_batch();
  return {r.runs.size() == 800 && r.violations == 0, protocol_detail(r)};
}

Outcome z_trend() {
  const auto& r = protocol_b_batch();
  std::ostringstream d;
  d << "mean forced by Z:";
  bool enough = true;
  for (const auto& [z, total] : r.forced_by_z) {
    const auto n = r.runs_by_z.at(z);
    enough &= n >= 100;
    d << " " << z << "=" << static_cast<double>(total) / n;
  }
  return {enough && r.forced_by_z.size() == 4 && r.forced_non_increasing(), d.str()};
}

Outcome determinism() {
  std::size_t compared = 0;
  bool same = true;
  auto twice = [&](const std::function<std::string()>& f) {
    same &= f() == f();
    ++compared;
  };
  for (const auto& name : builtin_names()) {
    twice([&] { return dump_json(analyze_command(builtin_scenario(name)).report); });
  }
  const Scenario fig3 = builtin_scenario("fig3");
  twice([&] { return dump_json(check_command(fig3, parse_candidate(fig3, {"u:0", "x:1"})).report); });
  twice([&] { return dump_json(extend_command(fig3, parse_candidate(fig3, {"x:1"})).report); });
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    WorkloadSpec w;
    w.num_objects = 6;
    w.num_txns = 40;
    w.seed = seed;
    SimConfig c;
    c.seed = seed * 7;
    c.num_sites = 3;
    c.timer_jitter = 5;
    c.protocol = seed % 2 ? Protocol::kA : Protocol::kB;
    c.z = 1 + seed % 4;
    twice([&] {
      Trace t;
      const auto r = simulate_command(w, c, &t);
      return dump_json(r.report) + dump_json(trace_to_json(t)) + dump_json(verify_trace_command(t).report);
    });
  }
  BatchSpec spec;
  spec.theorem = TheoremBatch{20};
  spec.protocol = ProtocolBatch{10};
  twice([&] { return dump_json(verify_batch_command(spec).report); });
  std::ostringstream d;
  d << compared << " commands repeated";
  return {same, d.str()};
}

}  // namespace

int main() {
  run(1, "fig-1a consistent global states", fig1a_golden, 1.0);
  run(2, "black edges per transaction", alpha_squared, 300.0);
  run(3, "fig-3 hidden dependence", fig3_hidden, 1.0);
  run(4, "theorem condition equals brute-force extendability", theorem_equivalence, 300.0);
  run(5, "construction yields a consistent global checkpoint", construction_validity, 300.0);
  run(6, "recovery-line crossing rules equal consistency", recovery_line, 300.0);
  run(7, "protocol A guarantees", protocol_a, 300.0);
  run(8, "protocol B guarantees for Z in {1,2,4,8}", protocol_b_guarantees, 300.0);
  run(9, "forced checkpoints non-increasing in Z", z_trend, 300.0);
  run(10, "byte-identical repeated reports and traces", determinism, 300.0);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
