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

#include "datackpt/report.hpp"

#include <algorithm>

namespace datackpt {

namespace {

Json header(const std::string& command) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  return j;
}

CommandResult finish(Json j, bool ok, int exit_code) {
  j["ok"] = ok;
  j["exit_code"] = exit_code;
  return {std::move(j), exit_code};
}

Json candidate_json(const Scenario& s, const CandidateSet& c) {
  Json members = Json::array();
  for (const auto& m : c.members()) members.push_back(format_checkpoint(s, m));
  return members;
}

Json candidate_states(const Scenario& s, const CandidateSet& c) {
  Json states = Json::array();
  for (const auto& m : c.members()) states.push_back(format_state(s, s.pattern.state(m)));
  return states;
}

Json global_json(const Scenario& s, const GlobalCheckpoint& g, const CandidateSet* members) {
  Json out = Json::array();
  for (std::uint32_t x = 0; x < g.ranks.size(); ++x) {
    const CheckpointId c{object_id(x), g.ranks[x]};
    Json jm;
    jm["object"] = s.object_name(c.object);
    jm["rank"] = c.rank;
    jm["state"] = format_state(s, s.pattern.state(c));
    if (members) jm["member"] = members->ranks.contains(c.object);
    out.push_back(std::move(jm));
  }
  return out;
}

Json violation_json(const Scenario& s, const ConditionViolation& v) {
  Json j;
  j["from"] = format_checkpoint(s, v.from);
  j["to"] = format_checkpoint(s, v.to);
  j["same_object_rank_order"] = v.witness.empty();
  j["witness_length"] = v.witness.size();
  Json w = Json::array();
  for (const auto& e : v.witness) w.push_back(edge_to_json(s, e));
  j["witness"] = std::move(w);
  return j;
}

}  // namespace

Json edge_to_json(const Scenario& s, const DependenceEdge& e) {
  Json j;
  j["source"] = format_state(s, e.source);
  j["target"] = format_state(s, e.target);
  j["kind"] = to_string(e.kind);
  j["via"] = {raw(e.source_txn), raw(e.target_txn)};
  return j;
}

CommandResult analyze_command(const Scenario& s, std::size_t matrix_cap) {
  Json j = header("analyze");
  j["scenario"] = s.name;
  const auto& a = *s.analysis;
  const auto& tl = a.timeline();
  Json objects = Json::array();
  for (std::uint32_t x = 0; x < s.num_objects(); ++x) {
    const auto v = s.pattern.versions(object_id(x));
    objects.push_back({{"name", s.object_names[x]},
                       {"final_version", tl.final_version(object_id(x))},
                       {"checkpoints", std::vector<Version>(v.begin(), v.end())}});
  }
  j["objects"] = std::move(objects);
  Json order = Json::array();
  for (TxnId t : s.execution().execution().commit_order) order.push_back(raw(t));
  j["commit_order"] = std::move(order);
  Json ser = Json::array();
  for (const auto& [from, to] : a.graph().direct_edges()) ser.push_back({raw(from), raw(to)});
  j["serialization_edges"] = std::move(ser);

  std::size_t black = 0;
  for (const auto& e : a.edges()) black += e.kind == EdgeKind::kBlack;
  Json dep;
  dep["black"] = black;
  dep["dashed"] = a.edges().size() - black;
  Json per_txn = Json::array();
  const auto& exec = s.execution();
  for (std::size_t pos = 0; pos < exec.num_txns(); ++pos) {
    const auto& t = exec.at_position(pos);
    const auto n = std::count_if(a.edges().begin(), a.edges().end(), [&](const DependenceEdge& e) {
      return e.kind == EdgeKind::kBlack && e.source_txn == t.id;
    });
    per_txn.push_back({{"txn", raw(t.id)}, {"writes", t.write_set.size()}, {"black", n}});
  }
  dep["by_transaction"] = std::move(per_txn);
  if (a.edges().size() <= 256) {
    Json edges = Json::array();
    for (const auto& e : a.edges()) edges.push_back(edge_to_json(s, e));
    dep["edges"] = std::move(edges);
  }
  j["dependence_edges"] = std::move(dep);

  Json intervals = Json::array();
  for (const auto& iv : build_intervals(s.pattern, tl)) {
    intervals.push_back({{"object", s.object_name(iv.object)},
                         {"rank", iv.rank},
                         {"start", iv.start},
                         {"end", iv.end},
                         {"states", iv.size()}});
  }
  j["intervals"] = std::move(intervals);
  const PatternAnalysis pa = s.pattern_analysis();
  j["interval_dependence_edges"] = pa.paths().interval_dependence_edges().size();

  Json hb;
  hb["num_states"] = tl.num_states();
  if (tl.num_states() <= matrix_cap) {
    Json names = Json::array();
    Json rows = Json::array();
    for (std::size_t i = 0; i < tl.num_states(); ++i) {
      names.push_back(format_state(s, tl.state_at(i)));
      std::string row;
      for (std::size_t k = 0; k < tl.num_states(); ++k) {
        row.push_back(a.precedence().happened_before(tl.state_at(i), tl.state_at(k)) ? '1' : '0');
      }
      rows.push_back(std::move(row));
    }
    hb["states"] = std::move(names);
    hb["matrix"] = std::move(rows);
  } else {
    hb["omitted"] = true;
  }
  j["happened_before"] = std::move(hb);
  return finish(std::move(j), true, kExitOk);
}

CommandResult check_command(const Scenario& s, const CandidateSet& candidate, std::uint64_t bound) {
  Json j = header("check");
  j["scenario"] = s.name;
  j["candidate"] = candidate_json(s, candidate);
  j["states"] = candidate_states(s, candidate);
  const PatternAnalysis pa = s.pattern_analysis();
  const bool condition = theorem_condition(candidate, pa);
  j["theorem_condition"] = condition;
  if (!condition) {
    const auto ext = extend_to_global(candidate, pa);
    j["violation"] = violation_json(s, std::get<ConditionViolation>(ext));
  }
  bool agrees = true;
  Json oracle;
  try {
    const auto found = find_consistent_extension(candidate, pa, bound);
    agrees = found.has_value() == condition;
    oracle["checked"] = true;
    oracle["extendable"] = found.has_value();
    if (found) oracle["global"] = global_json(s, *found, nullptr);
  } catch (const OracleBoundExceeded& e) {
    oracle["checked"] = false;
    oracle["reason"] = e.what();
  }
  oracle["agrees"] = agrees;
  j["oracle"] = std::move(oracle);
  j["extendable"] = condition;
  return finish(std::move(j), agrees, condition && agrees ? kExitOk : kExitViolated);
}

CommandResult extend_command(const Scenario& s, const CandidateSet& candidate) {
  Json j = header("extend");
  j["scenario"] = s.name;
  j["candidate"] = candidate_json(s, candidate);
  const PatternAnalysis pa = s.pattern_analysis();
  const auto ext = extend_to_global(candidate, pa);
  if (const auto* v = std::get_if<ConditionViolation>(&ext)) {
    j["extendable"] = false;
    j["violation"] = violation_json(s, *v);
    return finish(std::move(j), true, kExitViolated);
  }
  const auto& e = std::get<Extension>(ext);
  j["extendable"] = true;
  j["global"] = global_json(s, e.global, &candidate);
  Json m = Json::array();
  for (const auto& mv : e.m_values) {
    m.push_back({{"object", s.object_name(mv.object)}, {"member", s.object_name(mv.member)}, {"value", mv.value}});
  }
  j["m_values"] = std::move(m);
  const bool consistent = is_consistent_global_state(e.global, pa);
  j["consistent"] = consistent;
  j["recovery_line_ok"] = recovery_line_check(e.global, pa);
  return finish(std::move(j), consistent, consistent ? kExitOk : kExitViolated);
}

CommandResult simulate_command(const WorkloadSpec& workload, const SimConfig& config, Trace* trace_out) {
  Json j = header("simulate");
  Trace trace = run_simulation(workload, config);
  j["workload"] = workload_to_json(workload);
  j["config"] = config_to_json(config);
  j["transactions"] = trace.execution.transactions.size();
  j["events"] = trace.events.size();
  j["checkpoint_log_size"] = trace.checkpoint_log.size();
  const auto counts = count_checkpoints(trace);
  std::vector<std::uint32_t> last_index(trace.execution.num_objects, 0);
  for (const auto& r : trace.checkpoint_log) last_index[raw(r.object)] = r.index;
  Json per = Json::array();
  for (std::uint32_t x = 0; x < trace.execution.num_objects; ++x) {
    per.push_back({{"object", x}, {"basic", counts.basic[x]}, {"forced", counts.forced[x]}, {"last_index", last_index[x]}});
  }
  j["checkpoints"] = {{"basic", counts.total_basic()}, {"forced", counts.total_forced()}, {"per_object", std::move(per)}};
  if (trace_out) *trace_out = std::move(trace);
  return finish(std::move(j), true, kExitOk);
}

CommandResult verify_trace_command(const Trace& trace, std::size_t spot_check_limit) {
  Json j = header("verify");
  j["mode"] = "trace";
  const auto validated = validate_execution(trace.execution);
  const auto report = verify_protocol_guarantees(validated, trace.checkpoint_log, trace.config.protocol, trace.config.z);
  j["protocol"] = to_string(report.protocol);
  j["z"] = report.z;
  j["records"] = report.num_records;
  j["dp_pairs_checked"] = report.dp_pairs_checked;
  j["indexed_sets_checked"] = report.indexed_sets_checked;
  j["gap_filled_sets_checked"] = report.gap_filled_sets_checked;
  Json vs = Json::array();
  for (const auto& v : report.violations) vs.push_back({{"kind", v.kind}, {"detail", v.detail}, {"records", v.records}});
  j["violations"] = std::move(vs);

  auto analysis = std::make_shared<const ExecutionAnalysis>(validated);
  std::vector<std::vector<Version>> versions(validated.num_objects());
  for (const auto& r : trace.checkpoint_log) versions[raw(r.object)].push_back(r.version);
  const PatternAnalysis pa(analysis, CheckpointPattern::make(std::move(versions), analysis->timeline(), true));
  const auto stats = check_theorem_agreement(pa, 2, spot_check_limit);
  j["theorem_spot_checks"] = {{"checked", stats.checked},
                              {"extendable", stats.extendable},
                              {"disagreements", stats.disagreements},
                              {"skipped", stats.skipped}};
  const bool ok = report.ok() && stats.disagreements == 0;
  return finish(std::move(j), ok, ok ? kExitOk : kExitViolated);
}

CommandResult verify_batch_command(const BatchSpec& spec) {
  Json j = header("verify");
  j["mode"] = "batch";
  bool ok = true;
  if (spec.theorem) {
    const auto r = run_theorem_batch(*spec.theorem);
    j["theorem"] = theorem_batch_to_json(*spec.theorem, r);
    ok &= r.ok();
  }
  if (spec.protocol) {
    const auto r = run_protocol_batch(*spec.protocol);
    j["protocol"] = protocol_batch_to_json(*spec.protocol, r);
    ok &= r.ok();
  }
  return finish(std::move(j), ok, ok ? kExitOk : kExitViolated);
}

CommandResult input_error_report(const std::string& command, const std::string& message) {
  Json j = header(command);
  j["error"] = message;
  return finish(std::move(j), false, kExitInputError);
}

}  // namespace datackpt
