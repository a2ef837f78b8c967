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

#include "datackpt/batch.hpp"

#include <algorithm>
#include <sstream>

#include "datackpt/rng.hpp"

namespace datackpt {

namespace {

std::uint32_t get_u32(const Json& j, const char* key, const std::string& path, std::uint32_t fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_unsigned() || it->get<std::uint64_t>() > 0xffffffffULL) {
    throw InputError(path + "." + key, "expected a non-negative integer");
  }
  return it->get<std::uint32_t>();
}

std::uint64_t get_u64(const Json& j, const char* key, const std::string& path, std::uint64_t fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_unsigned()) throw InputError(path + "." + key, "expected a non-negative integer");
  return it->get<std::uint64_t>();
}

void check_keys(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw InputError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError(path + "." + key, "unknown field");
    }
  }
}

std::string describe_set(const CandidateSet& s) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [x, r] : s.ranks) {
    os << (first ? "" : " ") << raw(x) << ':' << r;
    first = false;
  }
  return os.str();
}

void note(TheoremBatchResult& r, std::string msg) {
  if (r.failures.size() < 20) r.failures.push_back(std::move(msg));
}

}  // namespace

BatchSpec batch_from_json(const Json& doc) {
  check_keys(doc, "batch", {"theorem", "protocol"});
  BatchSpec spec;
  if (auto it = doc.find("theorem"); it != doc.end()) {
    const std::string p = "theorem";
    check_keys(*it, p, {"instances", "first_seed", "max_objects", "max_txns", "max_checkpoints", "max_set_size"});
    TheoremBatch t;
    t.instances = get_u32(*it, "instances", p, t.instances);
    t.first_seed = get_u64(*it, "first_seed", p, t.first_seed);
    t.max_objects = get_u32(*it, "max_objects", p, t.max_objects);
    t.max_txns = get_u32(*it, "max_txns", p, t.max_txns);
    t.max_checkpoints = get_u32(*it, "max_checkpoints", p, t.max_checkpoints);
    t.max_set_size = get_u32(*it, "max_set_size", p, t.max_set_size);
    if (t.max_objects < 1) throw InputError(p + ".max_objects", "must be >= 1");
    if (t.max_checkpoints < 1) throw InputError(p + ".max_checkpoints", "must be >= 1");
    spec.theorem = t;
  }
  if (auto it = doc.find("protocol"); it != doc.end()) {
    const std::string p = "protocol";
    check_keys(*it, p, {"runs", "first_seed", "max_objects", "max_txns", "protocol", "z_values", "commit_scope"});
    ProtocolBatch b;
    b.runs = get_u32(*it, "runs", p, b.runs);
    b.first_seed = get_u64(*it, "first_seed", p, b.first_seed);
    b.max_objects = get_u32(*it, "max_objects", p, b.max_objects);
    b.max_txns = get_u32(*it, "max_txns", p, b.max_txns);
    if (b.max_objects < 1) throw InputError(p + ".max_objects", "must be >= 1");
    if (auto jp = it->find("protocol"); jp != it->end()) {
      auto v = jp->is_string() ? parse_protocol(jp->get<std::string>()) : std::nullopt;
      if (!v) throw InputError(p + ".protocol", "expected \"A\" or \"B\"");
      b.protocol = *v;
    }
    if (auto jz = it->find("z_values"); jz != it->end()) {
      if (!jz->is_array() || jz->empty()) throw InputError(p + ".z_values", "expected a non-empty array");
      b.z_values.clear();
      for (const auto& v : *jz) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 1 || v.get<std::uint64_t>() > 0xffffffffULL) {
          throw InputError(p + ".z_values", "entries must be integers >= 1");
        }
        b.z_values.push_back(v.get<std::uint32_t>());
      }
    }
    if (auto js = it->find("commit_scope"); js != it->end()) {
      auto v = js->is_string() ? parse_commit_scope(js->get<std::string>()) : std::nullopt;
      if (!v) throw InputError(p + ".commit_scope", "expected \"write-set\" or \"access-set\"");
      b.commit_scope = *v;
    }
    spec.protocol = b;
  }
  return spec;
}

Json batch_to_json(const BatchSpec& spec) {
  Json j = Json::object();
  if (spec.theorem) {
    const auto& t = *spec.theorem;
    j["theorem"] = {{"instances", t.instances},         {"first_seed", t.first_seed},
                    {"max_objects", t.max_objects},     {"max_txns", t.max_txns},
                    {"max_checkpoints", t.max_checkpoints}, {"max_set_size", t.max_set_size}};
  }
  if (spec.protocol) {
    const auto& b = *spec.protocol;
    j["protocol"] = {{"runs", b.runs},
                     {"first_seed", b.first_seed},
                     {"max_objects", b.max_objects},
                     {"max_txns", b.max_txns},
                     {"protocol", to_string(b.protocol)},
                     {"z_values", b.z_values},
                     {"commit_scope", to_string(b.commit_scope)}};
  }
  return j;
}

WorkloadSpec theorem_instance_workload(const TheoremBatch& batch, std::uint64_t seed) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 7);
  WorkloadSpec w;
  w.num_objects = static_cast<std::uint32_t>(rng.uniform(1, batch.max_objects));
  w.num_txns = static_cast<std::uint32_t>(rng.uniform(0, batch.max_txns));
  w.ops_min = 1;
  w.ops_max = 3;
  w.write_permille = static_cast<std::uint32_t>(rng.uniform(300, 900));
  w.skew_permille = static_cast<std::uint32_t>(rng.uniform(0, 500));
  w.max_checkpoints = batch.max_checkpoints;
  w.seed = seed;
  return w;
}

TheoremBatchResult run_theorem_batch(const TheoremBatch& batch) {
  TheoremBatchResult r;
  for (std::uint32_t k = 0; k < batch.instances; ++k) {
    const std::uint64_t seed = batch.first_seed + k;
    const Scenario s = generate_random(theorem_instance_workload(batch, seed));
    const PatternAnalysis pa = s.pattern_analysis();
    const auto& exec = s.execution();
    ++r.instances;

    for (std::size_t pos = 0; pos < exec.num_txns(); ++pos) {
      const auto& t = exec.at_position(pos);
      const auto black = std::count_if(pa.execution().edges().begin(), pa.execution().edges().end(), [&](const auto& e) {
        return e.kind == EdgeKind::kBlack && e.source_txn == t.id && e.target_txn == t.id;
      });
      if (static_cast<std::size_t>(black) != t.write_set.size() * t.write_set.size()) {
        ++r.alpha_squared_failures;
        note(r, "seed " + std::to_string(seed) + ": T" + std::to_string(raw(t.id)) + " black edge count");
      }
    }

    const auto all = enumerate_consistent_globals(pa);
    const auto& hb = pa.execution().precedence();
    for (const auto& set : candidate_sets(pa.pattern(), batch.max_set_size)) {
      ++r.sets_checked;
      const bool oracle =
          std::any_of(all.begin(), all.end(), [&](const GlobalCheckpoint& g) { return g.contains(set); });
      const bool condition = theorem_condition(set, pa);
      if (oracle) ++r.extendable;
      if (oracle != condition) {
        ++r.disagreements;
        note(r, "seed " + std::to_string(seed) + ": theorem/oracle disagree on {" + describe_set(set) + "}");
      }
      if (!oracle) {
        bool causal = false;
        for (const auto& a : set.members()) {
          for (const auto& b : set.members()) causal |= hb.happened_before(pa.pattern().state(a), pa.pattern().state(b));
        }
        if (!causal) ++r.hidden_dependences;
      }
      if (condition) {
        ++r.constructions;
        const auto ext = extend_to_global(set, pa);
        const auto* e = std::get_if<Extension>(&ext);
        if (!e || !e->global.contains(set) || !is_consistent_global_state(e->global, pa)) {
          ++r.construction_failures;
          note(r, "seed " + std::to_string(seed) + ": construction failed for {" + describe_set(set) + "}");
        }
      }
    }

    // Every complete global checkpoint: crossing rules vs. the definition.
    const std::uint32_t m = pa.pattern().num_objects();
    GlobalCheckpoint g;
    g.ranks.assign(m, 0);
    for (bool more = m > 0; more;) {
      ++r.globals_checked;
      if (recovery_line_check(g, pa) != is_consistent_global_state(g, pa)) {
        ++r.line_mismatches;
        note(r, "seed " + std::to_string(seed) + ": recovery-line check disagrees");
      }
      more = false;
      for (std::uint32_t x = m; x-- > 0;) {
        if (++g.ranks[x] < pa.pattern().count(object_id(x))) {
          more = true;
          break;
        }
        g.ranks[x] = 0;
      }
    }
  }
  return r;
}

std::pair<WorkloadSpec, SimConfig> protocol_run_setup(const ProtocolBatch& batch, std::uint64_t seed) {
  Rng rng(seed * 0xbf58476d1ce4e5b9ULL + 3);
  WorkloadSpec w;
  w.num_objects = static_cast<std::uint32_t>(rng.uniform(1, batch.max_objects));
  w.num_txns = static_cast<std::uint32_t>(rng.uniform(std::min<std::uint32_t>(1, batch.max_txns), batch.max_txns));
  w.ops_min = 1;
  w.ops_max = static_cast<std::uint32_t>(rng.uniform(1, 4));
  w.write_permille = static_cast<std::uint32_t>(rng.uniform(200, 900));
  w.skew_permille = static_cast<std::uint32_t>(rng.uniform(0, 600));
  w.seed = seed;
  SimConfig c;
  c.seed = seed;
  c.num_sites = static_cast<std::uint32_t>(rng.uniform(1, 3));
  c.delay_min = rng.uniform(1, 3);
  c.delay_max = c.delay_min + rng.uniform(0, 8);
  c.timer_period = rng.uniform(2, 40);
  c.timer_jitter = rng.uniform(0, 10);
  c.arrival_gap_min = 0;
  c.arrival_gap_max = rng.uniform(0, 6);
  c.exec_min = 1;
  c.exec_max = rng.uniform(1, 4);
  c.protocol = batch.protocol;
  c.commit_scope = batch.commit_scope;
  return {w, c};
}

bool ProtocolBatchResult::forced_non_increasing() const {
  // Equal run counts per z make totals and means interchangeable; compare
  // means anyway in case a z was listed twice.
  std::optional<double> prev;
  for (const auto& [z, total] : forced_by_z) {
    const double mean = static_cast<double>(total) / std::max<std::uint32_t>(1, runs_by_z.at(z));
    if (prev && mean > *prev) return false;
    prev = mean;
  }
  return true;
}

ProtocolBatchResult run_protocol_batch(const ProtocolBatch& batch) {
  ProtocolBatchResult out;
  std::vector<std::uint32_t> zs = batch.protocol == Protocol::kA ? std::vector<std::uint32_t>{1} : batch.z_values;
  for (std::uint32_t k = 0; k < batch.runs; ++k) {
    const std::uint64_t seed = batch.first_seed + k;
    auto [workload, config] = protocol_run_setup(batch, seed);
    for (std::uint32_t z : zs) {
      config.z = z;
      const Trace trace = run_simulation(workload, config);
      ProtocolRun run;
      run.seed = seed;
      run.z = z;
      run.num_objects = workload.num_objects;
      run.num_txns = workload.num_txns;
      const auto counts = count_checkpoints(trace);
      run.basic = counts.total_basic();
      run.forced = counts.total_forced();
      run.report = verify_protocol_guarantees(trace);
      out.violations += run.report.violations.size();
      out.forced_by_z[z] += run.forced;
      out.runs_by_z[z] += 1;
      out.runs.push_back(std::move(run));
    }
  }
  return out;
}

Json theorem_batch_to_json(const TheoremBatch& batch, const TheoremBatchResult& r) {
  Json j;
  j["spec"] = batch_to_json(BatchSpec{batch, std::nullopt})["theorem"];
  j["instances"] = r.instances;
  j["candidate_sets"] = r.sets_checked;
  j["extendable"] = r.extendable;
  j["disagreements"] = r.disagreements;
  j["hidden_dependences"] = r.hidden_dependences;
  j["constructions"] = r.constructions;
  j["construction_failures"] = r.construction_failures;
  j["global_checkpoints_checked"] = r.globals_checked;
  j["recovery_line_mismatches"] = r.line_mismatches;
  j["alpha_squared_failures"] = r.alpha_squared_failures;
  j["failures"] = r.failures;
  j["ok"] = r.ok();
  return j;
}

Json protocol_batch_to_json(const ProtocolBatch& batch, const ProtocolBatchResult& r) {
  Json j;
  j["spec"] = batch_to_json(BatchSpec{std::nullopt, batch})["protocol"];
  Json by_z = Json::array();
  for (const auto& [z, total] : r.forced_by_z) {
    by_z.push_back({{"z", z}, {"runs", r.runs_by_z.at(z)}, {"forced_total", total}});
  }
  j["forced_by_z"] = std::move(by_z);
  j["forced_non_increasing"] = r.forced_non_increasing();
  j["violations"] = r.violations;
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    Json jr = {{"seed", run.seed},           {"z", run.z},         {"objects", run.num_objects},
               {"txns", run.num_txns},        {"basic", run.basic}, {"forced", run.forced},
               {"violations", run.report.violations.size()}};
    if (!run.report.ok()) {
      Json vs = Json::array();
      for (const auto& v : run.report.violations) vs.push_back({{"kind", v.kind}, {"detail", v.detail}});
      jr["details"] = std::move(vs);
    }
    runs.push_back(std::move(jr));
  }
  j["runs"] = std::move(runs);
  j["ok"] = r.ok();
  return j;
}

}  // namespace datackpt
