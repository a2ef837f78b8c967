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

#include "datackpt/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "datackpt/rng.hpp"

namespace datackpt {

namespace {

// -- field helpers ---------------------------------------------------------

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "expected an object");
}

void reject_unknown(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError(join(path, key), "unknown field");
    }
  }
}

std::uint64_t as_uint(const Json& v, const std::string& path, std::uint64_t max) {
  if (!v.is_number_integer()) throw InputError(path, "expected a non-negative integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > max) throw InputError(path, "value too large");
    return u;
  }
  const auto s = v.get<std::int64_t>();
  if (s < 0) throw InputError(path, "expected a non-negative integer");
  if (static_cast<std::uint64_t>(s) > max) throw InputError(path, "value too large");
  return static_cast<std::uint64_t>(s);
}

std::uint32_t as_u32(const Json& v, const std::string& path) {
  return static_cast<std::uint32_t>(as_uint(v, path, std::numeric_limits<std::uint32_t>::max()));
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(join(path, key), "missing field");
  return *it;
}

template <typename T, typename F>
void optional_field(const Json& j, const std::string& key, const std::string& path, T& out, F convert) {
  if (auto it = j.find(key); it != j.end()) out = convert(*it, join(path, key));
}

std::uint64_t u64_field(const Json& v, const std::string& path) {
  return as_uint(v, path, std::numeric_limits<std::uint64_t>::max());
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array");
  return j;
}

std::string default_name(std::uint32_t x) { return std::to_string(x); }

std::optional<std::uint32_t> parse_index(std::string_view s) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Object reference: integer index or name.
ObjectId resolve(const Json& v, const std::vector<std::string>& names, const std::string& path) {
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    for (std::uint32_t x = 0; x < names.size(); ++x) {
      if (names[x] == s) return object_id(x);
    }
    if (auto idx = parse_index(s); idx && *idx < names.size()) return object_id(*idx);
    throw InputError(path, "unknown object \"" + s + "\"");
  }
  const auto x = as_u32(v, path);
  if (x >= names.size()) throw InputError(path, "object index out of range");
  return object_id(x);
}

std::vector<ObjectId> object_list(const Json& v, const std::vector<std::string>& names, const std::string& path) {
  std::vector<ObjectId> out;
  require_array(v, path);
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(resolve(v[i], names, at(path, i)));
  return out;
}

Json object_refs(const std::vector<ObjectId>& xs) {
  Json a = Json::array();
  for (ObjectId x : xs) a.push_back(raw(x));
  return a;
}

const char* const kFig1a = R"({
  "name": "fig1a",
  "objects": 3,
  "object_names": ["x", "y", "z"],
  "transactions": [
    {"id": 1, "reads": ["x"], "writes": ["y", "z"]},
    {"id": 2, "reads": ["y"], "writes": ["x"]}
  ],
  "commit_order": [1, 2],
  "checkpoints": {"x": [0, 1], "y": [0, 1], "z": [0, 1]}
})";

const char* const kFig1b = R"({
  "name": "fig1b",
  "objects": 3,
  "object_names": ["x", "y", "z"],
  "transactions": [
    {"id": 1, "reads": ["x"], "writes": ["y", "z"]},
    {"id": 2, "reads": ["y"], "writes": ["x"]}
  ],
  "commit_order": [2, 1],
  "checkpoints": {"x": [0, 1], "y": [0, 1], "z": [0, 1]}
})";

// Commit order reconstructed so that T1 precedes T6 transitively, T1 and T7
// are unrelated, and z's first interval spans four states.
const char* const kFig3 = R"({
  "name": "fig3",
  "objects": 4,
  "object_names": ["u", "z", "y", "x"],
  "transactions": [
    {"id": 1, "reads": ["u"], "writes": ["u"]},
    {"id": 2, "reads": ["z"], "writes": ["z"]},
    {"id": 3, "reads": ["z"], "writes": ["z", "x"]},
    {"id": 4, "reads": ["z", "u"], "writes": ["z"]},
    {"id": 5, "reads": ["z"], "writes": ["y", "z"]},
    {"id": 6, "reads": ["y"], "writes": ["y"]},
    {"id": 7, "reads": ["x"], "writes": ["x"]}
  ],
  "commit_order": [1, 2, 3, 7, 4, 5, 6],
  "checkpoints": {"u": [0], "z": [0, 4], "y": [0, 2], "x": [0, 2]}
})";

}  // namespace

std::optional<ObjectId> Scenario::find_object(std::string_view token) const {
  for (std::uint32_t x = 0; x < object_names.size(); ++x) {
    if (object_names[x] == token) return object_id(x);
  }
  if (auto idx = parse_index(token); idx && *idx < object_names.size()) return object_id(*idx);
  return std::nullopt;
}

Execution execution_from_json(const Json& doc, const std::string& path) {
  require_object(doc, path);
  Execution e;
  e.num_objects = as_u32(require(doc, "objects", path), join(path, "objects"));
  std::vector<std::string> names;
  for (std::uint32_t x = 0; x < e.num_objects; ++x) names.push_back(default_name(x));
  if (auto it = doc.find("object_names"); it != doc.end()) {
    const auto p = join(path, "object_names");
    require_array(*it, p);
    if (it->size() != e.num_objects) throw InputError(p, "must name every object");
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) throw InputError(at(p, i), "expected a string");
      names[i] = (*it)[i].get<std::string>();
    }
  }
  const auto tp = join(path, "transactions");
  const auto& txns = require_array(require(doc, "transactions", path), tp);
  for (std::size_t i = 0; i < txns.size(); ++i) {
    const auto p = at(tp, i);
    require_object(txns[i], p);
    reject_unknown(txns[i], p, {"id", "reads", "writes"});
    Transaction t;
    t.id = txn_id(as_u32(require(txns[i], "id", p), join(p, "id")));
    if (auto it = txns[i].find("reads"); it != txns[i].end()) t.read_set = object_list(*it, names, join(p, "reads"));
    if (auto it = txns[i].find("writes"); it != txns[i].end()) t.write_set = object_list(*it, names, join(p, "writes"));
    e.transactions.push_back(std::move(t));
  }
  const auto op = join(path, "commit_order");
  const auto& order = require_array(require(doc, "commit_order", path), op);
  for (std::size_t i = 0; i < order.size(); ++i) e.commit_order.push_back(txn_id(as_u32(order[i], at(op, i))));
  return e;
}

Json execution_to_json(const Execution& e) {
  Json j;
  j["objects"] = e.num_objects;
  Json txns = Json::array();
  for (const auto& t : e.transactions) {
    Json jt;
    jt["id"] = raw(t.id);
    jt["reads"] = object_refs(t.read_set);
    jt["writes"] = object_refs(t.write_set);
    txns.push_back(std::move(jt));
  }
  j["transactions"] = std::move(txns);
  Json order = Json::array();
  for (TxnId t : e.commit_order) order.push_back(raw(t));
  j["commit_order"] = std::move(order);
  return j;
}

Scenario parse_scenario(const Json& doc, std::string name) {
  require_object(doc, "");
  reject_unknown(doc, "", {"name", "objects", "object_names", "transactions", "commit_order", "checkpoints",
                           "close_final"});
  Scenario s;
  s.name = std::move(name);
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw InputError("name", "expected a string");
    if (s.name.empty()) s.name = it->get<std::string>();
  }
  Execution e = execution_from_json(doc, "");
  for (std::uint32_t x = 0; x < e.num_objects; ++x) s.object_names.push_back(default_name(x));
  if (auto it = doc.find("object_names"); it != doc.end()) {
    for (std::size_t i = 0; i < it->size(); ++i) s.object_names[i] = (*it)[i].get<std::string>();
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.object_names.size(); ++i) {
      const auto& n = s.object_names[i];
      if (n.empty()) throw InputError(at("object_names", i), "empty name");
      if (n.find(':') != std::string::npos || n.find(',') != std::string::npos) {
        throw InputError(at("object_names", i), "names may not contain ':' or ','");
      }
      if (!seen.insert(n).second) throw InputError(at("object_names", i), "duplicate name \"" + n + "\"");
      if (auto idx = parse_index(n); idx && *idx != i) {
        throw InputError(at("object_names", i), "a numeric name must equal its own index");
      }
    }
  }
  if (auto it = doc.find("close_final"); it != doc.end()) {
    if (!it->is_boolean()) throw InputError("close_final", "expected a boolean");
    s.close_final = it->get<bool>();
  }
  s.analysis = std::make_shared<const ExecutionAnalysis>(validate_execution(std::move(e)));

  std::vector<std::vector<Version>> versions(s.num_objects());
  if (auto it = doc.find("checkpoints"); it != doc.end()) {
    require_object(*it, "checkpoints");
    for (const auto& [key, list] : it->items()) {
      const auto p = join("checkpoints", key);
      auto x = s.find_object(key);
      if (!x) throw InputError(p, "unknown object \"" + key + "\"");
      require_array(list, p);
      for (std::size_t i = 0; i < list.size(); ++i) {
        const Version v = as_u32(list[i], at(p, i));
        if (v > s.analysis->timeline().final_version(*x)) {
          throw InputError(at(p, i), "version " + std::to_string(v) + " exceeds the final version " +
                                         std::to_string(s.analysis->timeline().final_version(*x)));
        }
        versions[raw(*x)].push_back(v);
      }
    }
  }
  s.pattern = CheckpointPattern::make(std::move(versions), s.analysis->timeline(), s.close_final);
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw InputError(path, std::string("parse error: ") + e.what());
  }
}

Scenario parse_scenario_text(std::string_view text, std::string name) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("", std::string("parse error: ") + e.what());
  }
  return parse_scenario(doc, std::move(name));
}

Scenario load_scenario(const std::string& spec) {
  constexpr std::string_view kPrefix = "builtin:";
  if (spec.starts_with(kPrefix)) return builtin_scenario(std::string_view(spec).substr(kPrefix.size()));
  return parse_scenario(read_json_file(spec), spec);
}

std::vector<std::string> builtin_names() { return {"fig1a", "fig1b", "fig3"}; }

Scenario builtin_scenario(std::string_view name) {
  if (name == "fig1a") return parse_scenario_text(kFig1a, "builtin:fig1a");
  if (name == "fig1b") return parse_scenario_text(kFig1b, "builtin:fig1b");
  if (name == "fig3") return parse_scenario_text(kFig3, "builtin:fig3");
  throw InputError("scenario", "unknown builtin \"" + std::string(name) + "\"");
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  if (!s.name.empty()) j["name"] = s.name;
  const Execution& e = s.execution().execution();
  j["objects"] = e.num_objects;
  bool named = false;
  for (std::uint32_t x = 0; x < s.object_names.size(); ++x) named |= s.object_names[x] != default_name(x);
  if (named) j["object_names"] = s.object_names;
  Json ex = execution_to_json(e);
  j["transactions"] = std::move(ex["transactions"]);
  j["commit_order"] = std::move(ex["commit_order"]);
  Json ck = Json::object();
  for (std::uint32_t x = 0; x < s.num_objects(); ++x) {
    const auto v = s.pattern.versions(object_id(x));
    ck[s.object_names[x]] = std::vector<Version>(v.begin(), v.end());
  }
  j["checkpoints"] = std::move(ck);
  j["close_final"] = s.close_final;
  return j;
}

Scenario generate_random(const WorkloadSpec& spec) {
  auto txns = generate_transactions(spec);
  Rng rng(spec.seed ^ 0x5deece66dULL);
  Execution e;
  e.num_objects = spec.num_objects;
  for (const auto& t : txns) e.commit_order.push_back(t.id);
  rng.shuffle(e.commit_order);
  e.transactions = std::move(txns);

  Scenario s;
  s.name = "random:" + std::to_string(spec.seed);
  for (std::uint32_t x = 0; x < spec.num_objects; ++x) s.object_names.push_back(default_name(x));
  s.analysis = std::make_shared<const ExecutionAnalysis>(validate_execution(std::move(e)));
  const auto& timeline = s.analysis->timeline();
  std::vector<std::vector<Version>> versions(spec.num_objects);
  const std::uint32_t middle_cap = spec.max_checkpoints > 2 ? spec.max_checkpoints - 2 : 0;
  for (std::uint32_t x = 0; x < spec.num_objects; ++x) {
    const Version last = timeline.final_version(object_id(x));
    if (last < 2) continue;
    std::vector<Version> middle;
    for (Version v = 1; v < last; ++v) middle.push_back(v);
    rng.shuffle(middle);
    const auto k = rng.uniform(0, std::min<std::uint64_t>(middle_cap, middle.size()));
    versions[x].assign(middle.begin(), middle.begin() + static_cast<std::ptrdiff_t>(k));
  }
  s.pattern = CheckpointPattern::make(std::move(versions), timeline, true);
  return s;
}

CandidateSet parse_candidate(const Scenario& s, const std::vector<std::string>& tokens) {
  CandidateSet c;
  std::vector<std::string> parts;
  for (const auto& token : tokens) {
    std::stringstream ss(token);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) parts.push_back(part);
    }
  }
  for (const auto& part : parts) {
    const auto colon = part.rfind(':');
    if (colon == std::string::npos) throw InputError("candidate", "expected object:rank, got \"" + part + "\"");
    const auto x = s.find_object(std::string_view(part).substr(0, colon));
    if (!x) throw InputError("candidate", "unknown object in \"" + part + "\"");
    const auto rank = parse_index(std::string_view(part).substr(colon + 1));
    if (!rank) throw InputError("candidate", "bad rank in \"" + part + "\"");
    if (!c.ranks.emplace(*x, *rank).second) {
      throw InputError("candidate", "object " + s.object_name(*x) + " listed twice");
    }
  }
  validate_candidate(c, s.pattern);
  return c;
}

std::string format_checkpoint(const Scenario& s, CheckpointId c) {
  return s.object_name(c.object) + ":" + std::to_string(c.rank);
}

std::string format_state(const Scenario& s, LocalStateId st) {
  return s.object_name(st.object) + std::to_string(st.version);
}

// -- workloads, configs, traces ----------------------------------------------

Json workload_to_json(const WorkloadSpec& w) {
  Json j;
  j["num_objects"] = w.num_objects;
  j["num_txns"] = w.num_txns;
  j["ops_min"] = w.ops_min;
  j["ops_max"] = w.ops_max;
  j["write_permille"] = w.write_permille;
  j["skew_permille"] = w.skew_permille;
  j["max_checkpoints"] = w.max_checkpoints;
  j["seed"] = w.seed;
  return j;
}

WorkloadSpec workload_from_json(const Json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"num_objects", "num_txns", "ops_min", "ops_max", "write_permille", "skew_permille",
                           "max_checkpoints", "seed"});
  WorkloadSpec w;
  optional_field(doc, "num_objects", "", w.num_objects, as_u32);
  optional_field(doc, "num_txns", "", w.num_txns, as_u32);
  optional_field(doc, "ops_min", "", w.ops_min, as_u32);
  optional_field(doc, "ops_max", "", w.ops_max, as_u32);
  optional_field(doc, "write_permille", "", w.write_permille, as_u32);
  optional_field(doc, "skew_permille", "", w.skew_permille, as_u32);
  optional_field(doc, "max_checkpoints", "", w.max_checkpoints, as_u32);
  optional_field(doc, "seed", "", w.seed, u64_field);
  validate_workload(w);
  return w;
}

Json config_to_json(const SimConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["num_sites"] = c.num_sites;
  j["object_placement"] = c.object_placement;
  j["delay_min"] = c.delay_min;
  j["delay_max"] = c.delay_max;
  j["timer_period"] = c.timer_period;
  j["timer_jitter"] = c.timer_jitter;
  j["arrival_gap_min"] = c.arrival_gap_min;
  j["arrival_gap_max"] = c.arrival_gap_max;
  j["exec_min"] = c.exec_min;
  j["exec_max"] = c.exec_max;
  j["protocol"] = to_string(c.protocol);
  j["z"] = c.z;
  j["commit_scope"] = to_string(c.commit_scope);
  return j;
}

SimConfig config_from_json(const Json& doc) {
  const std::string path = "config";
  require_object(doc, path);
  reject_unknown(doc, path, {"seed", "num_sites", "object_placement", "delay_min", "delay_max", "timer_period",
                             "timer_jitter", "arrival_gap_min", "arrival_gap_max", "exec_min", "exec_max",
                             "protocol", "z", "commit_scope"});
  SimConfig c;
  optional_field(doc, "seed", path, c.seed, u64_field);
  optional_field(doc, "num_sites", path, c.num_sites, as_u32);
  if (auto it = doc.find("object_placement"); it != doc.end()) {
    const auto p = join(path, "object_placement");
    require_array(*it, p);
    for (std::size_t i = 0; i < it->size(); ++i) c.object_placement.push_back(as_u32((*it)[i], at(p, i)));
  }
  optional_field(doc, "delay_min", path, c.delay_min, u64_field);
  optional_field(doc, "delay_max", path, c.delay_max, u64_field);
  optional_field(doc, "timer_period", path, c.timer_period, u64_field);
  optional_field(doc, "timer_jitter", path, c.timer_jitter, u64_field);
  optional_field(doc, "arrival_gap_min", path, c.arrival_gap_min, u64_field);
  optional_field(doc, "arrival_gap_max", path, c.arrival_gap_max, u64_field);
  optional_field(doc, "exec_min", path, c.exec_min, u64_field);
  optional_field(doc, "exec_max", path, c.exec_max, u64_field);
  if (auto it = doc.find("protocol"); it != doc.end()) {
    auto p = it->is_string() ? parse_protocol(it->get<std::string>()) : std::nullopt;
    if (!p) throw InputError(join(path, "protocol"), "expected \"A\" or \"B\"");
    c.protocol = *p;
  }
  optional_field(doc, "z", path, c.z, as_u32);
  if (auto it = doc.find("commit_scope"); it != doc.end()) {
    auto s = it->is_string() ? parse_commit_scope(it->get<std::string>()) : std::nullopt;
    if (!s) throw InputError(join(path, "commit_scope"), "expected \"write-set\" or \"access-set\"");
    c.commit_scope = *s;
  }
  return c;
}

Json trace_to_json(const Trace& t) {
  Json j;
  j["schema"] = "datackpt.trace/1";
  j["config"] = config_to_json(t.config);
  j["execution"] = execution_to_json(t.execution);
  Json events = Json::array();
  for (const auto& e : t.events) {
    Json je;
    je["time"] = e.time;
    je["kind"] = to_string(e.kind);
    if (e.txn) je["txn"] = raw(*e.txn);
    if (e.object) je["object"] = raw(*e.object);
    je["value"] = e.value;
    events.push_back(std::move(je));
  }
  j["events"] = std::move(events);
  Json log = Json::array();
  for (const auto& r : t.checkpoint_log) {
    Json jr;
    jr["object"] = raw(r.object);
    jr["index"] = r.index;
    jr["kind"] = to_string(r.kind);
    jr["version"] = r.version;
    log.push_back(std::move(jr));
  }
  j["checkpoint_log"] = std::move(log);
  return j;
}

Trace trace_from_json(const Json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"schema", "config", "execution", "events", "checkpoint_log"});
  if (auto it = doc.find("schema"); it != doc.end() && *it != "datackpt.trace/1") {
    throw InputError("schema", "unsupported trace schema");
  }
  Trace t;
  if (auto it = doc.find("config"); it != doc.end()) t.config = config_from_json(*it);
  const auto& ex = require(doc, "execution", "");
  require_object(ex, "execution");
  reject_unknown(ex, "execution", {"objects", "object_names", "transactions", "commit_order"});
  t.execution = execution_from_json(ex, "execution");
  if (auto it = doc.find("events"); it != doc.end()) {
    require_array(*it, "events");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto p = at("events", i);
      const auto& je = (*it)[i];
      require_object(je, p);
      reject_unknown(je, p, {"time", "kind", "txn", "object", "value"});
      SimEvent e;
      e.seq = i;
      e.time = u64_field(require(je, "time", p), join(p, "time"));
      const auto& kind = require(je, "kind", p);
      auto k = kind.is_string() ? parse_sim_event_kind(kind.get<std::string>()) : std::nullopt;
      if (!k) throw InputError(join(p, "kind"), "unknown event kind");
      e.kind = *k;
      if (auto jt = je.find("txn"); jt != je.end()) e.txn = txn_id(as_u32(*jt, join(p, "txn")));
      if (auto jo = je.find("object"); jo != je.end()) e.object = object_id(as_u32(*jo, join(p, "object")));
      optional_field(je, "value", p, e.value, as_u32);
      t.events.push_back(e);
    }
  }
  const auto& log = require_array(require(doc, "checkpoint_log", ""), "checkpoint_log");
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto p = at("checkpoint_log", i);
    require_object(log[i], p);
    reject_unknown(log[i], p, {"object", "index", "kind", "version"});
    CheckpointRecord r;
    r.object = object_id(as_u32(require(log[i], "object", p), join(p, "object")));
    if (raw(r.object) >= t.execution.num_objects) throw InputError(join(p, "object"), "object index out of range");
    r.index = as_u32(require(log[i], "index", p), join(p, "index"));
    r.version = as_u32(require(log[i], "version", p), join(p, "version"));
    if (auto jk = log[i].find("kind"); jk != log[i].end()) {
      auto k = jk->is_string() ? parse_checkpoint_kind(jk->get<std::string>()) : std::nullopt;
      if (!k) throw InputError(join(p, "kind"), "expected initial, basic or forced");
      r.kind = *k;
    } else {
      r.kind = r.index == 0 ? CheckpointKind::kInitial : CheckpointKind::kBasic;
    }
    t.checkpoint_log.push_back(r);
  }
  validate_config(t.config, t.execution.num_objects);
  return t;
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace datackpt
