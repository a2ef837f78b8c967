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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "datackpt/report.hpp"

namespace py = pybind11;
using namespace datackpt;

namespace {

CheckpointId one_checkpoint(const Scenario& s, const std::string& token) {
  const auto c = parse_candidate(s, {token});
  if (c.ranks.size() != 1) throw InputError("checkpoint", "expected exactly one object:rank");
  return {c.ranks.begin()->first, c.ranks.begin()->second};
}

LocalStateId state(const Scenario& s, const std::string& object, Version version) {
  const auto x = s.find_object(object);
  if (!x) throw InputError("object", "unknown object \"" + object + "\"");
  return {*x, version};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("", std::string("parse error: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Data checkpoint analysis and protocol simulation";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("object_names", &Scenario::object_names)
      .def_property_readonly("num_objects", &Scenario::num_objects)
      .def_property_readonly("num_transactions", [](const Scenario& s) { return s.execution().num_txns(); })
      .def("checkpoint_versions",
           [](const Scenario& s, const std::string& object) {
             const auto x = s.find_object(object);
             if (!x) throw InputError("object", "unknown object \"" + object + "\"");
             const auto v = s.pattern.versions(*x);
             return std::vector<Version>(v.begin(), v.end());
           })
      .def("to_json", [](const Scenario& s) { return dump_json(scenario_to_json(s)); });

  m.def("builtin_names", &builtin_names);
  m.def("load_scenario", &load_scenario, py::arg("spec"), "Scenario file path or builtin:NAME");
  m.def("parse_scenario", [](const std::string& text) { return parse_scenario_text(text); }, py::arg("text"));
  m.def(
      "generate_random",
      [](const std::string& workload_json) { return generate_random(workload_from_json(parse_json(workload_json))); },
      py::arg("workload_json"));

  m.def(
      "happened_before",
      [](const Scenario& s, const std::string& a_obj, Version a_ver, const std::string& b_obj, Version b_ver) {
        return s.analysis->precedence().happened_before(state(s, a_obj, a_ver), state(s, b_obj, b_ver));
      },
      py::arg("scenario"), py::arg("a_object"), py::arg("a_version"), py::arg("b_object"), py::arg("b_version"));
  m.def(
      "dp_reachable",
      [](const Scenario& s, const std::string& from, const std::string& to) {
        const PatternAnalysis pa = s.pattern_analysis();
        return pa.paths().reachable(one_checkpoint(s, from), one_checkpoint(s, to));
      },
      py::arg("scenario"), py::arg("from_checkpoint"), py::arg("to_checkpoint"));
  m.def(
      "theorem_condition",
      [](const Scenario& s, const std::vector<std::string>& members) {
        return theorem_condition(parse_candidate(s, members), s.pattern_analysis());
      },
      py::arg("scenario"), py::arg("members"));
  m.def(
      "consistent_globals",
      [](const Scenario& s, std::uint64_t bound) {
        std::vector<std::vector<std::uint32_t>> out;
        for (const auto& g : enumerate_consistent_globals(s.pattern_analysis(), bound)) out.push_back(g.ranks);
        return out;
      },
      py::arg("scenario"), py::arg("bound") = kDefaultOracleBound);

  // Report builders return (report JSON text, exit code).
  auto result = [](const CommandResult& r) { return py::make_tuple(dump_json(r.report), r.exit_code); };
  m.def(
      "analyze", [result](const Scenario& s, std::size_t cap) { return result(analyze_command(s, cap)); },
      py::arg("scenario"), py::arg("matrix_cap") = 64);
  m.def(
      "check",
      [result](const Scenario& s, const std::vector<std::string>& members, std::uint64_t bound) {
        return result(check_command(s, parse_candidate(s, members), bound));
      },
      py::arg("scenario"), py::arg("members"), py::arg("bound") = kDefaultOracleBound);
  m.def(
      "extend",
      [result](const Scenario& s, const std::vector<std::string>& members) {
        return result(extend_command(s, parse_candidate(s, members)));
      },
      py::arg("scenario"), py::arg("members"));
  m.def(
      "simulate",
      [](const std::string& workload_json, const std::string& config_json) {
        const auto w = workload_from_json(parse_json(workload_json));
        const auto c = config_json.empty() ? SimConfig{} : config_from_json(parse_json(config_json));
        Trace trace;
        const auto r = simulate_command(w, c, &trace);
        return py::make_tuple(dump_json(r.report), dump_json(trace_to_json(trace)));
      },
      py::arg("workload_json"), py::arg("config_json") = "");
  m.def(
      "verify_trace",
      [result](const std::string& trace_json) {
        return result(verify_trace_command(trace_from_json(parse_json(trace_json))));
      },
      py::arg("trace_json"));
  m.def(
      "verify_batch",
      [result](const std::string& batch_json) {
        return result(verify_batch_command(batch_from_json(parse_json(batch_json))));
      },
      py::arg("batch_json"));
}
