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

// datackpt: analyze scenarios, check and extend candidate checkpoint sets,
// run protocol simulations and verify their guarantees.
//
// Exit codes: 0 ok / holds, 1 violated / not extendable, 2 input error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "datackpt/report.hpp"

namespace {

using namespace datackpt;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path, "cannot write file");
  out << text;
}

int emit(const CommandResult& r, const std::string& out_path) {
  const std::string text = dump_json(r.report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data checkpoint analysis and protocol simulation"};
  app.require_subcommand(1);
  std::string report_path;
  app.add_option("--report", report_path, "Write the JSON report here instead of stdout");

  std::string scenario;
  std::size_t matrix_cap = 64;
  auto* analyze = app.add_subcommand("analyze", "Edges, intervals and happened-before of a scenario");
  analyze->add_option("scenario", scenario, "Scenario file or builtin:NAME")->required();
  analyze->add_option("--matrix-cap", matrix_cap, "Largest state count for the full happened-before matrix");

  std::vector<std::string> members;
  std::uint64_t bound = kDefaultOracleBound;
  auto* check = app.add_subcommand("check", "Can a set of checkpoints belong to a consistent global checkpoint?");
  check->add_option("scenario", scenario, "Scenario file or builtin:NAME")->required();
  check->add_option("members", members, "Checkpoints as object:rank")->required();
  check->add_option("--bound", bound, "Oracle bound");

  auto* extend = app.add_subcommand("extend", "Extend a set of checkpoints to a consistent global checkpoint");
  extend->add_option("scenario", scenario, "Scenario file or builtin:NAME")->required();
  extend->add_option("members", members, "Checkpoints as object:rank")->required();

  std::string workload_path, config_path, protocol = "A", scope, trace_path;
  std::uint32_t z = 1;
  std::uint64_t seed = 1;
  std::uint64_t timer = 0;
  auto* simulate = app.add_subcommand("simulate", "Run a seeded protocol simulation");
  simulate->add_option("workload", workload_path, "Workload file")->required();
  simulate->add_option("--config", config_path, "Simulation config file; flags override it");
  auto* protocol_opt = simulate->add_option("--protocol", protocol, "A or B");
  auto* z_opt = simulate->add_option("--z", z, "Protocol B parameter Z >= 1");
  auto* seed_opt = simulate->add_option("--seed", seed, "Simulation seed");
  auto* timer_opt = simulate->add_option("--timer", timer, "Timer period in ticks");
  auto* scope_opt = simulate->add_option("--commit-scope", scope, "access-set or write-set");
  simulate->add_option("--out", trace_path, "Write the trace here");

  std::string batch_path;
  auto* verify = app.add_subcommand("verify", "Verify protocol guarantees of a trace, or run a batch");
  auto* trace_opt = verify->add_option("--trace", trace_path, "Trace file");
  auto* batch_opt = verify->add_option("--batch", batch_path, "Batch file");
  trace_opt->excludes(batch_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (analyze->parsed()) return emit(analyze_command(load_scenario(scenario), matrix_cap), report_path);
    if (check->parsed()) {
      const Scenario s = load_scenario(scenario);
      return emit(check_command(s, parse_candidate(s, members), bound), report_path);
    }
    if (extend->parsed()) {
      const Scenario s = load_scenario(scenario);
      return emit(extend_command(s, parse_candidate(s, members)), report_path);
    }
    if (simulate->parsed()) {
      const WorkloadSpec workload = workload_from_json(read_json_file(workload_path));
      SimConfig config = config_path.empty() ? SimConfig{} : config_from_json(read_json_file(config_path));
      if (protocol_opt->count()) {
        auto p = parse_protocol(protocol);
        if (!p) throw InputError("--protocol", "expected A or B");
        config.protocol = *p;
      }
      if (z_opt->count()) config.z = z;
      if (seed_opt->count()) config.seed = seed;
      if (timer_opt->count()) config.timer_period = timer;
      if (scope_opt->count()) {
        auto sc = parse_commit_scope(scope);
        if (!sc) throw InputError("--commit-scope", "expected access-set or write-set");
        config.commit_scope = *sc;
      }
      Trace trace;
      const auto result = simulate_command(workload, config, &trace);
      if (!trace_path.empty()) write_file(trace_path, dump_json(trace_to_json(trace)));
      return emit(result, report_path);
    }
    if (verify->parsed()) {
      if (!trace_path.empty()) {
        return emit(verify_trace_command(trace_from_json(read_json_file(trace_path))), report_path);
      }
      if (!batch_path.empty()) return emit(verify_batch_command(batch_from_json(read_json_file(batch_path))), report_path);
      throw InputError("verify", "one of --trace or --batch is required");
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return emit(input_error_report(command, e.what()), report_path);
  }
  return kExitInputError;
}
