// Copyright 2026 The EPike Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "epike/epike.h"
#include "json.hpp"
#include "service.hpp"

using nlohmann::json;

namespace {

int report(epk_status st) {
  std::cerr << "error (" << epk_status_name(st) << "): " << epk_last_error() << "\n";
  return st == EPK_ERR_INTERNAL ? 3 : 2;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  epk_string_free(s);
  return out;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return static_cast<bool>(out);
}

struct Scoped {
  epk_scenario* sc = nullptr;
  ~Scoped() { epk_scenario_free(sc); }
};

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent plan execution with nested beliefs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(epk_version()));

  std::string scenario_path;

  auto* check = app.add_subcommand("check", "Validate a scenario and print its model report");
  check->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  std::string agents = "epike,epike";
  std::string trace_path;
  uint64_t seed = 1;
  double timeout_ms = 0;
  int iterations = 1000;
  int horizon = 3;
  int max_steps = 40;
  double wall_clock_ms = 0;
  bool hang_mitigation = false;
  bool deterministic = false;
  auto* run = app.add_subcommand("run", "Simulate the scenario's agents to a verdict");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--agents", agents, "Agent kinds in declaration order (epike|pike|script)");
  run->add_option("--seed", seed, "Search seed");
  run->add_option("--timeout-ms", timeout_ms, "Per-decision search budget in ms (0: none)");
  run->add_option("--iterations", iterations, "Per-decision MCTS iteration cap");
  run->add_option("--horizon", horizon, "Execution horizon of the search");
  run->add_option("--max-steps", max_steps, "Trace length cap");
  run->add_option("--wall-clock-ms", wall_clock_ms, "Run wall-clock cap in ms (0: none)");
  run->add_flag("--hang-mitigation", hang_mitigation, "Take the next best action at quiescence");
  run->add_flag("--deterministic", deterministic, "Zero elapsed times so traces compare bytewise");
  run->add_option("--trace", trace_path, "Write the JSONL trace here");

  auto* replay = app.add_subcommand("replay", "Check that a trace reproduces its state fingerprints");
  replay->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  replay->add_option("--trace", trace_path, "JSONL trace")->required();
  replay->add_option("--agents", agents, "Agent kinds used for the trace");

  std::string formula;
  std::string agent;
  auto* eval = app.add_subcommand("eval", "Evaluate a formula in an agent's view or the true world");
  eval->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  eval->add_option("formula", formula, "Formula text, e.g. 'B[R](in(drink=coffee))'")->required();
  eval->add_option("--agent", agent, "Agent whose view is used (default: true world)");

  json gen = json::object();
  int num_variables = 4, num_orders = 2, num_constraints = 3, diff = 1, domain_size = 2;
  std::string out_path;
  auto* generate = app.add_subcommand("generate", "Generate a random task scenario");
  generate->add_option("--num-variables", num_variables);
  generate->add_option("--num-orders", num_orders);
  generate->add_option("--num-constraints", num_constraints);
  generate->add_option("--diff", diff, "Constraints the agents disagree on (0..3)");
  generate->add_option("--domain-size", domain_size);
  generate->add_option("--seed", seed);
  generate->add_option("--out", out_path, "Write the scenario here instead of stdout");

  std::string grid_path;
  int reps = -1;
  int tasks = -1;
  auto* suite = app.add_subcommand("suite", "Run a parameter grid and emit a CSV table");
  suite->add_option("--grid", grid_path, "Grid JSON file")->required();
  suite->add_option("--reps", reps, "Repetitions per task (overrides the grid)");
  suite->add_option("--tasks", tasks, "Tasks per condition (overrides the grid)");
  suite->add_option("--out", out_path, "Write the CSV here instead of stdout");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::string scenario_dir;
  auto* serve = app.add_subcommand("serve", "Run the live session service");
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_option("--scenarios", scenario_dir, "Directory scenario_path requests resolve in");

  CLI11_PARSE(app, argc, argv);

  Scoped scoped;
  auto load = [&]() -> epk_status { return epk_scenario_load(scenario_path.c_str(), &scoped.sc); };
  json run_opts{{"agents", agents},           {"seed", seed},
                {"timeout_ms", timeout_ms},   {"iterations", iterations},
                {"horizon", horizon},         {"max_steps", max_steps},
                {"wall_clock_ms", wall_clock_ms}, {"hang_mitigation", hang_mitigation},
                {"deterministic", deterministic}};

  if (*check) {
    if (epk_status st = load()) return report(st);
    int valid = 0;
    char* text = nullptr;
    if (epk_status st = epk_scenario_check(scoped.sc, &valid, &text)) return report(st);
    std::cout << take(text);
    return valid ? 0 : 1;
  }
  if (*run) {
    if (epk_status st = load()) return report(st);
    char* result = nullptr;
    if (epk_status st = epk_run(scoped.sc, run_opts.dump().c_str(), &result)) return report(st);
    json r = json::parse(take(result));
    const std::string trace = r["trace"].get<std::string>();
    if (!trace_path.empty()) {
      if (!write_file(trace_path, trace)) {
        std::cerr << "error: cannot write " << trace_path << "\n";
        return 2;
      }
    } else {
      std::cout << trace;
    }
    r.erase("trace");
    std::cerr << r.dump() << "\n";
    return 0;
  }
  if (*replay) {
    if (epk_status st = load()) return report(st);
    std::string text;
    if (!read_file(trace_path, text)) {
      std::cerr << "error: cannot read " << trace_path << "\n";
      return 2;
    }
    int mismatches = 0;
    if (epk_status st = epk_replay(scoped.sc, run_opts.dump().c_str(), text.c_str(), &mismatches)) {
      return report(st);
    }
    std::cout << (mismatches == 0 ? "reproduced" : std::to_string(mismatches) + " mismatching steps")
              << "\n";
    return mismatches == 0 ? 0 : 1;
  }
  if (*eval) {
    if (epk_status st = load()) return report(st);
    int value = 0;
    if (epk_status st = epk_scenario_eval(scoped.sc, agent.empty() ? nullptr : agent.c_str(),
                                          formula.c_str(), &value)) {
      return report(st);
    }
    std::cout << (value ? "true" : "false") << "\n";
    return 0;
  }
  if (*generate) {
    gen = {{"num_variables", num_variables}, {"num_orders", num_orders},
           {"num_constraints", num_constraints}, {"diff", diff},
           {"domain_size", domain_size}, {"seed", seed}};
    if (epk_status st = epk_scenario_generate(gen.dump().c_str(), &scoped.sc)) return report(st);
    char* text = nullptr;
    if (epk_status st = epk_scenario_to_json(scoped.sc, &text)) return report(st);
    const std::string out = take(text) + "\n";
    if (out_path.empty()) {
      std::cout << out;
    } else if (!write_file(out_path, out)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    return 0;
  }
  if (*suite) {
    std::string text;
    if (!read_file(grid_path, text)) {
      std::cerr << "error: cannot read " << grid_path << "\n";
      return 2;
    }
    json grid;
    try {
      grid = json::parse(text);
    } catch (const json::exception& e) {
      std::cerr << "error (parse): " << e.what() << "\n";
      return 2;
    }
    if (reps >= 0) grid["reps"] = reps;
    if (tasks >= 0) grid["tasks"] = tasks;
    char* csv = nullptr;
    if (epk_status st = epk_suite(grid.dump().c_str(), &csv)) return report(st);
    const std::string out = take(csv);
    if (out_path.empty()) {
      std::cout << out;
    } else if (!write_file(out_path, out)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    return 0;
  }
  if (*serve) {
    httplib::Server server;
    epike_service::Service service(scenario_dir);
    service.install(server);
    g_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);
    std::cerr << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
      return 2;
    }
    return 0;
  }
  return 0;
}
