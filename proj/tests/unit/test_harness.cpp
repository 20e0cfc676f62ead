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


#include <sstream>

#include "doctest.h"
#include "epike/actions.hpp"
#include "epike/errors.hpp"
#include "epike/harness.hpp"
#include "epike/planlib.hpp"
#include "fixtures.hpp"

using namespace epike;

namespace {

RunOptions quick(uint64_t seed = 1) {
  RunOptions o;
  o.agent.iteration_cap = 150;
  o.agent.seed = seed;
  o.max_steps = 20;
  return o;
}

// Ground knowledge base rebuilt from the trace alone.
KnowledgeBase replay_ground(const Scenario& sc, const RunOutcome& out) {
  KnowledgeBase kb = sc.ground_kb();
  std::set<std::string> executed;
  for (const auto& step : out.steps) {
    const PointedAction act = from_record(step.action, *sc.lib);
    if (act.meta.kind == ActionKind::Execute && !executed.count(act.meta.timepoint)) {
      kb = record_execution(kb, *sc.lib, act.meta.timepoint, executed);
      executed.insert(act.meta.timepoint);
    } else if (act.meta.kind == ActionKind::Intent) {
      kb = kb.add(*act.meta.constraint);
    }
  }
  return kb;
}

Scenario scripted_case1() {
  Scenario sc = fixture::breakfast("case1");
  sc.prelude.clear();
  sc.scripts["R"] = {{"execute", "R", "e_glass", "", ""}};
  sc.scripts["H"] = {{"execute", "H", "e_juice", "", ""}};
  return sc;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("harness property: verdicts agree with the ground truth") {
  std::vector<Scenario> all{fixture::breakfast("case1"), fixture::breakfast("case2"),
                            fixture::breakfast("case3"), fixture::breakfast("ordering")};
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    RandomTaskParams p;
    p.num_variables = 3;
    p.diff = static_cast<int>(seed % 3);
    p.seed = 200 + seed;
    all.push_back(generate_random_task(p));
  }
  std::set<std::string> seen;
  for (const auto& sc : all) {
    for (const char* pairing : {"epike", "pike"}) {
      RunOptions o = quick();
      for (const auto& a : sc.lib->agents()) o.kinds[a] = parse_agent_kind(pairing);
      const RunOutcome out = run_pair(sc, o);
      CAPTURE(sc.name);
      const KnowledgeBase ground = replay_ground(sc, out);
      seen.insert(out.verdict);
      if (out.verdict == "failure") {
        CHECK_FALSE(ground.consistent());
      } else if (out.verdict == "success") {
        CHECK(ground.consistent());
        CHECK(out.stop_reason == "quiescent");
        CHECK(success_holds(ground, *sc.lib));
      } else {
        CHECK(out.verdict == "hang");
        CHECK(ground.consistent());
        CHECK((out.stop_reason != "quiescent" || !success_holds(ground, *sc.lib)));
      }
    }
  }
  CHECK(seen.count("success") == 1);
  CHECK(seen.count("failure") == 1);
}

TEST_CASE("harness: prelude steps are labelled and the robot answers the first case") {
  const Scenario sc = fixture::breakfast("case1");
  const RunOutcome out = run_pair(sc, quick());
  REQUIRE(out.steps.size() >= 2);
  CHECK(out.steps[0].branch == "prelude");
  CHECK(out.steps[1].action == ActionRecord{"execute", "R", "e_glass", "", ""});
  CHECK(out.verdict == "success");
}

TEST_CASE("harness: traces replay and detect tampering") {
  const Scenario sc = fixture::breakfast("case2");
  RunOptions o = quick(5);
  o.deterministic_trace = true;
  const RunOutcome out = run_pair(sc, o);
  const std::string text = trace_jsonl(out);
  const auto steps = parse_trace_jsonl(text);
  REQUIRE(steps.size() == out.steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) CHECK(steps[i].action == out.steps[i].action);
  CHECK(replay_trace(sc, o, steps).empty());
  CHECK(trace_jsonl(run_pair(sc, o)) == text);
  auto tampered = steps;
  REQUIRE_FALSE(tampered.empty());
  tampered.back().fingerprints["R"] ^= 1;
  CHECK(replay_trace(sc, o, tampered) == std::vector<int>{tampered.back().seq});
}

TEST_CASE("harness: the ego is polled first unless latency mode is on") {
  const Scenario sc = scripted_case1();
  RunOptions o = quick();
  o.kinds = {{"R", AgentKind::Script}, {"H", AgentKind::Script}};
  const RunOutcome out = run_pair(sc, o);
  REQUIRE(out.first_actor.size() == 2);
  CHECK(out.first_actor[0] == "R");
  CHECK(out.verdict == "success");
  int human_first = 0;
  for (uint64_t seed = 0; seed < 16; ++seed) {
    o.latency_seed = seed;
    const RunOutcome lat = run_pair(sc, o);
    CHECK(lat.verdict == "success");
    human_first += lat.first_actor.at(0) == "H";
  }
  CHECK(human_first > 0);
  CHECK(human_first < 16);
}

TEST_CASE("harness: step and wall-clock caps stop the run") {
  const Scenario sc = scripted_case1();
  RunOptions o = quick();
  o.kinds = {{"R", AgentKind::Script}, {"H", AgentKind::Script}};
  o.max_steps = 1;
  const RunOutcome out = run_pair(sc, o);
  CHECK(out.stop_reason == "step-cap");
  CHECK(out.verdict == "hang");
}

TEST_CASE("harness: random tasks are reproducible and feasible") {
  RandomTaskParams p;
  p.seed = 77;
  const Scenario a = generate_random_task(p);
  const Scenario b = generate_random_task(p);
  CHECK(scenario_to_json(a) == scenario_to_json(b));
  p.seed = 78;
  CHECK(scenario_to_json(generate_random_task(p)) != scenario_to_json(a));
  for (int diff = 0; diff <= 3; ++diff) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      p.diff = diff;
      p.seed = seed;
      const Scenario sc = generate_random_task(p);
      CHECK_FALSE(feasible_subplans(sc.ground_kb(), *sc.lib).empty());
      CHECK(check_scenario(sc).problems.empty());
      CHECK(sc.initial.model->size() == (1 << diff));
    }
  }
  p.diff = p.num_constraints + 1;
  CHECK_THROWS_AS(generate_random_task(p), GenerationError);
}

TEST_CASE("harness: suite rows carry rates that sum to one") {
  const SuiteGrid grid = parse_suite_grid(
      R"({"grid": {"num_variables": [3], "diff": [0, 2]}, "tasks": 2, "reps": 1,
          "iterations": 60, "max_steps": 16, "seed": 3})");
  CHECK(grid.conditions.size() == 2);
  const auto rows = run_suite(grid);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.runs == 2);
    CHECK(r.success_rate + r.failure_rate + r.hang_rate == doctest::Approx(1.0));
  }
  std::stringstream csv(suite_csv(rows));
  std::string header;
  std::getline(csv, header);
  CHECK(csv_fields(header).size() == 11);
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) {
    const auto f = csv_fields(line);
    REQUIRE(f.size() == 11);
    CHECK(std::stod(f[7]) + std::stod(f[8]) + std::stod(f[9]) == doctest::Approx(1.0).epsilon(1e-3));
    ++lines;
  }
  CHECK(lines == 4);
  CHECK_THROWS_AS(parse_suite_grid("{"), ParseError);
}

TEST_CASE("harness: agent kinds parse by name") {
  CHECK(parse_agent_kind("epike") == AgentKind::EPike);
  CHECK(parse_agent_kind("pike") == AgentKind::Pike);
  CHECK(parse_agent_kind("script") == AgentKind::Script);
  CHECK(std::string(agent_kind_name(AgentKind::Pike)) == "pike");
  CHECK_THROWS(parse_agent_kind("oracle"));
}
