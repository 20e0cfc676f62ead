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

#ifndef EPIKE_SCENARIO_HPP
#define EPIKE_SCENARIO_HPP

#include <map>
#include <string>
#include <vector>

#include "epike/actions.hpp"
#include "epike/model.hpp"
#include "epike/planlib.hpp"

namespace epike {

struct PlausibilityEdge {
  std::string agent;
  std::string from;
  std::string to;  // `to` is at least as plausible as `from`
  bool strict = true;
};

struct WorldSpec {
  std::string id;
  std::vector<Constraint> constraints;
};

// A task plus the team's initial nested beliefs. `initial` is the compiled
// full model; every agent's view shares it and differs in designation.
struct Scenario {
  std::string name;
  LibraryPtr lib;
  std::vector<WorldSpec> worlds;
  std::vector<PlausibilityEdge> edges;
  std::map<std::string, std::vector<std::string>> designated_spec;
  std::string true_world;
  std::string ego;
  std::vector<ActionRecord> prelude;
  std::map<std::string, std::vector<ActionRecord>> scripts;

  PointedState initial;                          // designated: the true world
  std::map<std::string, WorldSet> designated;    // per agent

  PointedState agent_state(const std::string& agent) const;
  PointedState ground_state() const { return initial; }
  const KnowledgeBase& ground_kb() const;
};

// Builds the compiled state from the declarative fields and validates it.
void finalize_scenario(Scenario& sc);

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& sc);

// Human-readable validation and model report (empty problems = valid).
struct ScenarioReport {
  std::vector<std::string> problems;
  std::string text;
};
ScenarioReport check_scenario(const Scenario& sc);

}  // namespace epike

#endif  // EPIKE_SCENARIO_HPP
