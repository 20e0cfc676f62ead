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

#include "epike/scenario.hpp"

#include <fstream>
#include <sstream>

#include "epike/errors.hpp"
#include "epike/syntax.hpp"
#include "json.hpp"

namespace epike {

using nlohmann::json;

PointedState Scenario::agent_state(const std::string& agent) const {
  auto it = designated.find(agent);
  if (it == designated.end()) throw UnknownAgent(agent);
  return {initial.model, it->second};
}

const KnowledgeBase& Scenario::ground_kb() const {
  return initial.model->worlds()[world_indices(initial.designated).front()].kb;
}

void finalize_scenario(Scenario& sc) {
  if (!sc.lib) throw InvalidScenario("scenario has no plan library");
  const auto& agents = sc.lib->agents();
  if (agents.empty()) throw InvalidScenario("scenario declares no agents");
  if (sc.ego.empty()) sc.ego = agents.front();
  if (std::find(agents.begin(), agents.end(), sc.ego) == agents.end()) throw UnknownAgent(sc.ego);
  if (sc.worlds.empty()) throw InvalidScenario("scenario declares no worlds");

  std::vector<World> raw;
  std::map<std::string, int> index;
  for (const auto& w : sc.worlds) {
    index[w.id] = static_cast<int>(raw.size());
    for (const auto& c : w.constraints) validate_constraint(*sc.lib->decision_vocabulary(), c);
    raw.push_back({w.id, KnowledgeBase(sc.lib->decision_vocabulary(), w.constraints)});
  }
  auto world_of = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw UnknownWorld(id);
    return it->second;
  };
  const int n = static_cast<int>(raw.size());
  if (n > kMaxWorlds) throw InvalidScenario("scenario declares more than 64 worlds");

  std::vector<Relation> order(agents.size(), Relation(n, 0));
  for (const auto& e : sc.edges) {
    auto it = std::find(agents.begin(), agents.end(), e.agent);
    if (it == agents.end()) throw UnknownAgent(e.agent);
    Relation& rel = order[it - agents.begin()];
    const int from = world_of(e.from);
    const int to = world_of(e.to);
    rel[to] |= world_bit(from);
    if (!e.strict) rel[from] |= world_bit(to);
  }
  for (auto& rel : order) rel = close_preorder(std::move(rel), n);
  for (const auto& e : sc.edges) {
    const int a = static_cast<int>(std::find(agents.begin(), agents.end(), e.agent) - agents.begin());
    if (e.strict && has_world(order[a][world_of(e.from)], world_of(e.to))) {
      throw InvalidScenario("strict plausibility edge " + e.from + " -> " + e.to + " for " +
                            e.agent + " is contradicted by a cycle");
    }
  }

  auto model = std::make_shared<const PlausibilityModel>(agents, std::move(raw), std::move(order));
  const int truth = world_of(sc.true_world);
  const PointedState plain{model, world_bit(truth)};
  sc.initial = compile_initial_state(plain, sc.lib);

  sc.designated.clear();
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const int ai = static_cast<int>(a);
    WorldSet d = 0;
    auto it = sc.designated_spec.find(agents[a]);
    if (it == sc.designated_spec.end()) {
      d = sc.initial.model->component(ai, truth);
    } else {
      for (const auto& id : it->second) d |= world_bit(world_of(id));
    }
    if (!has_world(d, truth)) {
      throw InvalidScenario("the true world is outside " + agents[a] + "'s designated worlds");
    }
    for (int w : world_indices(d)) {
      if ((sc.initial.model->component(ai, w) & ~d) != 0) {
        throw InvalidScenario("designated worlds of " + agents[a] +
                              " must be closed under its plausibility components");
      }
    }
    sc.designated[agents[a]] = d;
  }
  for (const auto& rec : sc.prelude) from_record(rec, *sc.lib);
  for (const auto& [agent, recs] : sc.scripts) {
    if (std::find(agents.begin(), agents.end(), agent) == agents.end()) throw UnknownAgent(agent);
    for (const auto& rec : recs) from_record(rec, *sc.lib);
  }
}

namespace {

ActionRecord record_from_json(const json& j) {
  ActionRecord r;
  r.kind = j.at("kind").get<std::string>();
  r.actor = j.at("actor").get<std::string>();
  r.payload = j.value("payload", "");
  r.askee = j.value("askee", "");
  r.answer_to = j.value("answer_to", "");
  return r;
}

json record_to_json(const ActionRecord& r) {
  json j{{"actor", r.actor}, {"kind", r.kind}};
  if (!r.payload.empty()) j["payload"] = r.payload;
  if (!r.askee.empty()) j["askee"] = r.askee;
  if (!r.answer_to.empty()) j["answer_to"] = r.answer_to;
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", 0) != 1) throw InvalidScenario("unsupported scenario format (expected 1)");
    Scenario sc;
    sc.name = j.value("name", "");
    std::vector<VariableDecl> vars;
    for (const auto& v : j.at("variables")) {
      vars.push_back({v.at("name").get<std::string>(), v.at("domain").get<std::vector<std::string>>()});
    }
    std::vector<TimePoint> tps;
    for (const auto& t : j.at("timepoints")) {
      tps.push_back({t.at("id").get<std::string>(), parse_constraint(t.value("guard", "true")),
                     t.at("owner").get<std::string>()});
    }
    std::vector<OrderingConstraint> ords;
    for (const auto& o : j.value("orderings", json::array())) {
      ords.push_back({o.at("pred").get<std::string>(), o.at("succ").get<std::string>(),
                      parse_constraint(o.value("guard", "true"))});
    }
    std::vector<Constraint> common;
    for (const auto& c : j.value("constraints", json::array())) {
      common.push_back(parse_constraint(c.get<std::string>()));
    }
    sc.lib = std::make_shared<const PlanLibrary>(std::move(vars), std::move(tps), std::move(ords),
                                                 j.at("agents").get<std::vector<std::string>>(),
                                                 std::move(common));
    for (const auto& w : j.at("worlds")) {
      WorldSpec spec{w.at("id").get<std::string>(), {}};
      for (const auto& c : w.value("constraints", json::array())) {
        spec.constraints.push_back(parse_constraint(c.get<std::string>()));
      }
      sc.worlds.push_back(std::move(spec));
    }
    for (const auto& e : j.value("plausibility", json::array())) {
      const std::string kind = e.value("kind", "strict");
      if (kind != "strict" && kind != "equi") {
        throw InvalidScenario("plausibility kind must be 'strict' or 'equi'");
      }
      sc.edges.push_back({e.at("agent").get<std::string>(), e.at("from").get<std::string>(),
                          e.at("to").get<std::string>(), kind == "strict"});
    }
    const json designated = j.value("designated", json::object());
    for (const auto& [agent, ids] : designated.items()) {
      sc.designated_spec[agent] = ids.get<std::vector<std::string>>();
    }
    sc.true_world = j.at("true_world").get<std::string>();
    sc.ego = j.value("ego", "");
    for (const auto& r : j.value("prelude", json::array())) sc.prelude.push_back(record_from_json(r));
    const json scripts = j.value("scripts", json::object());
    for (const auto& [agent, recs] : scripts.items()) {
      for (const auto& r : recs) sc.scripts[agent].push_back(record_from_json(r));
    }
    finalize_scenario(sc);
    return sc;
  } catch (const json::exception& e) {
    throw InvalidScenario(std::string("scenario field error: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidScenario("cannot open scenario '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& sc) {
  const PlanLibrary& lib = *sc.lib;
  json j;
  j["format"] = 1;
  if (!sc.name.empty()) j["name"] = sc.name;
  j["variables"] = json::array();
  for (const auto& v : lib.variables()) j["variables"].push_back({{"name", v.name}, {"domain", v.domain}});
  j["agents"] = lib.agents();
  j["ego"] = sc.ego;
  j["timepoints"] = json::array();
  for (const auto& t : lib.timepoints()) {
    j["timepoints"].push_back({{"id", t.id}, {"owner", t.owner}, {"guard", to_string(t.guard)}});
  }
  j["orderings"] = json::array();
  for (const auto& o : lib.orderings()) {
    j["orderings"].push_back({{"pred", o.pred}, {"succ", o.succ}, {"guard", to_string(o.guard)}});
  }
  j["constraints"] = json::array();
  for (const auto& c : lib.constraints()) j["constraints"].push_back(to_string(c));
  j["worlds"] = json::array();
  for (const auto& w : sc.worlds) {
    json cs = json::array();
    for (const auto& c : w.constraints) cs.push_back(to_string(c));
    j["worlds"].push_back({{"id", w.id}, {"constraints", cs}});
  }
  j["plausibility"] = json::array();
  for (const auto& e : sc.edges) {
    j["plausibility"].push_back(
        {{"agent", e.agent}, {"from", e.from}, {"to", e.to}, {"kind", e.strict ? "strict" : "equi"}});
  }
  if (!sc.designated_spec.empty()) j["designated"] = sc.designated_spec;
  j["true_world"] = sc.true_world;
  if (!sc.prelude.empty()) {
    j["prelude"] = json::array();
    for (const auto& r : sc.prelude) j["prelude"].push_back(record_to_json(r));
  }
  if (!sc.scripts.empty()) {
    j["scripts"] = json::object();
    for (const auto& [agent, recs] : sc.scripts) {
      j["scripts"][agent] = json::array();
      for (const auto& r : recs) j["scripts"][agent].push_back(record_to_json(r));
    }
  }
  return j.dump(2);
}

ScenarioReport check_scenario(const Scenario& sc) {
  ScenarioReport rep;
  const PlausibilityModel& m = *sc.initial.model;
  for (const auto& v : validate_model(m)) {
    std::string w;
    for (const auto& id : v.witnesses) w += (w.empty() ? "" : ",") + id;
    rep.problems.push_back(v.property + " violated for " + v.agent + " at {" + w + "}");
  }
  if (feasible_subplans(sc.ground_kb(), *sc.lib).empty()) {
    rep.problems.push_back("the true world admits no feasible subplan");
  }
  std::ostringstream out;
  out << "scenario " << (sc.name.empty() ? "(unnamed)" : sc.name) << "\n";
  out << "agents:";
  for (const auto& a : m.agents()) out << " " << a << (a == sc.ego ? "(ego)" : "");
  out << "\nvariables: " << sc.lib->variables().size() << ", time points: "
      << sc.lib->timepoints().size() << ", orderings: " << sc.lib->orderings().size()
      << ", nogoods: " << sc.lib->nogoods().size() << "\n";
  for (const auto& w : m.worlds()) {
    out << "world " << w.id << (w.id == sc.true_world ? " (true)" : "") << ": "
        << feasible_subplans(w.kb, *sc.lib).size() << " feasible subplans\n";
  }
  for (std::size_t a = 0; a < m.agents().size(); ++a) {
    const std::string& agent = m.agents()[a];
    const PointedState view = sc.agent_state(agent);
    out << agent << " considers {";
    bool first = true;
    for (const auto& id : designated_ids(view)) {
      out << (first ? "" : ", ") << id;
      first = false;
    }
    out << "}, most plausible {";
    first = true;
    for (const auto& id : designated_ids(local_perspective(view, agent))) {
      out << (first ? "" : ", ") << id;
      first = false;
    }
    out << "}\n";
  }
  out << (rep.problems.empty() ? "valid\n" : "invalid\n");
  for (const auto& p : rep.problems) out << "  " << p << "\n";
  rep.text = out.str();
  return rep;
}

}  // namespace epike
