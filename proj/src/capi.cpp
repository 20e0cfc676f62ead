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

#include "epike/epike.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "epike/errors.hpp"
#include "epike/harness.hpp"
#include "epike/live.hpp"
#include "epike/syntax.hpp"
#include "json.hpp"

using nlohmann::json;

struct epk_scenario {
  epike::Scenario sc;
};

struct epk_session {
  std::shared_ptr<const epike::Scenario> sc;
  std::unique_ptr<epike::AgentSession> session;
};

struct epk_live {
  std::unique_ptr<epike::LiveSession> live;
};

namespace {

thread_local std::string g_last_error;

epk_status fail(epk_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

// Maps the engine's exception hierarchy onto status codes; the order of
// the catch clauses matters because some types derive from others.
template <class F>
epk_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return EPK_OK;
  } catch (const epike::ParseError& e) {
    return fail(EPK_ERR_PARSE, e.what());
  } catch (const epike::MalformedConstraint& e) {
    return fail(EPK_ERR_PARSE, e.what());
  } catch (const epike::MalformedFormula& e) {
    return fail(EPK_ERR_PARSE, e.what());
  } catch (const epike::UnknownAgent& e) {
    return fail(EPK_ERR_UNKNOWN_NAME, e.what());
  } catch (const epike::UnknownWorld& e) {
    return fail(EPK_ERR_UNKNOWN_NAME, e.what());
  } catch (const epike::UnknownTimePoint& e) {
    return fail(EPK_ERR_UNKNOWN_NAME, e.what());
  } catch (const epike::InapplicableAction& e) {
    return fail(EPK_ERR_INAPPLICABLE, e.what());
  } catch (const epike::ObservationContradiction& e) {
    return fail(EPK_ERR_CONTRADICTION, e.what());
  } catch (const epike::GenerationError& e) {
    return fail(EPK_ERR_GENERATION, e.what());
  } catch (const epike::Error& e) {
    return fail(EPK_ERR_INVALID, e.what());
  } catch (const json::exception& e) {
    return fail(EPK_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(EPK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EPK_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_options(const char* text) {
  if (!text || !*text) return json::object();
  json j = json::parse(text);
  if (!j.is_object()) throw epike::ParseError("options must be a JSON object");
  return j;
}

epike::AgentOptions agent_options(const json& j) {
  epike::AgentOptions o;
  o.iteration_cap = j.value("iterations", o.iteration_cap);
  o.time_budget_ms = j.value("timeout_ms", o.time_budget_ms);
  o.seed = j.value("seed", o.seed);
  o.horizon = j.value("horizon", o.horizon);
  o.explanation_depth = j.value("explanation_depth", o.explanation_depth);
  return o;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

epike::RunOptions run_options(const epike::Scenario& sc, const json& j) {
  epike::RunOptions o;
  o.agent = agent_options(j);
  o.max_steps = j.value("max_steps", o.max_steps);
  o.wall_clock_ms = j.value("wall_clock_ms", o.wall_clock_ms);
  o.hang_mitigation = j.value("hang_mitigation", o.hang_mitigation);
  o.deterministic_trace = j.value("deterministic", o.deterministic_trace);
  if (j.contains("latency_seed")) o.latency_seed = j.at("latency_seed").get<uint64_t>();
  if (j.contains("agents")) {
    std::vector<std::string> kinds = j.at("agents").is_string()
                                         ? split_commas(j.at("agents").get<std::string>())
                                         : j.at("agents").get<std::vector<std::string>>();
    const auto& agents = sc.lib->agents();
    if (kinds.size() != agents.size()) {
      throw epike::InvalidScenario("expected " + std::to_string(agents.size()) +
                                   " agent kinds, one per agent in declaration order");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) o.kinds[agents[i]] = epike::parse_agent_kind(kinds[i]);
  }
  return o;
}

json record_json(const epike::ActionRecord& r) {
  json j{{"actor", r.actor}, {"kind", r.kind}};
  if (!r.payload.empty()) j["payload"] = r.payload;
  if (!r.askee.empty()) j["askee"] = r.askee;
  if (!r.answer_to.empty()) j["answer_to"] = r.answer_to;
  return j;
}

epike::ActionRecord parse_record(const char* text) {
  if (!text) throw epike::ParseError("action is null");
  const json j = json::parse(text);
  epike::ActionRecord r;
  r.actor = j.at("actor").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.payload = j.value("payload", "");
  r.askee = j.value("askee", "");
  r.answer_to = j.value("answer_to", "");
  return r;
}

json encode_events(const std::vector<epike::LiveEvent>& evs) {
  json arr = json::array();
  for (const auto& e : evs) {
    json j = record_json(e.action);
    j["seq"] = e.seq;
    j["text"] = e.text;
    j["branch"] = e.branch;
    arr.push_back(std::move(j));
  }
  return arr;
}

#define EPK_REQUIRE(cond, what) \
  if (!(cond)) return fail(EPK_ERR_ARGUMENT, what)

}  // namespace

extern "C" {

const char* epk_version(void) { return "1.0.0"; }

const char* epk_last_error(void) { return g_last_error.c_str(); }

const char* epk_status_name(epk_status status) {
  switch (status) {
    case EPK_OK: return "ok";
    case EPK_ERR_ARGUMENT: return "argument";
    case EPK_ERR_PARSE: return "parse";
    case EPK_ERR_INVALID: return "invalid";
    case EPK_ERR_UNKNOWN_NAME: return "unknown-name";
    case EPK_ERR_INAPPLICABLE: return "inapplicable";
    case EPK_ERR_CONTRADICTION: return "contradiction";
    case EPK_ERR_GENERATION: return "generation";
    case EPK_ERR_INTERNAL: return "internal";
  }
  return "internal";
}

void epk_string_free(char* s) { std::free(s); }

epk_status epk_scenario_load(const char* path, epk_scenario** out) {
  EPK_REQUIRE(path && out, "path and out are required");
  return guarded([&] { *out = new epk_scenario{epike::load_scenario(path)}; });
}

epk_status epk_scenario_parse(const char* text, epk_scenario** out) {
  EPK_REQUIRE(text && out, "json and out are required");
  return guarded([&] { *out = new epk_scenario{epike::parse_scenario(text)}; });
}

epk_status epk_scenario_generate(const char* params_json, epk_scenario** out) {
  EPK_REQUIRE(out, "out is required");
  return guarded([&] {
    const json j = parse_options(params_json);
    epike::RandomTaskParams p;
    p.num_variables = j.value("num_variables", p.num_variables);
    p.num_orders = j.value("num_orders", p.num_orders);
    p.num_constraints = j.value("num_constraints", p.num_constraints);
    p.diff = j.value("diff", p.diff);
    p.domain_size = j.value("domain_size", p.domain_size);
    p.seed = j.value("seed", p.seed);
    p.max_retries = j.value("max_retries", p.max_retries);
    *out = new epk_scenario{epike::generate_random_task(p)};
  });
}

epk_status epk_scenario_to_json(const epk_scenario* sc, char** out) {
  EPK_REQUIRE(sc && out, "scenario and out are required");
  return guarded([&] { *out = dup(epike::scenario_to_json(sc->sc)); });
}

epk_status epk_scenario_check(const epk_scenario* sc, int* valid, char** report) {
  EPK_REQUIRE(sc && valid, "scenario and valid are required");
  return guarded([&] {
    const epike::ScenarioReport rep = epike::check_scenario(sc->sc);
    *valid = rep.problems.empty() ? 1 : 0;
    if (report) *report = dup(rep.text);
  });
}

epk_status epk_scenario_eval(const epk_scenario* sc, const char* agent, const char* formula,
                             int* result) {
  EPK_REQUIRE(sc && formula && result, "scenario, formula and result are required");
  return guarded([&] {
    const epike::Formula f = epike::parse_formula(formula);
    const epike::PointedState s = agent ? sc->sc.agent_state(agent) : sc->sc.ground_state();
    *result = epike::evaluate(s, f) ? 1 : 0;
  });
}

void epk_scenario_free(epk_scenario* sc) { delete sc; }

epk_status epk_run(const epk_scenario* sc, const char* options_json, char** result_json) {
  EPK_REQUIRE(sc && result_json, "scenario and result are required");
  return guarded([&] {
    const epike::RunOptions opts = run_options(sc->sc, parse_options(options_json));
    const epike::RunOutcome out = epike::run_pair(sc->sc, opts);
    json j{{"verdict", out.verdict},     {"stop_reason", out.stop_reason},
           {"error", out.error},         {"steps", out.steps.size()},
           {"first_actor", out.first_actor}, {"trace", epike::trace_jsonl(out)}};
    json cb = json::object();
    for (const auto& [a, v] : out.callback_ms) {
      double total = 0;
      for (double ms : v) total += ms;
      cb[a] = v.empty() ? 0.0 : total / static_cast<double>(v.size());
    }
    j["mean_callback_ms"] = cb;
    j["final_branch"] = out.final_branch;
    *result_json = dup(j.dump());
  });
}

epk_status epk_replay(const epk_scenario* sc, const char* options_json, const char* trace_jsonl,
                      int* mismatches) {
  EPK_REQUIRE(sc && trace_jsonl && mismatches, "scenario, trace and mismatches are required");
  return guarded([&] {
    const epike::RunOptions opts = run_options(sc->sc, parse_options(options_json));
    const auto bad = epike::replay_trace(sc->sc, opts, epike::parse_trace_jsonl(trace_jsonl));
    *mismatches = static_cast<int>(bad.size());
  });
}

epk_status epk_suite(const char* grid_json, char** csv) {
  EPK_REQUIRE(grid_json && csv, "grid and csv are required");
  return guarded([&] {
    *csv = dup(epike::suite_csv(epike::run_suite(epike::parse_suite_grid(grid_json))));
  });
}

epk_status epk_session_create(const epk_scenario* sc, const char* agent, const char* kind,
                              const char* options_json, epk_session** out) {
  EPK_REQUIRE(sc && agent && out, "scenario, agent and out are required");
  return guarded([&] {
    auto shared = std::make_shared<const epike::Scenario>(sc->sc);
    const epike::AgentKind k = epike::parse_agent_kind(kind ? kind : "epike");
    auto session = epike::make_session(*shared, agent, k, agent_options(parse_options(options_json)));
    *out = new epk_session{std::move(shared), std::move(session)};
  });
}

epk_status epk_session_observe(epk_session* s, const char* action_json) {
  EPK_REQUIRE(s && action_json, "session and action are required");
  return guarded([&] {
    s->session->observe(epike::from_record(parse_record(action_json), *s->sc->lib));
  });
}

epk_status epk_session_decide(epk_session* s, char** action_json) {
  EPK_REQUIRE(s && action_json, "session and action are required");
  return guarded([&] {
    *action_json = nullptr;
    if (auto act = s->session->decide()) *action_json = dup(record_json(epike::to_record(*act)).dump());
  });
}

epk_status epk_session_branch(const epk_session* s, char** branch) {
  EPK_REQUIRE(s && branch, "session and branch are required");
  return guarded([&] { *branch = dup(epike::branch_name(s->session->last_branch())); });
}

void epk_session_free(epk_session* s) { delete s; }

epk_status epk_live_create(const epk_scenario* sc, const char* human, const char* options_json,
                           epk_live** out) {
  EPK_REQUIRE(sc && human && out, "scenario, human and out are required");
  return guarded([&] {
    const json j = parse_options(options_json);
    auto live = std::make_unique<epike::LiveSession>(sc->sc, human, agent_options(j),
                                                     j.value("engine_step_cap", 20));
    *out = new epk_live{std::move(live)};
  });
}

epk_status epk_live_view(epk_live* live, char** view_json) {
  EPK_REQUIRE(live && view_json, "session and view are required");
  return guarded([&] {
    const epike::LiveView v = live->live->view();
    json j{{"human", v.human}, {"variables", v.variables}, {"status", v.status},
           {"last_seq", v.last_seq}};
    j["worlds"] = json::array();
    for (const auto& w : v.worlds) {
      j["worlds"].push_back(
          {{"id", w.id}, {"most_plausible", w.most_plausible}, {"feasible_subplans", w.feasible_subplans}});
    }
    json avail = json::object();
    for (const auto& r : v.available) {
      if (!avail.contains(r.kind)) avail[r.kind] = json::array();
      avail[r.kind].push_back(record_json(r));
    }
    j["available"] = avail;
    if (v.pending) {
      j["pending_question"] = {{"asker", v.pending->asker},
                               {"askee", v.pending->askee},
                               {"formula", epike::to_string(v.pending->phi)}};
    } else {
      j["pending_question"] = nullptr;
    }
    *view_json = dup(j.dump());
  });
}

epk_status epk_live_submit(epk_live* live, const char* action_json, char** events_json) {
  EPK_REQUIRE(live && action_json && events_json, "session, action and events are required");
  return guarded([&] {
    *events_json = dup(encode_events(live->live->submit(parse_record(action_json))).dump());
  });
}

epk_status epk_live_events(epk_live* live, int since, int timeout_ms, char** events_json) {
  EPK_REQUIRE(live && events_json, "session and events are required");
  return guarded([&] {
    const auto evs = timeout_ms > 0
                         ? live->live->wait_events(since, std::chrono::milliseconds(timeout_ms))
                         : live->live->events_since(since);
    *events_json = dup(encode_events(evs).dump());
  });
}

epk_status epk_live_close(epk_live* live) {
  EPK_REQUIRE(live, "session is required");
  return guarded([&] { live->live->close(); });
}

void epk_live_free(epk_live* live) { delete live; }

}  // extern "C"
