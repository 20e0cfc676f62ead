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

#include "epike/harness.hpp"

#include <time.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "epike/errors.hpp"
#include "epike/syntax.hpp"
#include "json.hpp"

namespace epike {

using nlohmann::json;

AgentKind parse_agent_kind(const std::string& name) {
  if (name == "epike") return AgentKind::EPike;
  if (name == "pike") return AgentKind::Pike;
  if (name == "script") return AgentKind::Script;
  throw InvalidScenario("unknown agent kind '" + name + "' (epike | pike | script)");
}

const char* agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::EPike: return "epike";
    case AgentKind::Pike: return "pike";
    case AgentKind::Script: return "script";
  }
  return "epike";
}

ScriptSession::ScriptSession(LibraryPtr lib, std::string ego, PointedState initial,
                             std::vector<ActionRecord> script)
    : AgentSession(std::move(lib), std::move(ego), std::move(initial)), script_(std::move(script)) {}

std::optional<PointedAction> ScriptSession::decide() {
  ++decisions_;
  if (pending_ && pending_->askee == ego_) {
    last_branch_ = Branch::Answer;
    return answer_pending();
  }
  if (next_ < script_.size()) {
    last_branch_ = Branch::SearchAction;
    return from_record(script_[next_++], *lib_);
  }
  last_branch_ = Branch::None;
  return std::nullopt;
}

std::unique_ptr<AgentSession> make_session(const Scenario& sc, const std::string& agent,
                                           AgentKind kind, const AgentOptions& opts) {
  AgentOptions mine = opts;
  mine.seed = mix_hash(opts.seed, hash_string(agent));
  switch (kind) {
    case AgentKind::EPike:
      return std::make_unique<AgentSession>(sc.lib, agent, sc.agent_state(agent), mine);
    case AgentKind::Pike:
      return std::make_unique<PikeSession>(sc.lib, agent, sc.agent_state(agent), mine);
    case AgentKind::Script: {
      auto it = sc.scripts.find(agent);
      std::vector<ActionRecord> script = it == sc.scripts.end() ? std::vector<ActionRecord>{} : it->second;
      return std::make_unique<ScriptSession>(sc.lib, agent, sc.agent_state(agent), std::move(script));
    }
  }
  return nullptr;
}

namespace {

double thread_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) / 1e6;
}

std::vector<std::string> poll_order(const Scenario& sc) {
  std::vector<std::string> order{sc.ego};
  for (const auto& a : sc.lib->agents()) {
    if (a != sc.ego) order.push_back(a);
  }
  return order;
}

std::string hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

RunOutcome run_pair(const Scenario& sc, const RunOptions& opts) {
  std::map<std::string, std::unique_ptr<AgentSession>> sessions;
  return run_pair(sc, opts, sessions);
}

RunOutcome run_pair(const Scenario& sc, const RunOptions& opts,
                    std::map<std::string, std::unique_ptr<AgentSession>>& sessions) {
  const PlanLibrary& lib = *sc.lib;
  sessions.clear();
  for (const auto& a : lib.agents()) {
    auto it = opts.kinds.find(a);
    sessions[a] = make_session(sc, a, it == opts.kinds.end() ? AgentKind::EPike : it->second, opts.agent);
  }
  std::vector<std::string> order = poll_order(sc);
  std::optional<std::mt19937_64> latency;
  if (opts.latency_seed) latency.emplace(*opts.latency_seed);

  RunOutcome out;
  KnowledgeBase ground = sc.ground_kb();
  std::set<std::string> executed;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  bool halted = false;

  auto apply = [&](const PointedAction& act, const std::string& branch) {
    switch (act.meta.kind) {
      case ActionKind::Execute:
        if (!executed.count(act.meta.timepoint)) {
          ground = record_execution(ground, lib, act.meta.timepoint, executed);
          executed.insert(act.meta.timepoint);
        }
        break;
      case ActionKind::Intent:
        ground = ground.add(*act.meta.constraint);
        break;
      default:
        break;
    }
    TraceStep step;
    step.seq = static_cast<int>(out.steps.size());
    step.action = to_record(act);
    step.branch = branch;
    for (const auto& a : lib.agents()) {
      try {
        sessions[a]->observe(act);
      } catch (const ObservationContradiction& e) {
        out.error = e.what();
        halted = true;
      }
      step.fingerprints[a] = sessions[a]->state().fingerprint();
    }
    step.elapsed_ms = opts.deterministic_trace ? 0.0 : elapsed();
    out.steps.push_back(std::move(step));
  };

  for (const auto& rec : sc.prelude) {
    if (halted) break;
    apply(from_record(rec, lib), "prelude");
  }

  out.stop_reason = "quiescent";
  while (!halted) {
    if (static_cast<int>(out.steps.size()) >= opts.max_steps) {
      out.stop_reason = "step-cap";
      break;
    }
    if (opts.wall_clock_ms > 0 && elapsed() >= opts.wall_clock_ms) {
      out.stop_reason = "wall-clock";
      break;
    }
    if (latency) std::rotate(order.begin(), order.begin() + (*latency)() % order.size(), order.end());
    bool acted = false;
    for (const auto& a : order) {
      const double t0 = thread_cpu_ms();
      std::optional<PointedAction> act = sessions[a]->decide();
      out.callback_ms[a].push_back(thread_cpu_ms() - t0);
      if (act) {
        out.first_actor.push_back(a);
        apply(*act, branch_name(sessions[a]->last_branch()));
        acted = true;
        break;
      }
    }
    if (!acted && opts.hang_mitigation) {
      for (const auto& a : order) {
        if (auto fb = sessions[a]->fallback()) {
          out.first_actor.push_back(a);
          apply(*fb, "fallback");
          acted = true;
          break;
        }
      }
    }
    if (!acted) break;
  }
  if (halted) out.stop_reason = "contradiction";
  for (const auto& a : lib.agents()) out.final_branch[a] = branch_name(sessions[a]->last_branch());

  if (!ground.consistent()) {
    out.verdict = "failure";
  } else if (out.stop_reason == "quiescent" && success_holds(ground, lib)) {
    out.verdict = "success";
  } else {
    out.verdict = "hang";
  }
  return out;
}

std::string trace_jsonl(const RunOutcome& out) {
  std::ostringstream os;
  for (const auto& s : out.steps) {
    json j{{"seq", s.seq}, {"actor", s.action.actor}, {"kind", s.action.kind}};
    if (!s.action.payload.empty()) j["payload"] = s.action.payload;
    if (!s.action.askee.empty()) j["askee"] = s.action.askee;
    if (!s.action.answer_to.empty()) j["answer_to"] = s.action.answer_to;
    j["branch"] = s.branch;
    j["elapsed_ms"] = s.elapsed_ms;
    json fp = json::object();
    for (const auto& [a, v] : s.fingerprints) fp[a] = hex(v);
    j["fingerprints"] = fp;
    os << j.dump() << "\n";
  }
  os << json{{"verdict", out.verdict}, {"stop_reason", out.stop_reason}}.dump() << "\n";
  return os.str();
}

std::vector<TraceStep> parse_trace_jsonl(const std::string& text) {
  std::vector<TraceStep> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad trace line: ") + e.what());
    }
    if (!j.contains("seq")) continue;
    TraceStep s;
    s.seq = j.at("seq").get<int>();
    s.action.actor = j.at("actor").get<std::string>();
    s.action.kind = j.at("kind").get<std::string>();
    s.action.payload = j.value("payload", "");
    s.action.askee = j.value("askee", "");
    s.action.answer_to = j.value("answer_to", "");
    s.branch = j.value("branch", "");
    s.elapsed_ms = j.value("elapsed_ms", 0.0);
    const json fps = j.value("fingerprints", json::object());
    for (const auto& [a, v] : fps.items()) {
      s.fingerprints[a] = std::stoull(v.get<std::string>(), nullptr, 16);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<int> replay_trace(const Scenario& sc, const RunOptions& opts,
                              const std::vector<TraceStep>& steps) {
  std::map<std::string, std::unique_ptr<AgentSession>> sessions;
  for (const auto& a : sc.lib->agents()) {
    auto it = opts.kinds.find(a);
    sessions[a] = make_session(sc, a, it == opts.kinds.end() ? AgentKind::EPike : it->second, opts.agent);
  }
  std::vector<int> mismatches;
  for (const auto& s : steps) {
    const PointedAction act = from_record(s.action, *sc.lib);
    bool ok = true;
    for (auto& [a, session] : sessions) {
      try {
        session->observe(act);
      } catch (const ObservationContradiction&) {
        ok = false;
      }
      auto it = s.fingerprints.find(a);
      if (it != s.fingerprints.end() && it->second != session->state().fingerprint()) ok = false;
    }
    if (!ok) mismatches.push_back(s.seq);
  }
  return mismatches;
}

// ---------------------------------------------------------------------------
// Random tasks

namespace {

struct Draw {
  std::mt19937_64 rng;
  explicit Draw(uint64_t seed) : rng(seed) {}
  // Modulo draw: identical across standard libraries.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng() % n); }
};

std::string value_name(int i) { return std::string(1, static_cast<char>('a' + i)); }

std::optional<Scenario> try_generate(const RandomTaskParams& p, Draw& draw) {
  const std::vector<std::string> agents{"R", "H"};
  const int nv = p.num_variables;
  std::vector<VariableDecl> vars;
  std::vector<TimePoint> tps;
  std::vector<std::string> owner(nv);
  for (int i = 0; i < nv; ++i) {
    VariableDecl v{"v" + std::to_string(i + 1), {}};
    for (int d = 0; d < p.domain_size; ++d) v.domain.push_back(value_name(d));
    owner[i] = agents[i % 2];
    for (const auto& val : v.domain) {
      tps.push_back({"e_" + v.name + "_" + val, Constraint::assign(v.name, val), owner[i]});
    }
    vars.push_back(std::move(v));
  }
  auto tp_id = [&](int var, int val) { return "e_" + vars[var].name + "_" + vars[var].domain[val]; };
  auto pair_guard = [&](int i, int a, int j, int b) {
    return Constraint::conjunction({Constraint::assign(vars[i].name, vars[i].domain[a]),
                                    Constraint::assign(vars[j].name, vars[j].domain[b])});
  };

  std::vector<OrderingConstraint> ords;
  std::set<std::string> seen;
  // Sequential skeleton: orderings link consecutive variables.
  for (int k = 0, tries = 0; k < p.num_orders && tries < 100; ++tries) {
    const int i = k % (nv - 1);
    const int j = i + 1;
    const int a = static_cast<int>(draw.below(p.domain_size));
    const int b = static_cast<int>(draw.below(p.domain_size));
    if (!seen.insert(tp_id(i, a) + ">" + tp_id(j, b)).second) continue;
    ords.push_back({tp_id(i, a), tp_id(j, b), pair_guard(i, a, j, b)});
    ++k;
  }

  std::vector<Constraint> constraints;
  seen.clear();
  for (int k = 0, tries = 0; k < p.num_constraints && tries < 200; ++tries) {
    int i = static_cast<int>(draw.below(nv));
    int j = static_cast<int>(draw.below(nv));
    if (i == j) continue;
    // Prefer pairs that couple both agents' choices.
    if (owner[i] == owner[j] && tries < 100) continue;
    if (i > j) std::swap(i, j);
    const int a = static_cast<int>(draw.below(p.domain_size));
    const int b = static_cast<int>(draw.below(p.domain_size));
    if (!seen.insert(tp_id(i, a) + "#" + tp_id(j, b)).second) continue;
    constraints.push_back(Constraint::negation(pair_guard(i, a, j, b)));
    ++k;
  }
  if (static_cast<int>(constraints.size()) < p.num_constraints) return std::nullopt;

  Scenario sc;
  sc.name = "random-v" + std::to_string(p.num_variables) + "-o" + std::to_string(p.num_orders) +
            "-c" + std::to_string(p.num_constraints) + "-d" + std::to_string(p.diff) + "-s" +
            std::to_string(p.seed);
  sc.lib = std::make_shared<const PlanLibrary>(vars, tps, ords, agents);
  const int worlds = 1 << p.diff;
  auto world_id = [&](int mask) {
    std::string id = "w";
    for (int k = 0; k < p.diff; ++k) id += (mask >> k) & 1 ? '1' : '0';
    return id;
  };
  for (int mask = 0; mask < worlds; ++mask) {
    WorldSpec w{world_id(mask), {}};
    for (int k = 0; k < p.num_constraints; ++k) {
      if (k >= p.diff || ((mask >> k) & 1)) w.constraints.push_back(constraints[k]);
    }
    sc.worlds.push_back(std::move(w));
  }
  // H ranks worlds by how few of the differing constraints they hold; R
  // tells every world apart.
  for (int u = 0; u < worlds; ++u) {
    for (int v = u + 1; v < worlds; ++v) {
      const int cu = __builtin_popcount(static_cast<unsigned>(u));
      const int cv = __builtin_popcount(static_cast<unsigned>(v));
      if (cu == cv) {
        sc.edges.push_back({"H", world_id(u), world_id(v), false});
      } else if (cu < cv) {
        sc.edges.push_back({"H", world_id(v), world_id(u), true});
      } else {
        sc.edges.push_back({"H", world_id(u), world_id(v), true});
      }
    }
  }
  sc.true_world = world_id(worlds - 1);
  sc.ego = "R";
  finalize_scenario(sc);
  if (feasible_subplans(sc.ground_kb(), *sc.lib).empty()) return std::nullopt;
  return sc;
}

}  // namespace

Scenario generate_random_task(const RandomTaskParams& p) {
  if (p.num_variables < 2) throw GenerationError("at least two variables are required");
  if (p.domain_size < 1 || p.domain_size > 26) throw GenerationError("domain size must be 1..26");
  if (p.diff < 0 || p.diff > 5) throw GenerationError("diff must be within 0..5");
  if (p.diff > p.num_constraints) throw GenerationError("diff cannot exceed the number of constraints");
  Draw draw(mix_hash(0x7a5c, p.seed));
  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    if (auto sc = try_generate(p, draw)) return *sc;
  }
  throw GenerationError("no solvable task found for the given parameters after " +
                        std::to_string(p.max_retries) + " attempts");
}

// ---------------------------------------------------------------------------
// Suites

namespace {

RandomTaskParams params_from_json(const json& j, RandomTaskParams base) {
  base.num_variables = j.value("num_variables", base.num_variables);
  base.num_orders = j.value("num_orders", base.num_orders);
  base.num_constraints = j.value("num_constraints", base.num_constraints);
  base.diff = j.value("diff", base.diff);
  base.domain_size = j.value("domain_size", base.domain_size);
  base.seed = j.value("seed", base.seed);
  return base;
}

}  // namespace

SuiteGrid parse_suite_grid(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("grid is not valid JSON: ") + e.what());
  }
  SuiteGrid g;
  try {
    g.tasks = j.value("tasks", g.tasks);
    g.reps = j.value("reps", g.reps);
    if (j.contains("systems")) g.systems = j.at("systems").get<std::vector<std::string>>();
    for (const auto& s : g.systems) parse_agent_kind(s);
    g.run.agent.iteration_cap = j.value("iterations", g.run.agent.iteration_cap);
    g.run.agent.time_budget_ms = j.value("time_budget_ms", g.run.agent.time_budget_ms);
    g.run.max_steps = j.value("max_steps", g.run.max_steps);
    g.run.agent.seed = j.value("seed", g.run.agent.seed);
    RandomTaskParams base;
    base.seed = g.run.agent.seed;
    if (j.contains("conditions")) {
      for (const auto& c : j.at("conditions")) g.conditions.push_back(params_from_json(c, base));
    } else {
      const json axes = j.value("grid", json::object());
      auto axis = [&](const char* key, int def) {
        if (!axes.contains(key)) return std::vector<int>{def};
        return axes.at(key).get<std::vector<int>>();
      };
      for (int v : axis("num_variables", base.num_variables))
        for (int o : axis("num_orders", base.num_orders))
          for (int c : axis("num_constraints", base.num_constraints))
            for (int d : axis("diff", base.diff))
              for (int s : axis("domain_size", base.domain_size)) {
                RandomTaskParams p = base;
                p.num_variables = v;
                p.num_orders = o;
                p.num_constraints = c;
                p.diff = d;
                p.domain_size = s;
                g.conditions.push_back(p);
              }
    }
  } catch (const json::exception& e) {
    throw InvalidScenario(std::string("grid field error: ") + e.what());
  }
  return g;
}

std::vector<SuiteRow> run_suite(const SuiteGrid& grid) {
  std::vector<SuiteRow> rows;
  for (const auto& cond : grid.conditions) {
    std::vector<Scenario> tasks;
    for (int t = 0; t < grid.tasks; ++t) {
      RandomTaskParams p = cond;
      p.seed = mix_hash(cond.seed, static_cast<uint64_t>(t));
      tasks.push_back(generate_random_task(p));
    }
    for (const auto& system : grid.systems) {
      const AgentKind kind = parse_agent_kind(system);
      SuiteRow row;
      row.params = cond;
      row.system = system;
      int success = 0, failure = 0, hang = 0;
      double cb_total = 0;
      int cb_count = 0;
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        for (int r = 0; r < grid.reps; ++r) {
          RunOptions opts = grid.run;
          for (const auto& a : tasks[t].lib->agents()) opts.kinds[a] = kind;
          opts.agent.seed = mix_hash(mix_hash(grid.run.agent.seed, t), static_cast<uint64_t>(r));
          opts.deterministic_trace = true;
          const RunOutcome out = run_pair(tasks[t], opts);
          success += out.verdict == "success";
          failure += out.verdict == "failure";
          hang += out.verdict == "hang";
          auto it = out.callback_ms.find(tasks[t].ego);
          if (it != out.callback_ms.end()) {
            for (double ms : it->second) {
              cb_total += ms;
              ++cb_count;
            }
          }
        }
      }
      row.runs = success + failure + hang;
      if (row.runs > 0) {
        row.success_rate = static_cast<double>(success) / row.runs;
        row.failure_rate = static_cast<double>(failure) / row.runs;
        row.hang_rate = static_cast<double>(hang) / row.runs;
      }
      row.mean_callback_ms = cb_count ? cb_total / cb_count : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string suite_csv(const std::vector<SuiteRow>& rows) {
  std::ostringstream os;
  os << "num_variables,num_orders,num_constraints,diff,domain_size,system,runs,success_rate,"
        "failure_rate,hang_rate,mean_callback_ms\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%s,%d,%.4f,%.4f,%.4f,%.3f\n",
                  r.params.num_variables, r.params.num_orders, r.params.num_constraints,
                  r.params.diff, r.params.domain_size, r.system.c_str(), r.runs, r.success_rate,
                  r.failure_rate, r.hang_rate, r.mean_callback_ms);
    os << buf;
  }
  return os.str();
}

}  // namespace epike
