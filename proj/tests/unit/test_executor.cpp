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


#include "doctest.h"
#include "epike/actions.hpp"
#include "epike/executor.hpp"
#include "epike/harness.hpp"
#include "epike/mcts.hpp"
#include "fixtures.hpp"

using namespace epike;
using fixture::F;

namespace {

AgentOptions fast(uint64_t seed = 1) {
  AgentOptions o;
  o.iteration_cap = 150;
  o.seed = seed;
  return o;
}

// The callback ladder, evaluated directly on the agent's state.
Branch expected_branch(const AgentSession& s) {
  const auto& st = s.state();
  const std::string& a = s.ego();
  auto believes = [&](const Formula& f) { return evaluate(st, Formula::belief(a, f)); };
  auto everyone = [&](const Formula& f) {
    std::vector<Formula> ops;
    for (const auto& b : st.model->agents()) ops.push_back(Formula::belief(b, f));
    return Formula::conjunction(ops);
  };
  const bool bf = believes(Formula::failure());
  const bool bnf = believes(Formula::negation(Formula::failure()));
  const bool bs = believes(Formula::success());
  const bool guards[] = {bf && !believes(everyone(Formula::failure())), !bf && !bnf,
                         bnf && bs && !believes(everyone(Formula::success())), bnf && !bs};
  int held = 0;
  for (bool g : guards) held += g;
  CHECK(held <= 1);
  if (guards[0]) return Branch::ExplainFailure;
  if (guards[1]) return Branch::AskIfFailure;
  if (guards[2]) return Branch::ExplainSuccess;
  if (guards[3]) return Branch::SearchAction;
  return Branch::None;
}

struct Team {
  std::map<std::string, std::unique_ptr<AgentSession>> sessions;
  std::vector<std::string> order;  // ego first
};

Team make_team(const Scenario& sc, AgentKind kind, uint64_t seed) {
  Team t;
  t.order.push_back(sc.ego);
  for (const auto& a : sc.lib->agents()) {
    if (a != sc.ego) t.order.push_back(a);
  }
  for (const auto& a : t.order) t.sessions[a] = make_session(sc, a, kind, fast(seed));
  for (const auto& rec : sc.prelude) {
    const PointedAction act = from_record(rec, *sc.lib);
    for (auto& [name, s] : t.sessions) s->observe(act);
  }
  return t;
}

// Polls agents ego-first until a round produces no action. `check` sees
// each emitted action before it is broadcast.
template <typename Check>
int drive(const Scenario& sc, Team& team, int max_steps, Check check) {
  int steps = 0;
  while (steps < max_steps) {
    bool acted = false;
    for (const auto& name : team.order) {
      AgentSession& s = *team.sessions[name];
      const bool free = !s.pending_question().has_value();
      const Branch want = free ? expected_branch(s) : Branch::None;
      const auto act = s.decide();
      if (free && dynamic_cast<PikeSession*>(&s) == nullptr) CHECK(s.last_branch() == want);
      if (!act) continue;
      check(name, *act, team);
      for (auto& [other, o] : team.sessions) o->observe(*act);
      acted = true;
      ++steps;
      break;
    }
    if (!acted) break;
  }
  (void)sc;
  return steps;
}

std::vector<Scenario> scenarios() {
  std::vector<Scenario> out{fixture::breakfast("case1"), fixture::breakfast("case2"),
                            fixture::breakfast("case3"), fixture::breakfast("ordering")};
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    RandomTaskParams p;
    p.num_variables = 3;
    p.diff = 1 + static_cast<int>(seed % 2);
    p.seed = 100 + seed;
    out.push_back(generate_random_task(p));
  }
  return out;
}

}  // namespace

TEST_CASE("executor property: ladder branches and no implicit revision between EPike agents") {
  int emitted = 0;
  for (const auto& sc : scenarios()) {
    CAPTURE(sc.name);
    Team team = make_team(sc, AgentKind::EPike, 3);
    emitted += drive(sc, team, 12, [&](const std::string& actor, const PointedAction& act, Team& t) {
      CHECK(applicable(t.sessions[actor]->state(), act));
      for (const auto& [other, o] : t.sessions) {
        if (other != actor) CHECK_FALSE(detect_implicit_revision(o->state(), act));
      }
    });
  }
  CHECK(emitted > 0);
}

TEST_CASE("executor: a question is answered before anything else") {
  const Scenario sc = fixture::breakfast("case2");
  const Formula phi = F("in(drink=coffee)");
  for (AgentKind kind : {AgentKind::EPike, AgentKind::Pike}) {
    auto h = make_session(sc, "H", kind, fast());
    h->observe(mk_question("R", "H", phi));
    REQUIRE(h->pending_question().has_value());
    const auto reply = h->decide();
    REQUIRE(reply.has_value());
    CHECK(h->last_branch() == Branch::Answer);
    CHECK(reply->meta.kind == ActionKind::Explain);
    REQUIRE(reply->meta.answer_to.has_value());
    CHECK(*reply->meta.answer_to == phi);
    const Formula said = *reply->meta.formula;
    CHECK((said == answer_formula("H", phi, Answer::Yes) || said == answer_formula("H", phi, Answer::No) ||
           said == answer_formula("H", phi, Answer::Unsure)));
    h->observe(*reply);
    CHECK_FALSE(h->pending_question().has_value());
  }
  // The asker waits for the answer.
  auto r = make_session(sc, "R", AgentKind::EPike, fast());
  r->observe(mk_question("R", "H", phi));
  CHECK_FALSE(r->decide().has_value());
  CHECK(r->last_branch() == Branch::Blocked);
}

TEST_CASE("executor: explaining a failure the human caused") {
  const Scenario sc = fixture::breakfast("case3");
  Team team = make_team(sc, AgentKind::EPike, 1);
  AgentSession& r = *team.sessions["R"];
  const auto act = r.decide();
  CHECK(r.last_branch() == Branch::ExplainFailure);
  REQUIRE(act.has_value());
  CHECK(act->meta.kind == ActionKind::Explain);
}

TEST_CASE("executor: nothing to do once success is common belief") {
  const Scenario sc = fixture::breakfast("case1");
  auto r = make_session(sc, "R", AgentKind::EPike, fast());
  r->observe(mk_execution_action(*sc.lib, "e_juice"));
  r->observe(mk_execution_action(*sc.lib, "e_glass"));
  CHECK_FALSE(r->decide().has_value());
  CHECK(r->last_branch() == Branch::None);
}

TEST_CASE("executor: the baseline collapses its view and is surprised by contradictions") {
  const Scenario sc = fixture::breakfast("case1");
  auto pike = std::make_unique<PikeSession>(sc.lib, "R", sc.agent_state("R"), fast());
  CHECK(pike->state().model->size() == 1);
  pike->observe(mk_execution_action(*sc.lib, "e_mug"));
  CHECK_FALSE(pike->surprised());
  pike->observe(mk_execution_action(*sc.lib, "e_juice"));
  CHECK(pike->surprised());
  CHECK_FALSE(pike->decide().has_value());
  CHECK(pike->last_branch() == Branch::Surprised);

  // The full-model agent absorbs the same observation and explains.
  auto epike = make_session(sc, "R", AgentKind::EPike, fast());
  epike->observe(mk_execution_action(*sc.lib, "e_mug"));
  epike->observe(mk_execution_action(*sc.lib, "e_juice"));
  CHECK(evaluate(epike->state(), F("B[R](entailed(false))")));
}

TEST_CASE("executor property: the baseline only speaks to answer") {
  for (const auto& sc : scenarios()) {
    for (uint64_t seed = 1; seed <= 2; ++seed) {
      Team team = make_team(sc, AgentKind::Pike, seed);
      drive(sc, team, 12, [&](const std::string&, const PointedAction& act, Team&) {
        const bool answer = act.meta.answer_to.has_value();
        CHECK((act.meta.kind == ActionKind::Execute || act.meta.kind == ActionKind::Noop || answer));
      });
    }
  }
}

TEST_CASE("executor: candidate generation for the robot in the first case") {
  const Scenario sc = fixture::breakfast("case1");
  const PointedState view = local_perspective(sc.initial, "R");
  const std::set<ActionKind> kinds{ActionKind::Execute, ActionKind::Intent, ActionKind::Explain,
                                   ActionKind::Ask, ActionKind::Noop};
  const auto has = [&](ActionKind k, const std::string& payload) {
    for (const auto& a : candidate_actions(view, "R", kinds, *sc.lib)) {
      const ActionRecord r = to_record(a);
      if (a.meta.kind == k && r.payload == payload) return true;
    }
    return false;
  };
  CHECK(has(ActionKind::Execute, "e_mug"));
  CHECK(has(ActionKind::Execute, "e_glass"));
  CHECK_FALSE(has(ActionKind::Execute, "e_coffee"));
  CHECK(has(ActionKind::Intent, "drink=coffee"));
  CHECK(has(ActionKind::Intent, "drink=juice"));
  CHECK(has(ActionKind::Explain, "in(" + fixture::kC1 + ")"));
  CHECK_FALSE(has(ActionKind::Explain, "!in(" + fixture::kC1 + ")"));
  CHECK(has(ActionKind::Noop, ""));
}
