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


#include <random>

#include "doctest.h"
#include "epike/actions.hpp"
#include "epike/candidates.hpp"
#include "epike/errors.hpp"
#include "epike/executor.hpp"
#include "epike/harness.hpp"
#include "fixtures.hpp"

using namespace epike;
using fixture::C;
using fixture::F;

namespace {

const std::set<ActionKind> kAllKinds{ActionKind::Execute, ActionKind::Intent, ActionKind::Explain,
                                     ActionKind::Ask, ActionKind::Noop};

PointedAction bottom_action() {
  auto model = std::make_shared<ActionModel>();
  model->events.push_back({"e", Formula::bottom(), std::nullopt});
  model->order = {world_bit(0)};
  PointedAction act;
  act.model = model;
  act.designated = world_bit(0);
  act.meta.kind = ActionKind::Noop;
  act.meta.actor = "R";
  return act;
}

// Random public actions from the true world, each offered by the actor's
// own candidate generator and applicable at the true world.
template <typename Visit>
void random_walk(const Scenario& sc, uint64_t seed, int steps, Visit visit) {
  std::mt19937_64 rng(seed);
  PointedState s = sc.initial;
  const auto& agents = sc.lib->agents();
  for (int i = 0; i < steps; ++i) {
    const std::string& agent = agents[i % agents.size()];
    std::vector<PointedAction> options;
    for (auto& a : candidate_actions(local_perspective(s, agent), agent, kAllKinds, *sc.lib)) {
      if (applicable(s, a)) options.push_back(std::move(a));
    }
    if (options.empty()) return;
    const PointedAction& act = options[rng() % options.size()];
    const UpdateTrace next = product_update_traced(s, act);
    visit(s, act, next);
    s = next.state;
  }
}

std::vector<Scenario> walk_scenarios() {
  std::vector<Scenario> out{fixture::breakfast("case1"), fixture::breakfast("case2"),
                            fixture::breakfast("case3"), fixture::breakfast("ordering")};
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    RandomTaskParams p;
    p.num_variables = 3;
    p.diff = static_cast<int>(seed % 3);
    p.seed = seed;
    out.push_back(generate_random_task(p));
  }
  return out;
}

}  // namespace

TEST_CASE("actions: intent announcement adds the constraint to every world") {
  const Scenario sc = fixture::breakfast("case1");
  const PointedAction intent = mk_intent_announcement("R", C("drink=coffee"));
  CHECK(applicable(sc.initial, intent));
  const PointedState after = product_update(sc.initial, intent);
  REQUIRE(after.model->size() == 2);
  for (const auto& w : after.model->worlds()) CHECK(w.kb.contains(C("drink=coffee")));
  CHECK(feasible_subplans(after.model->worlds()[0].kb, *sc.lib) ==
        std::vector<std::vector<std::string>>{{"mug", "coffee"}});
  CHECK_FALSE(applicable(sc.initial, mk_intent_announcement("R", C("(container=mug & drink=juice)"))));
  // The human can no longer fetch juice once coffee is announced.
  const PointedAction juice = mk_execution_action(*sc.lib, "e_juice");
  CHECK_FALSE(applicable(local_perspective(after, "H"), juice));
}

TEST_CASE("actions: explanation of the task constraint removes the human's world") {
  const Scenario sc = fixture::breakfast("case1");
  const PointedAction expl = mk_explanation("R", F("in(" + fixture::kC1 + ")"));
  const PointedState after = product_update(sc.initial, expl);
  CHECK(designated_ids(PointedState{after.model, after.model->all()}) == std::vector<std::string>{"w1"});
  CHECK(evaluate(after, F("B[H](in(" + fixture::kC1 + "))")));
  CHECK_FALSE(applicable(sc.initial, mk_explanation("R", F("!in(" + fixture::kC1 + ")"))));
  CHECK_THROWS_AS(product_update(sc.initial, mk_explanation("R", F("!in(" + fixture::kC1 + ")"))),
                  InapplicableAction);
}

TEST_CASE("actions: execution templates") {
  const Scenario plain = fixture::breakfast("case1");
  const PointedAction mug = mk_execution_action(*plain.lib, "e_mug");
  REQUIRE(mug.model->events.size() == 1);
  CHECK(mug.model->events[0].pre == F("B[R](sat(e_mug=T))"));
  CHECK(*mug.model->events[0].post == C("e_mug=T"));
  CHECK_THROWS_AS(mk_execution_action(*plain.lib, "e_toast"), UnknownTimePoint);

  const Scenario ordered = fixture::breakfast("ordering");
  const PointedAction coffee = mk_execution_action(*ordered.lib, "e_coffee");
  CHECK(coffee.model->events.size() == 4);
  CHECK(world_count(coffee.designated) == 4);
  const PointedState after = product_update(ordered.initial, coffee);
  const auto& kb = after.model->worlds()[after.model->world_index(designated_ids(after)[0])].kb;
  CHECK_FALSE(kb.consistent());
}

TEST_CASE("actions: applicability follows each agent's perspective") {
  const Scenario sc = fixture::breakfast("case1");
  const PointedState s = product_update(sc.initial, mk_execution_action(*sc.lib, "e_mug"));
  const PointedAction juice = mk_execution_action(*sc.lib, "e_juice");
  CHECK(applicable(local_perspective(s, "H"), juice));
  // The precondition is the human's belief, which the robot's view keeps;
  // the robot itself no longer thinks juice is possible.
  CHECK(applicable(local_perspective(s, "R"), juice));
  CHECK_FALSE(evaluate(local_perspective(s, "R"), F("B[R](sat(e_juice=T))")));
  CHECK_FALSE(applicable(PikeSession::collapse(s, "R"), juice));
  CHECK_FALSE(applicable(sc.initial, bottom_action()));
}

TEST_CASE("actions: question and truthful answer settle the intent") {
  const Scenario sc = fixture::breakfast("case2");
  const Formula phi = F("in(drink=coffee)");
  PointedState s = product_update(sc.initial, mk_question("R", "H", phi));
  const Answer answer = truthful_answer(local_perspective(s, "H"), "H", phi);
  s = product_update(s, mk_answer("H", phi, answer));
  CHECK(evaluate(s, Formula::disjunction({F("B[R](B[H](in(drink=coffee)))"),
                                          F("B[R](B[H](in(drink=juice)))")})));
  CHECK_THROWS_AS(mk_question("R", "R", phi), Error);
}

TEST_CASE("actions: restricted grammar for explanations and questions") {
  CHECK_NOTHROW(mk_explanation("R", F("B[H](!in(drink=coffee))")));
  CHECK_THROWS_AS(mk_explanation("R", F("entailed(drink=coffee)")), RestrictedFormulaError);
  CHECK_THROWS_AS(mk_explanation("R", F("(in(drink=coffee) & in(container=mug))")),
                  RestrictedFormulaError);
  CHECK_THROWS_AS(mk_question("R", "H", F("sat(drink=coffee)")), RestrictedFormulaError);
}

TEST_CASE("actions: identity and settled updates preserve the battery") {
  const auto battery = fixture::breakfast_battery();
  for (const char* name : {"case1", "case2", "case3"}) {
    const Scenario sc = fixture::breakfast(name);
    const auto before = fixture::truth(sc.initial, battery);
    CHECK(fixture::truth(product_update(sc.initial, mk_noop("R")), battery) == before);
  }
  // Every world of the second case holds the task constraint.
  const Scenario sc = fixture::breakfast("case2");
  const Formula settled = F("in(" + fixture::kC1 + ")");
  const auto before = fixture::truth(sc.initial, battery);
  CHECK(fixture::truth(product_update(sc.initial, mk_explanation("R", settled)), battery) == before);
  CHECK(fixture::truth(product_update(sc.initial, mk_question("R", "H", settled)), battery) == before);
}

TEST_CASE("actions: wire records round-trip") {
  for (const auto& sc : walk_scenarios()) {
    for (const auto& agent : sc.lib->agents()) {
      const PointedState view = local_perspective(sc.initial, agent);
      for (const auto& act : candidate_actions(view, agent, kAllKinds, *sc.lib)) {
        const ActionRecord rec = to_record(act);
        const PointedAction back = from_record(rec, *sc.lib);
        CHECK(to_record(back) == rec);
        CHECK(same_action(back, act));
      }
    }
  }
}

TEST_CASE("actions property: updates stay valid and traceable") {
  int executions = 0;
  for (const auto& sc : walk_scenarios()) {
    for (uint64_t seed = 0; seed < 6; ++seed) {
      random_walk(sc, seed, 6, [&](const PointedState& s, const PointedAction& act, const UpdateTrace& next) {
        CHECK(validate_model(*next.state.model).empty());
        REQUIRE(next.origin.size() == static_cast<std::size_t>(next.state.model->size()));
        for (const auto& [parent, event] : next.origin) {
          const PointedState at{s.model, world_bit(parent)};
          CHECK(evaluate(at, act.model->events[event].pre));
        }
        if (act.meta.kind == ActionKind::Execute) {
          ++executions;
          CHECK(next.state.model->size() <= s.model->size());
        }
      });
    }
  }
  CHECK(executions > 0);
}
