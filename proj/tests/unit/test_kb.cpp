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


#include <algorithm>

#include "doctest.h"
#include "epike/errors.hpp"
#include "epike/kb.hpp"
#include "epike/planlib.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace epike;
using fixture::C;

namespace {

std::vector<VariableDecl> small_vars() {
  return {{"x", {"a", "b"}}, {"y", {"a", "b", "c"}}, {"z", {"a", "b"}}, VariableDecl::boolean("t")};
}

std::vector<Constraint> random_constraints(oracle::Rng& rng, const std::vector<VariableDecl>& vars,
                                           int max_count) {
  std::vector<Constraint> out;
  const int n = static_cast<int>(rng.below(max_count + 1));
  for (int i = 0; i < n; ++i) out.push_back(oracle::random_constraint(rng, vars, 3));
  return out;
}

const KnowledgeBase& world_kb(const Scenario& sc, const std::string& id) {
  const auto& m = *sc.initial.model;
  return m.worlds()[m.world_index(id)].kb;
}

}  // namespace

TEST_CASE("kb: add is idempotent and remove inverts it") {
  auto vocab = std::make_shared<const Vocabulary>(small_vars());
  const KnowledgeBase kb(vocab, {C("x=a")});
  const Constraint c = C("(y=b | z=a)");
  CHECK(kb.add(c).add(c).constraints() == kb.add(c).constraints());
  CHECK(kb.add(c).remove(c).fingerprint() == kb.fingerprint());
  CHECK(kb.remove(c).fingerprint() == kb.fingerprint());
  CHECK_FALSE(KnowledgeBase(vocab).add(Constraint::bottom()).consistent());
  CHECK(KnowledgeBase(vocab).consistent());
}

TEST_CASE("kb: malformed constraints are rejected") {
  auto vocab = std::make_shared<const Vocabulary>(small_vars());
  const KnowledgeBase kb(vocab);
  CHECK_THROWS_AS(kb.add(C("w=a")), MalformedConstraint);
  CHECK_THROWS_AS(kb.add(C("x=q")), MalformedConstraint);
  CHECK_THROWS_AS(kb.entails(C("y=zz")), MalformedConstraint);
}

TEST_CASE("kb: breakfast knowledge bases") {
  const Scenario sc = fixture::breakfast("case1");
  const Constraint c1 = C(fixture::kC1);
  const KnowledgeBase& w1 = world_kb(sc, "w1");
  const KnowledgeBase& w2 = world_kb(sc, "w2");
  CHECK(w1.contains(c1));
  CHECK_FALSE(w2.contains(c1));
  CHECK(w1.consistent());
  CHECK_FALSE(w1.sat(C("(container=mug & drink=juice)")));
  CHECK_FALSE(w1.entails(C("(container=mug & drink=coffee)")));
  CHECK(w1.remove(c1).sat(C("(container=mug & drink=juice)")));

  const KnowledgeBase after = record_execution(w1, *sc.lib, "e_mug", {});
  CHECK(after.entails(C("container=mug")));
  CHECK(after.entails(C("drink=coffee")));
  CHECK_FALSE(after.sat(C("e_juice=T")));

  auto models = enumerate_models(w1, {"container", "drink"});
  std::sort(models.begin(), models.end());
  CHECK(models == std::vector<std::vector<std::string>>{{"glass", "juice"}, {"mug", "coffee"}});
  CHECK(enumerate_models(w1.add(Constraint::bottom()), {"container"}).empty());
}

TEST_CASE("kb: coffee before the container is inconsistent under the ordering variant") {
  const Scenario sc = fixture::breakfast("ordering");
  const KnowledgeBase kb = record_execution(world_kb(sc, "w1"), *sc.lib, "e_coffee", {});
  CHECK_FALSE(kb.consistent());
  CHECK(kb.entails(C("container=mug")));  // ex falso
}

TEST_CASE("kb: enumeration over an empty knowledge base") {
  auto vocab = std::make_shared<const Vocabulary>(small_vars());
  CHECK(enumerate_models(KnowledgeBase(vocab), {"y"}).size() == 3);
  CHECK(KnowledgeBase(vocab).sat(C("y=c")));
}

TEST_CASE("kb property: duality, membership and monotonicity") {
  oracle::Rng rng(11);
  const auto vars = small_vars();
  auto vocab = std::make_shared<const Vocabulary>(vars);
  for (int i = 0; i < 300; ++i) {
    const KnowledgeBase kb(vocab, random_constraints(rng, vars, 6));
    const Constraint c = oracle::random_constraint(rng, vars, 3);
    const Constraint extra = oracle::random_constraint(rng, vars, 3);
    CHECK(kb.sat(c) == !kb.entails(Constraint::negation(c)));
    CHECK(kb.add(c).entails(c));
    if (kb.entails(c)) CHECK(kb.add(extra).entails(c));
    for (const auto& member : kb.constraints()) CHECK(kb.entails(member));
  }
}

TEST_CASE("kb property: agrees with truth-table enumeration") {
  oracle::Rng rng(12);
  const auto vars = small_vars();
  auto vocab = std::make_shared<const Vocabulary>(vars);
  EnumerationSolver enumeration;
  BacktrackingSolver backtracking;
  for (int i = 0; i < 400; ++i) {
    const auto cs = random_constraints(rng, vars, 6);
    const KnowledgeBase kb(vocab, cs);
    const Constraint q = oracle::random_constraint(rng, vars, 3);
    auto with_q = cs;
    with_q.push_back(q);
    const bool want_sat = oracle::satisfiable(vars, with_q);
    CHECK(kb.sat(q) == want_sat);
    CHECK(kb.entails(q) == oracle::entails(vars, cs, q));
    CHECK(kb.consistent() == oracle::satisfiable(vars, cs));
    CHECK(enumeration.satisfiable(*vocab, with_q) == want_sat);
    CHECK(backtracking.satisfiable(*vocab, with_q) == want_sat);
  }
}

TEST_CASE("kb property: insertion order never changes a query") {
  oracle::Rng rng(13);
  const auto vars = small_vars();
  auto vocab = std::make_shared<const Vocabulary>(vars);
  for (int i = 0; i < 200; ++i) {
    auto cs = random_constraints(rng, vars, 6);
    const KnowledgeBase a(vocab, cs);
    std::shuffle(cs.begin(), cs.end(), rng.gen);
    KnowledgeBase b(vocab);
    for (const auto& c : cs) b = b.add(c);
    const Constraint q = oracle::random_constraint(rng, vars, 3);
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.sat(q) == b.sat(q));
    CHECK(a.entails(q) == b.entails(q));
    CHECK(enumerate_models(a, {"x", "y"}) == enumerate_models(b, {"x", "y"}));
  }
}

TEST_CASE("kb: incremental solver push and pop") {
  auto vocab = std::make_shared<const Vocabulary>(small_vars());
  BacktrackingSolver s;
  s.reset(vocab);
  s.add(C("(x=a | y=b)"));
  CHECK(s.check());
  s.push();
  s.add(C("!(x=a)"));
  s.add(C("!(y=b)"));
  CHECK_FALSE(s.check());
  s.pop();
  CHECK(s.check());
}
