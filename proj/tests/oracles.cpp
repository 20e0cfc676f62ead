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

#include "oracles.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace oracle {

using epike::Constraint;
using epike::Formula;

std::vector<Assignment> all_assignments(const std::vector<epike::VariableDecl>& vars) {
  std::vector<Assignment> out{Assignment{}};
  for (const auto& v : vars) {
    std::vector<Assignment> next;
    for (const auto& partial : out) {
      for (const auto& val : v.domain) {
        Assignment a = partial;
        a[v.name] = val;
        next.push_back(std::move(a));
      }
    }
    out = std::move(next);
  }
  return out;
}

bool holds(const Constraint& c, const Assignment& a) {
  switch (c.kind()) {
    case Constraint::Kind::Top: return true;
    case Constraint::Kind::Bottom: return false;
    case Constraint::Kind::Assign: {
      auto it = a.find(c.variable());
      return it != a.end() && it->second == c.value();
    }
    case Constraint::Kind::Not: return !holds(c.operands()[0], a);
    case Constraint::Kind::And:
      for (const auto& op : c.operands()) {
        if (!holds(op, a)) return false;
      }
      return true;
    case Constraint::Kind::Or:
      for (const auto& op : c.operands()) {
        if (holds(op, a)) return true;
      }
      return false;
  }
  return false;
}

namespace {

bool all_hold(const std::vector<Constraint>& kb, const Assignment& a) {
  for (const auto& c : kb) {
    if (!holds(c, a)) return false;
  }
  return true;
}

}  // namespace

bool satisfiable(const std::vector<epike::VariableDecl>& vars, const std::vector<Constraint>& kb) {
  for (const auto& a : all_assignments(vars)) {
    if (all_hold(kb, a)) return true;
  }
  return false;
}

bool entails(const std::vector<epike::VariableDecl>& vars, const std::vector<Constraint>& kb,
             const Constraint& c) {
  for (const auto& a : all_assignments(vars)) {
    if (all_hold(kb, a) && !holds(c, a)) return false;
  }
  return true;
}

std::vector<int> component(const Model& m, int agent, int w) {
  const int n = static_cast<int>(m.kbs.size());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{w};
  seen[w] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && (m.leq[agent][u][v] || m.leq[agent][v][u])) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  std::vector<int> out;
  for (int v = 0; v < n; ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

std::vector<int> minimal(const Model& m, int agent, const std::vector<int>& set) {
  std::vector<int> out;
  for (int w : set) {
    bool beaten = false;
    for (int v : set) {
      if (m.leq[agent][v][w] && !m.leq[agent][w][v]) beaten = true;
    }
    if (!beaten) out.push_back(w);
  }
  return out;
}

bool eval(const Model& m, int w, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::In:
      return std::find(m.kbs[w].begin(), m.kbs[w].end(), f.constraint()) != m.kbs[w].end();
    case Formula::Kind::Entailed:
      return entails(m.vars, m.kbs[w], f.constraint());
    case Formula::Kind::Not:
      return !eval(m, w, f.operands()[0]);
    case Formula::Kind::And:
      for (const auto& op : f.operands()) {
        if (!eval(m, w, op)) return false;
      }
      return true;
    case Formula::Kind::Belief: {
      const int a = static_cast<int>(std::find(m.agents.begin(), m.agents.end(), f.agent()) -
                                     m.agents.begin());
      std::vector<int> cond;
      for (int v : component(m, a, w)) {
        if (eval(m, v, f.condition())) cond.push_back(v);
      }
      for (int v : minimal(m, a, cond)) {
        if (!eval(m, v, f.body())) return false;
      }
      return true;
    }
    case Formula::Kind::Success:
      throw std::logic_error("the explicit oracle has no plan library");
  }
  return false;
}

epike::PointedState to_engine(const Model& m, const std::vector<int>& designated) {
  auto vocab = std::make_shared<const epike::Vocabulary>(m.vars);
  std::vector<epike::World> worlds;
  for (std::size_t i = 0; i < m.kbs.size(); ++i) {
    worlds.push_back({"w" + std::to_string(i), epike::KnowledgeBase(vocab, m.kbs[i])});
  }
  std::vector<epike::Relation> order;
  for (std::size_t a = 0; a < m.agents.size(); ++a) {
    epike::Relation rel(m.kbs.size(), 0);
    for (std::size_t i = 0; i < m.kbs.size(); ++i) {
      for (std::size_t j = 0; j < m.kbs.size(); ++j) {
        if (m.leq[a][i][j]) rel[i] |= epike::world_bit(static_cast<int>(j));
      }
    }
    order.push_back(std::move(rel));
  }
  auto model = std::make_shared<const epike::PlausibilityModel>(m.agents, std::move(worlds),
                                                                std::move(order));
  epike::WorldSet d = 0;
  for (int w : designated) d |= epike::world_bit(w);
  return {std::move(model), d};
}

Constraint random_constraint(Rng& rng, const std::vector<epike::VariableDecl>& vars, int depth) {
  if (depth <= 0 || rng.coin(45)) {
    const auto& v = vars[rng.below(vars.size())];
    return Constraint::assign(v.name, v.domain[rng.below(v.domain.size())]);
  }
  switch (rng.below(3)) {
    case 0: return Constraint::negation(random_constraint(rng, vars, depth - 1));
    case 1:
      return Constraint::conjunction(
          {random_constraint(rng, vars, depth - 1), random_constraint(rng, vars, depth - 1)});
    default:
      return Constraint::disjunction(
          {random_constraint(rng, vars, depth - 1), random_constraint(rng, vars, depth - 1)});
  }
}

Model random_model(Rng& rng, int max_worlds) {
  Model m;
  m.vars = {{"x", {"a", "b"}}, {"y", {"a", "b", "c"}}};
  m.agents = {"a", "b"};
  const int n = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(max_worlds)));
  std::vector<Constraint> pool;
  for (int i = 0; i < 4; ++i) pool.push_back(random_constraint(rng, m.vars, 2));
  for (int w = 0; w < n; ++w) {
    std::vector<Constraint> kb;
    for (const auto& c : pool) {
      if (rng.coin(40)) kb.push_back(c);
    }
    m.kbs.push_back(std::move(kb));
  }
  for (std::size_t a = 0; a < m.agents.size(); ++a) {
    std::vector<int> comp(n), rank(n);
    for (int w = 0; w < n; ++w) {
      comp[w] = static_cast<int>(rng.below(2));
      rank[w] = static_cast<int>(rng.below(3));
    }
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) rel[i][j] = comp[i] == comp[j] && rank[i] <= rank[j];
    }
    m.leq.push_back(std::move(rel));
  }
  return m;
}

Formula random_formula(Rng& rng, const Model& m, int max_depth) {
  const std::size_t choice = rng.below(max_depth > 0 ? 7 : 4);
  switch (choice) {
    case 0: {
      // Prefer constraints that actually occur so membership is non-trivial.
      const auto& kb = m.kbs[rng.below(m.kbs.size())];
      if (!kb.empty() && rng.coin(70)) return Formula::in(kb[rng.below(kb.size())]);
      return Formula::in(random_constraint(rng, m.vars, 1));
    }
    case 1: return Formula::entailed(random_constraint(rng, m.vars, 2));
    case 2: return Formula::negation(random_formula(rng, m, max_depth));
    case 3:
      return Formula::conjunction({random_formula(rng, m, max_depth), random_formula(rng, m, max_depth)});
    case 4:
    case 5:
      return Formula::belief(m.agents[rng.below(m.agents.size())], random_formula(rng, m, max_depth - 1));
    default:
      return Formula::conditional_belief(m.agents[rng.below(m.agents.size())],
                                         random_formula(rng, m, max_depth - 1),
                                         random_formula(rng, m, max_depth - 1));
  }
}

LibrarySample random_library(Rng& rng, int max_vars, int max_tps, int max_orders) {
  std::vector<epike::VariableDecl> vars;
  const int nv = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(max_vars)));
  for (int i = 0; i < nv; ++i) {
    epike::VariableDecl v{"v" + std::to_string(i), {}};
    const int d = 2 + static_cast<int>(rng.below(2));
    for (int k = 0; k < d; ++k) v.domain.push_back("d" + std::to_string(k));
    vars.push_back(std::move(v));
  }
  const std::vector<std::string> agents{"A", "B"};
  auto random_guard = [&](int max_literals) {
    std::map<std::string, std::string> lits;
    const int k = static_cast<int>(rng.below(static_cast<std::size_t>(max_literals) + 1));
    for (int i = 0; i < k; ++i) {
      const auto& v = vars[rng.below(vars.size())];
      lits[v.name] = v.domain[rng.below(v.domain.size())];
    }
    return lits;
  };
  auto guard_of = [](const std::map<std::string, std::string>& lits) {
    std::vector<Constraint> ops;
    for (const auto& [var, val] : lits) ops.push_back(Constraint::assign(var, val));
    return Constraint::conjunction(std::move(ops));
  };
  std::vector<epike::TimePoint> tps;
  std::vector<std::map<std::string, std::string>> tp_lits;
  const int nt = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(max_tps)));
  for (int i = 0; i < nt; ++i) {
    tp_lits.push_back(random_guard(2));
    tps.push_back({"e" + std::to_string(i), guard_of(tp_lits.back()), agents[i % 2]});
  }
  std::vector<epike::OrderingConstraint> ords;
  const int no = static_cast<int>(rng.below(static_cast<std::size_t>(max_orders) + 1));
  for (int k = 0, tries = 0; k < no && tries < 50; ++tries) {
    const int p = static_cast<int>(rng.below(tps.size()));
    const int s = static_cast<int>(rng.below(tps.size()));
    if (p == s) continue;
    auto lits = tp_lits[p];
    bool clash = false;
    for (const auto& [var, val] : tp_lits[s]) {
      auto it = lits.find(var);
      if (it != lits.end() && it->second != val) clash = true;
      lits[var] = val;
    }
    if (clash) continue;
    if (rng.coin(30)) {
      const auto& v = vars[rng.below(vars.size())];
      if (!lits.count(v.name)) lits[v.name] = v.domain[rng.below(v.domain.size())];
    }
    ords.push_back({tps[p].id, tps[s].id, guard_of(lits)});
    ++k;
  }
  std::vector<Constraint> cs;
  const int nc = static_cast<int>(rng.below(3));
  for (int i = 0; i < nc; ++i) cs.push_back(random_constraint(rng, vars, 2));

  LibrarySample out;
  out.lib = std::make_shared<const epike::PlanLibrary>(vars, tps, ords, agents, cs);
  std::vector<std::string> ids;
  for (const auto& t : tps) ids.push_back(t.id);
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);
  ids.resize(rng.below(ids.size() + 1));
  out.prefix = ids;
  return out;
}

bool compatible(const epike::PlanLibrary& lib, const Assignment& g,
                const std::vector<std::string>& history) {
  for (const auto& c : lib.constraints()) {
    if (!holds(c, g)) return false;
  }
  std::vector<std::string> active;
  for (const auto& t : lib.timepoints()) {
    if (holds(t.guard, g)) active.push_back(t.id);
  }
  for (const auto& h : history) {
    if (std::find(active.begin(), active.end(), h) == active.end()) return false;
  }
  std::vector<std::string> rest;
  for (const auto& t : active) {
    if (std::find(history.begin(), history.end(), t) == history.end()) rest.push_back(t);
  }
  std::sort(rest.begin(), rest.end());
  do {
    std::vector<std::string> order = history;
    order.insert(order.end(), rest.begin(), rest.end());
    bool ok = true;
    for (const auto& o : lib.orderings()) {
      if (!holds(o.guard, g)) continue;
      const auto p = std::find(order.begin(), order.end(), o.pred);
      const auto s = std::find(order.begin(), order.end(), o.succ);
      if (p == order.end() || s == order.end() || p > s) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return false;
}

bool consistent_after(const epike::PlanLibrary& lib, const std::vector<std::string>& history) {
  for (const auto& g : all_assignments(lib.variables())) {
    if (compatible(lib, g, history)) return true;
  }
  return false;
}

bool succeeded_after(const epike::PlanLibrary& lib, const std::vector<std::string>& history) {
  for (const auto& g : all_assignments(lib.variables())) {
    if (!compatible(lib, g, history)) continue;
    bool all_done = true;
    for (const auto& t : lib.timepoints()) {
      if (holds(t.guard, g) &&
          std::find(history.begin(), history.end(), t.id) == history.end()) {
        all_done = false;
      }
    }
    if (all_done) return true;
  }
  return false;
}

}  // namespace oracle
