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

#include "epike/planlib.hpp"

#include <algorithm>

#include "epike/errors.hpp"
#include "epike/syntax.hpp"

namespace epike {

std::map<std::string, std::string> conjunction_literals(const Constraint& guard) {
  std::map<std::string, std::string> out;
  auto take = [&](const Constraint& lit) {
    if (lit.kind() == Constraint::Kind::Top) return;
    if (lit.kind() != Constraint::Kind::Assign) {
      throw InvalidLibrary("guard '" + to_string(guard) + "' is not a conjunction of assignments");
    }
    auto [it, fresh] = out.emplace(lit.variable(), lit.value());
    if (!fresh && it->second != lit.value()) {
      throw InvalidLibrary("guard '" + to_string(guard) + "' assigns '" + lit.variable() +
                           "' twice");
    }
  };
  if (guard.kind() == Constraint::Kind::And) {
    for (const auto& op : guard.operands()) take(op);
  } else {
    take(guard);
  }
  return out;
}

namespace {

bool literals_hold(const std::map<std::string, std::string>& guard,
                   const std::map<std::string, std::string>& partial) {
  for (const auto& [var, value] : guard) {
    auto it = partial.find(var);
    if (it == partial.end() || it->second != value) return false;
  }
  return true;
}

// Kahn's algorithm on the orderings whose guards hold under `partial`.
bool activated_graph_cyclic(int n, const std::vector<std::pair<int, int>>& edges,
                            const std::vector<std::map<std::string, std::string>>& guards,
                            const std::map<std::string, std::string>& partial) {
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (!literals_hold(guards[k], partial)) continue;
    out[edges[k].first].push_back(edges[k].second);
    ++indeg[edges[k].second];
  }
  std::vector<int> ready;
  for (int i = 0; i < n; ++i) {
    if (indeg[i] == 0) ready.push_back(i);
  }
  int removed = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++removed;
    for (int w : out[v]) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  return removed < n;
}

Constraint literals_to_constraint(const std::map<std::string, std::string>& lits,
                                  const std::vector<VariableDecl>& order) {
  std::vector<Constraint> ops;
  for (const auto& decl : order) {
    auto it = lits.find(decl.name);
    if (it != lits.end()) ops.push_back(Constraint::assign(decl.name, it->second));
  }
  return Constraint::conjunction(std::move(ops));
}

}  // namespace

PlanLibrary::PlanLibrary(std::vector<VariableDecl> variables, std::vector<TimePoint> timepoints,
                         std::vector<OrderingConstraint> orderings,
                         std::vector<std::string> agents, std::vector<Constraint> constraints)
    : variables_(std::move(variables)),
      timepoints_(std::move(timepoints)),
      orderings_(std::move(orderings)),
      agents_(std::move(agents)),
      constraints_(std::move(constraints)) {
  decision_vocab_ = std::make_shared<const Vocabulary>(variables_);
  std::vector<VariableDecl> all = variables_;
  for (std::size_t i = 0; i < timepoints_.size(); ++i) {
    const TimePoint& tp = timepoints_[i];
    if (decision_vocab_->index_of(tp.id) >= 0) {
      throw InvalidLibrary("time point '" + tp.id + "' clashes with a decision variable");
    }
    if (!tp_index_.emplace(tp.id, static_cast<int>(i)).second) {
      throw InvalidLibrary("duplicate time point '" + tp.id + "'");
    }
    if (std::find(agents_.begin(), agents_.end(), tp.owner) == agents_.end()) {
      throw InvalidLibrary("time point '" + tp.id + "' has unknown owner '" + tp.owner + "'");
    }
    validate_constraint(*decision_vocab_, tp.guard);
    conjunction_literals(tp.guard);
    all.push_back(VariableDecl::boolean(tp.id));
  }
  vocab_ = std::make_shared<const Vocabulary>(std::move(all));
  for (const auto& c : constraints_) validate_constraint(*decision_vocab_, c);

  incoming_.assign(timepoints_.size(), {});
  predecessors_.assign(timepoints_.size(), {});
  for (std::size_t k = 0; k < orderings_.size(); ++k) {
    const auto& o = orderings_[k];
    if (o.pred == o.succ) throw InvalidLibrary("ordering on '" + o.pred + "' relates it to itself");
    const int p = timepoint_index(o.pred);
    const int s = timepoint_index(o.succ);
    validate_constraint(*decision_vocab_, o.guard);
    conjunction_literals(o.guard);
    KnowledgeBase g(decision_vocab_, {o.guard});
    if (!g.entails(timepoints_[p].guard) || !g.entails(timepoints_[s].guard)) {
      throw InvalidLibrary("guard of ordering " + o.pred + " -> " + o.succ +
                           " must entail the guards of both time points");
    }
    incoming_[s].push_back(static_cast<int>(k));
    auto& preds = predecessors_[s];
    if (std::find(preds.begin(), preds.end(), p) == preds.end()) preds.push_back(p);
  }
  compute_nogoods();

  uint64_t h = vocab_->fingerprint();
  for (const auto& tp : timepoints_) {
    h = mix_hash(mix_hash(mix_hash(h, hash_string(tp.id)), tp.guard.hash()), hash_string(tp.owner));
  }
  for (const auto& o : orderings_) {
    h = mix_hash(mix_hash(mix_hash(h, hash_string(o.pred)), hash_string(o.succ)), o.guard.hash());
  }
  for (const auto& a : agents_) h = mix_hash(h, hash_string(a));
  for (const auto& c : constraints_) h = mix_hash(h, c.hash());
  fingerprint_ = h;
}

int PlanLibrary::timepoint_index(const std::string& id) const {
  auto it = tp_index_.find(id);
  if (it == tp_index_.end()) throw UnknownTimePoint(id);
  return it->second;
}

const TimePoint& PlanLibrary::timepoint(const std::string& id) const {
  return timepoints_[timepoint_index(id)];
}

Constraint PlanLibrary::executed(const std::string& tp) const {
  timepoint_index(tp);
  return Constraint::assign(tp, std::string(kTrue));
}

void PlanLibrary::compute_nogoods() {
  const int n = static_cast<int>(timepoints_.size());
  std::vector<std::pair<int, int>> edges;
  std::vector<std::map<std::string, std::string>> guards;
  std::set<std::string> guard_vars;
  for (const auto& o : orderings_) {
    edges.emplace_back(timepoint_index(o.pred), timepoint_index(o.succ));
    guards.push_back(conjunction_literals(o.guard));
    for (const auto& [var, value] : guards.back()) guard_vars.insert(var);
  }
  if (edges.empty()) return;

  std::vector<const VariableDecl*> vars;
  for (const auto& decl : variables_) {
    if (guard_vars.count(decl.name)) vars.push_back(&decl);
  }
  std::vector<std::map<std::string, std::string>> found;
  std::vector<std::size_t> digit(vars.size(), 0);
  while (true) {
    std::map<std::string, std::string> partial;
    for (std::size_t i = 0; i < vars.size(); ++i) partial[vars[i]->name] = vars[i]->domain[digit[i]];
    if (activated_graph_cyclic(n, edges, guards, partial)) {
      // Drop every literal whose removal keeps a cycle.
      for (const auto* decl : vars) {
        auto trial = partial;
        trial.erase(decl->name);
        if (activated_graph_cyclic(n, edges, guards, trial)) partial = std::move(trial);
      }
      if (std::find(found.begin(), found.end(), partial) == found.end()) found.push_back(partial);
    }
    std::size_t i = 0;
    while (i < vars.size() && ++digit[i] == vars[i]->domain.size()) digit[i++] = 0;
    if (i == vars.size()) break;
  }
  // Drop nogoods subsumed by a smaller one.
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < found.size() && !subsumed; ++j) {
      subsumed = found[j].size() < found[i].size() && literals_hold(found[j], found[i]);
    }
    if (!subsumed) nogoods_.push_back(literals_to_constraint(found[i], variables_));
  }
}

KnowledgeBase compile_initial_kb(const PlanLibrary& lib, const std::vector<Constraint>& extra) {
  std::vector<Constraint> cs = extra;
  for (const auto& c : lib.constraints()) cs.push_back(c);
  for (const auto& tp : lib.timepoints()) {
    cs.push_back(Constraint::implication(lib.executed(tp.id), tp.guard));
  }
  for (const auto& n : lib.nogoods()) cs.push_back(Constraint::negation(n));
  for (const auto& c : cs) validate_constraint(*lib.vocabulary(), c);
  return KnowledgeBase(lib.vocabulary(), std::move(cs));
}

PointedState compile_initial_state(const PointedState& s0, const LibraryPtr& lib) {
  const auto& m = *s0.model;
  std::vector<World> worlds;
  for (const auto& w : m.worlds()) {
    for (const auto& c : w.kb.constraints()) {
      std::set<std::string> names;
      c.collect_variables(names);
      for (const auto& name : names) {
        if (lib->decision_vocabulary()->index_of(name) < 0) {
          throw InvalidScenario("world '" + w.id + "' constrains '" + name +
                                "', which is not a decision variable");
        }
      }
    }
    worlds.push_back({w.id, compile_initial_kb(*lib, w.kb.constraints())});
  }
  std::vector<Relation> order;
  for (std::size_t a = 0; a < m.agents().size(); ++a) order.push_back(m.relation(static_cast<int>(a)));
  auto model = std::make_shared<const PlausibilityModel>(
      m.agents(), std::move(worlds), std::move(order), std::make_shared<PlanSuccessOracle>(lib));
  return {std::move(model), s0.designated};
}

Constraint execution_constraint(const PlanLibrary& lib, const std::string& tp,
                                const std::set<std::string>& executed) {
  const int e = lib.timepoint_index(tp);
  std::vector<Constraint> ops{lib.executed(tp)};
  for (int k : lib.incoming(e)) {
    const auto& o = lib.orderings()[k];
    if (!executed.count(o.pred)) ops.push_back(Constraint::negation(o.guard));
  }
  return Constraint::conjunction(std::move(ops));
}

KnowledgeBase record_execution(const KnowledgeBase& kb, const PlanLibrary& lib,
                               const std::string& tp, const std::set<std::string>& executed) {
  return kb.add(execution_constraint(lib, tp, executed));
}

std::set<std::string> executed_timepoints(const KnowledgeBase& kb, const PlanLibrary& lib) {
  std::set<std::string> out;
  for (const auto& tp : lib.timepoints()) {
    if (kb.entails(lib.executed(tp.id))) out.insert(tp.id);
  }
  return out;
}

bool success_holds(const KnowledgeBase& kb, const PlanLibrary& lib) {
  // A witness subplan exists iff kb stays consistent once every time point
  // not yet entailed executed is forced inactive.
  std::vector<Constraint> inactive;
  for (const auto& tp : lib.timepoints()) {
    if (!kb.entails(lib.executed(tp.id))) inactive.push_back(Constraint::negation(tp.guard));
  }
  return kb.sat(Constraint::conjunction(std::move(inactive)));
}

std::vector<std::vector<std::string>> feasible_subplans(const KnowledgeBase& kb,
                                                        const PlanLibrary& lib) {
  std::vector<std::string> names;
  for (const auto& decl : lib.variables()) names.push_back(decl.name);
  return enumerate_models(kb, names);
}

}  // namespace epike
