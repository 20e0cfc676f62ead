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

#include "epike/candidates.hpp"

#include <unordered_set>

namespace epike {

std::vector<Constraint> discrepancy_pool(const PlausibilityModel& m) {
  std::vector<Constraint> out;
  std::unordered_set<Constraint, ConstraintHash> seen;
  for (const auto& w : m.worlds()) {
    for (const auto& c : w.kb.constraints()) {
      if (!seen.insert(c).second) continue;
      for (const auto& v : m.worlds()) {
        if (!v.kb.contains(c)) {
          out.push_back(c);
          break;
        }
      }
    }
  }
  return out;
}

Constraint execution_post(const KnowledgeBase& kb, const PlanLibrary& lib, const std::string& tp) {
  std::set<std::string> done;
  for (int p : lib.predecessors(lib.timepoint_index(tp))) {
    const std::string& pid = lib.timepoints()[p].id;
    if (kb.entails(lib.executed(pid))) done.insert(pid);
  }
  return execution_constraint(lib, tp, done);
}

std::vector<std::string> believed_feasible_executions(const PointedState& s,
                                                      const std::string& agent,
                                                      const PlanLibrary& lib) {
  const PointedState persp = local_perspective(s, agent);
  const auto& worlds = persp.model->worlds();
  const std::vector<int> idx = world_indices(persp.designated);
  std::vector<std::string> out;
  for (const auto& tp : lib.timepoints()) {
    if (tp.owner != agent) continue;
    const Constraint done = lib.executed(tp.id);
    bool ok = true;
    for (int w : idx) {
      const KnowledgeBase& kb = worlds[w].kb;
      if (kb.entails(done) || !kb.sat(execution_post(kb, lib, tp.id))) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(tp.id);
  }
  return out;
}

namespace {

std::vector<Formula> literal_family(const std::vector<Constraint>& pool,
                                    const std::vector<std::string>& others, int depth) {
  std::vector<Formula> layer;
  for (const auto& c : pool) {
    layer.push_back(Formula::in(c));
    layer.push_back(Formula::negation(Formula::in(c)));
  }
  std::vector<Formula> out = layer;
  for (int d = 0; d < depth; ++d) {
    std::vector<Formula> next;
    for (const auto& b : others) {
      for (const auto& f : layer) next.push_back(Formula::belief(b, f));
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<PointedAction> candidate_actions(const PointedState& persp, const std::string& agent,
                                             const std::set<ActionKind>& kinds,
                                             const PlanLibrary& lib,
                                             const CandidateOptions& opts) {
  std::vector<PointedAction> out;
  const auto& agents = persp.model->agents();

  if (kinds.count(ActionKind::Execute)) {
    for (const auto& tp : lib.timepoints()) {
      if (tp.owner != agent) continue;
      if (evaluate(persp, Formula::entailed(lib.executed(tp.id)))) continue;
      PointedAction act = mk_execution_action(lib, tp.id);
      if (applicable(persp, act)) out.push_back(std::move(act));
    }
  }
  if (kinds.count(ActionKind::Noop)) out.push_back(mk_noop(agent));

  if (kinds.count(ActionKind::Intent)) {
    for (const auto& decl : lib.variables()) {
      for (const auto& value : decl.domain) {
        Constraint c = Constraint::assign(decl.name, value);
        if (evaluate(persp, Formula::belief(agent, Formula::sat(c))) &&
            !evaluate(persp, Formula::belief(agent, Formula::entailed(c)))) {
          out.push_back(mk_intent_announcement(agent, c));
        }
      }
    }
  }

  const bool explain = kinds.count(ActionKind::Explain) > 0;
  const bool ask = kinds.count(ActionKind::Ask) > 0;
  if (!explain && !ask) return out;

  std::vector<std::string> others;
  for (const auto& b : agents) {
    if (b != agent) others.push_back(b);
  }
  const std::vector<Constraint> pool = discrepancy_pool(*persp.model);

  if (explain) {
    for (const auto& phi : literal_family(pool, others, opts.explanation_depth)) {
      if (!evaluate(persp, Formula::belief(agent, phi))) continue;
      std::vector<Formula> everyone;
      for (const auto& b : agents) everyone.push_back(Formula::belief(b, phi));
      if (evaluate(persp, Formula::belief(agent, Formula::conjunction(std::move(everyone))))) continue;
      out.push_back(mk_explanation(agent, phi));
    }
  }
  if (ask) {
    for (const auto& b : others) {
      for (const auto& c : pool) {
        const Formula phi = Formula::in(c);
        if (evaluate(persp, Formula::belief(agent, phi)) ||
            evaluate(persp, Formula::belief(agent, Formula::negation(phi)))) {
          continue;
        }
        out.push_back(mk_question(agent, b, phi));
      }
    }
  }
  return out;
}

}  // namespace epike
