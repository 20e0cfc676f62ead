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

#include "epike/actions.hpp"

#include <algorithm>

#include "epike/errors.hpp"
#include "epike/syntax.hpp"

namespace epike {

const char* kind_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::Execute: return "execute";
    case ActionKind::Intent: return "intent";
    case ActionKind::Explain: return "explain";
    case ActionKind::Ask: return "ask";
    case ActionKind::Noop: return "noop";
  }
  return "noop";
}

ActionKind parse_kind(const std::string& name) {
  if (name == "execute") return ActionKind::Execute;
  if (name == "intent") return ActionKind::Intent;
  if (name == "explain") return ActionKind::Explain;
  if (name == "ask") return ActionKind::Ask;
  if (name == "noop") return ActionKind::Noop;
  throw ParseError("unknown action kind '" + name + "'");
}

const Relation& ActionModel::relation_for(const std::string& agent) const {
  auto it = overrides.find(agent);
  return it == overrides.end() ? order : it->second;
}

namespace {

Relation identity_relation(int n) {
  Relation r(n, 0);
  for (int i = 0; i < n; ++i) r[i] = world_bit(i);
  return r;
}

Relation total_relation(int n) {
  const WorldSet all = n == kMaxWorlds ? ~WorldSet{0} : world_bit(n) - 1;
  return Relation(n, all);
}

PointedAction single_event(ActionMeta meta, Formula pre, std::optional<Constraint> post) {
  auto model = std::make_shared<ActionModel>();
  model->events.push_back({"e", std::move(pre), std::move(post)});
  model->order = identity_relation(1);
  return {std::move(model), world_bit(0), std::move(meta)};
}

}  // namespace

ActionRecord to_record(const PointedAction& act) {
  const ActionMeta& m = act.meta;
  ActionRecord rec{kind_name(m.kind), m.actor, "", "", ""};
  switch (m.kind) {
    case ActionKind::Execute: rec.payload = m.timepoint; break;
    case ActionKind::Intent: rec.payload = to_string(*m.constraint); break;
    case ActionKind::Explain:
    case ActionKind::Ask: rec.payload = to_string(*m.formula); break;
    case ActionKind::Noop: break;
  }
  if (m.kind == ActionKind::Ask) rec.askee = m.askee;
  if (m.answer_to) rec.answer_to = to_string(*m.answer_to);
  return rec;
}

PointedAction from_record(const ActionRecord& rec, const PlanLibrary& lib) {
  const ActionKind kind = parse_kind(rec.kind);
  if (std::find(lib.agents().begin(), lib.agents().end(), rec.actor) == lib.agents().end()) {
    throw UnknownAgent(rec.actor);
  }
  switch (kind) {
    case ActionKind::Execute: {
      PointedAction act = mk_execution_action(lib, rec.payload);
      if (act.meta.actor != rec.actor) {
        throw InvalidScenario("time point '" + rec.payload + "' is not owned by '" + rec.actor + "'");
      }
      return act;
    }
    case ActionKind::Intent: {
      Constraint c = parse_constraint(rec.payload);
      validate_constraint(*lib.vocabulary(), c);
      return mk_intent_announcement(rec.actor, c);
    }
    case ActionKind::Explain: {
      Formula phi = parse_formula(rec.payload);
      if (!rec.answer_to.empty()) {
        Formula question = parse_formula(rec.answer_to);
        for (Answer a : {Answer::Yes, Answer::No, Answer::Unsure}) {
          if (answer_formula(rec.actor, question, a) == phi) return mk_answer(rec.actor, question, a);
        }
        throw MalformedFormula("'" + rec.payload + "' does not answer '" + rec.answer_to + "'");
      }
      return mk_explanation(rec.actor, phi);
    }
    case ActionKind::Ask:
      return mk_question(rec.actor, rec.askee, parse_formula(rec.payload));
    case ActionKind::Noop:
      return mk_noop(rec.actor);
  }
  return mk_noop(rec.actor);
}

std::string describe(const PointedAction& act) {
  ActionRecord rec = to_record(act);
  std::string out = rec.actor + " " + rec.kind;
  if (!rec.payload.empty()) out += " " + rec.payload;
  if (!rec.askee.empty()) out += " to " + rec.askee;
  if (!rec.answer_to.empty()) out += " answering " + rec.answer_to;
  return out;
}

bool same_action(const PointedAction& a, const PointedAction& b) {
  return to_record(a) == to_record(b);
}

bool applicable(const PointedState& s, const PointedAction& act) {
  WorldSet covered = 0;
  const auto& events = act.model->events;
  for (int e : world_indices(act.designated)) {
    covered |= s.model->denotation(events[e].pre);
  }
  return (s.designated & ~covered) == 0;
}

UpdateTrace product_update_traced(const PointedState& s, const PointedAction& act) {
  const PlausibilityModel& m = *s.model;
  const ActionModel& am = *act.model;
  const int n = m.size();
  const int ne = static_cast<int>(am.events.size());

  std::vector<WorldSet> den(ne);
  for (int e = 0; e < ne; ++e) den[e] = m.denotation(am.events[e].pre);

  // A post-free event whose precondition holds everywhere is the identity.
  if (ne == 1 && !am.events[0].post && den[0] == m.all()) {
    if (!has_world(act.designated, 0)) throw InapplicableAction("no designated event");
    UpdateTrace out{s, {}};
    for (int w = 0; w < n; ++w) out.origin.emplace_back(w, 0);
    return out;
  }

  std::vector<std::pair<int, int>> pairs;
  for (int w = 0; w < n; ++w) {
    for (int e = 0; e < ne; ++e) {
      if (has_world(den[e], w)) pairs.emplace_back(w, e);
    }
  }
  WorldSet designated = 0;
  const int np = static_cast<int>(pairs.size());
  if (np > kMaxWorlds) throw Error("product update exceeds 64 worlds");
  for (int p = 0; p < np; ++p) {
    if (has_world(s.designated, pairs[p].first) && has_world(act.designated, pairs[p].second)) {
      designated |= world_bit(p);
    }
  }
  if (!designated) {
    throw InapplicableAction("'" + describe(act) + "' has no designated event applicable at a designated world");
  }

  const auto& agents = m.agents();
  std::vector<Relation> order(agents.size(), Relation(np, 0));
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const Relation& ea = am.relation_for(agents[a]);
    const int ai = static_cast<int>(a);
    for (int p = 0; p < np; ++p) {
      const auto [w, sigma] = pairs[p];
      WorldSet row = 0;
      for (int q = 0; q < np; ++q) {
        const auto [v, tau] = pairs[q];
        const bool st = has_world(ea[sigma], tau);
        const bool ts = has_world(ea[tau], sigma);
        if ((st && !ts && has_world(m.component(ai, w), v)) || (st && ts && m.leq(ai, w, v))) {
          row |= world_bit(q);
        }
      }
      order[a][p] = row;
    }
  }

  // Keep what is reachable from the designated pairs under any agent.
  std::vector<WorldSet> sym(np, 0);
  for (const auto& rel : order) {
    for (int p = 0; p < np; ++p) {
      sym[p] |= rel[p];
      for (int q : world_indices(rel[p])) sym[q] |= world_bit(p);
    }
  }
  WorldSet keep = designated;
  WorldSet frontier = designated;
  while (frontier) {
    WorldSet next = 0;
    for (int p : world_indices(frontier)) next |= sym[p];
    frontier = next & ~keep;
    keep |= next;
  }

  std::vector<int> remap(np, -1);
  std::vector<int> kept = world_indices(keep);
  for (std::size_t i = 0; i < kept.size(); ++i) remap[kept[i]] = static_cast<int>(i);

  std::vector<int> children(n, 0);
  for (int p : kept) ++children[pairs[p].first];

  UpdateTrace out;
  std::vector<World> worlds;
  for (int p : kept) {
    const auto [w, e] = pairs[p];
    const World& parent = m.worlds()[w];
    const Event& ev = am.events[e];
    std::string id = children[w] == 1 ? parent.id : parent.id + "." + ev.id;
    worlds.push_back({std::move(id), ev.post ? parent.kb.add(*ev.post) : parent.kb});
    out.origin.emplace_back(w, e);
  }
  std::vector<Relation> pruned(agents.size(), Relation(kept.size(), 0));
  for (std::size_t a = 0; a < agents.size(); ++a) {
    for (std::size_t i = 0; i < kept.size(); ++i) {
      WorldSet row = 0;
      for (int q : world_indices(order[a][kept[i]] & keep)) row |= world_bit(remap[q]);
      pruned[a][i] = row;
    }
  }
  WorldSet new_designated = 0;
  for (int p : world_indices(designated)) new_designated |= world_bit(remap[p]);

  out.state.model = std::make_shared<const PlausibilityModel>(
      agents, std::move(worlds), std::move(pruned), m.success_oracle());
  out.state.designated = new_designated;
  return out;
}

PointedState product_update(const PointedState& s, const PointedAction& act) {
  return product_update_traced(s, act).state;
}

PointedAction mk_execution_action(const PlanLibrary& lib, const std::string& timepoint) {
  const int tp = lib.timepoint_index(timepoint);
  const std::string& actor = lib.timepoints()[tp].owner;
  const std::vector<int>& preds = lib.predecessors(tp);
  if (preds.size() > 6) throw InvalidLibrary("time point '" + timepoint + "' has too many predecessors");

  auto model = std::make_shared<ActionModel>();
  const Formula believes = Formula::belief(actor, Formula::sat(lib.executed(timepoint)));
  const std::size_t subsets = std::size_t{1} << preds.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    // Bit i set: predecessor i has not been executed.
    std::vector<Formula> pre{believes};
    std::set<std::string> executed;
    std::string id = "x";
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const std::string& pid = lib.timepoints()[preds[i]].id;
      Formula done = Formula::entailed(lib.executed(pid));
      if (mask & (std::size_t{1} << i)) {
        pre.push_back(Formula::negation(done));
        id += "-" + pid;
      } else {
        pre.push_back(done);
        executed.insert(pid);
      }
    }
    model->events.push_back({preds.empty() ? "e" : id, Formula::conjunction(std::move(pre)),
                             execution_constraint(lib, timepoint, executed)});
  }
  model->order = total_relation(static_cast<int>(subsets));
  ActionMeta meta;
  meta.kind = ActionKind::Execute;
  meta.actor = actor;
  meta.timepoint = timepoint;
  const WorldSet all = subsets == kMaxWorlds ? ~WorldSet{0} : world_bit(static_cast<int>(subsets)) - 1;
  return {std::move(model), all, std::move(meta)};
}

PointedAction mk_intent_announcement(const std::string& actor, const Constraint& c) {
  ActionMeta meta;
  meta.kind = ActionKind::Intent;
  meta.actor = actor;
  meta.constraint = c;
  return single_event(std::move(meta), Formula::belief(actor, Formula::sat(c)), c);
}

void check_explanation_grammar(const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::In:
      return;
    case Formula::Kind::Not:
      check_explanation_grammar(phi.operands()[0]);
      return;
    case Formula::Kind::Belief:
      if (!phi.condition().is_top()) {
        throw RestrictedFormulaError("conditional belief is outside the explanation grammar: " +
                                     to_string(phi));
      }
      check_explanation_grammar(phi.body());
      return;
    default:
      throw RestrictedFormulaError("explanations are built from !, B[a] and in(c): " + to_string(phi));
  }
}

PointedAction mk_explanation(const std::string& actor, const Formula& phi) {
  check_explanation_grammar(phi);
  ActionMeta meta;
  meta.kind = ActionKind::Explain;
  meta.actor = actor;
  meta.formula = phi;
  return single_event(std::move(meta), Formula::belief(actor, phi), std::nullopt);
}

PointedAction mk_question(const std::string& asker, const std::string& askee,
                          const Formula& phi) {
  if (asker == askee) throw InvalidScenario("an agent cannot ask itself");
  check_explanation_grammar(phi);
  auto model = std::make_shared<ActionModel>();
  const Formula yes = Formula::belief(askee, phi);
  const Formula no = Formula::belief(askee, Formula::negation(phi));
  model->events.push_back({"yes", yes, std::nullopt});
  model->events.push_back({"no", no, std::nullopt});
  model->events.push_back(
      {"unsure", Formula::conjunction({Formula::negation(yes), Formula::negation(no)}), std::nullopt});
  model->order = identity_relation(3);
  ActionMeta meta;
  meta.kind = ActionKind::Ask;
  meta.actor = asker;
  meta.askee = askee;
  meta.formula = phi;
  return {std::move(model), world_bit(3) - 1, std::move(meta)};
}

PointedAction mk_noop(const std::string& actor) {
  ActionMeta meta;
  meta.kind = ActionKind::Noop;
  meta.actor = actor;
  return single_event(std::move(meta), Formula::top(), std::nullopt);
}

Formula answer_formula(const std::string& askee, const Formula& phi, Answer answer) {
  switch (answer) {
    case Answer::Yes: return phi;
    case Answer::No: return Formula::negation(phi);
    case Answer::Unsure: break;
  }
  return Formula::conjunction({Formula::negation(Formula::belief(askee, phi)),
                               Formula::negation(Formula::belief(askee, Formula::negation(phi)))});
}

PointedAction mk_answer(const std::string& askee, const Formula& phi, Answer answer) {
  const Formula said = answer_formula(askee, phi, answer);
  if (answer != Answer::Unsure) check_explanation_grammar(said);
  ActionMeta meta;
  meta.kind = ActionKind::Explain;
  meta.actor = askee;
  meta.formula = said;
  meta.answer_to = phi;
  return single_event(std::move(meta), Formula::belief(askee, said), std::nullopt);
}

}  // namespace epike
