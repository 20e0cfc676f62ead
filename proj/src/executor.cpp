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

#include "epike/executor.hpp"

#include <algorithm>

#include "epike/errors.hpp"

namespace epike {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::None: return "none";
    case Branch::Answer: return "answer";
    case Branch::Blocked: return "blocked";
    case Branch::ExplainFailure: return "explain-failure";
    case Branch::AskIfFailure: return "ask-if-failure";
    case Branch::ExplainSuccess: return "explain-success";
    case Branch::SearchAction: return "search-action";
    case Branch::Surprised: return "surprised";
  }
  return "none";
}

Answer truthful_answer(const PointedState& s, const std::string& askee, const Formula& phi) {
  if (evaluate(s, Formula::belief(askee, phi))) return Answer::Yes;
  if (evaluate(s, Formula::belief(askee, Formula::negation(phi)))) return Answer::No;
  return Answer::Unsure;
}

AgentSession::AgentSession(LibraryPtr lib, std::string ego, PointedState initial, AgentOptions opts)
    : lib_(std::move(lib)), ego_(std::move(ego)), state_(std::move(initial)), opts_(opts) {
  if (!state_.model || state_.designated == 0) throw InvalidScenario("agent state is empty");
  state_.model->agent_index(ego_);
}

void AgentSession::observe(const PointedAction& act) {
  ++observations_;
  switch (act.meta.kind) {
    case ActionKind::Noop:
      return;
    case ActionKind::Ask:
      // The question itself changes nothing; its answer is observed next.
      pending_ = PendingQuestion{act.meta.actor, act.meta.askee, *act.meta.formula};
      return;
    default:
      break;
  }
  try {
    state_ = product_update(state_, act);
  } catch (const InapplicableAction& e) {
    throw ObservationContradiction(ego_ + " cannot reconcile '" + describe(act) + "': " + e.what());
  }
  if (act.meta.answer_to && pending_ && *act.meta.answer_to == pending_->phi) pending_.reset();
}

std::optional<PointedAction> AgentSession::on_observe(const PointedAction& act) {
  observe(act);
  return decide();
}

SearchConfig AgentSession::config_for(Termination t) const {
  SearchConfig cfg = SearchConfig::for_termination(t);
  cfg.iteration_cap = opts_.iteration_cap;
  cfg.time_budget_ms = opts_.time_budget_ms;
  cfg.horizon = opts_.horizon;
  cfg.candidates.explanation_depth = opts_.explanation_depth;
  cfg.seed = mix_hash(opts_.seed, decisions_);
  cfg.ego_kinds = restrict_kinds(cfg.ego_kinds);
  cfg.other_kinds = restrict_kinds(cfg.other_kinds);
  return cfg;
}

std::optional<PointedAction> AgentSession::answer_pending() {
  const PendingQuestion& q = *pending_;
  return mk_answer(ego_, q.phi, truthful_answer(state_, ego_, q.phi));
}

std::optional<PointedAction> AgentSession::run_search(Termination t) {
  const SearchConfig cfg = config_for(t);
  fallback_.reset();
  if (cfg.ego_kinds.empty()) {
    last_search_.reset();
    return std::nullopt;
  }
  last_search_ = search(state_, ego_, cfg, lib_);
  if (t == Termination::SearchAction) {
    const auto& children = last_search_->children;
    int best = -1;
    for (std::size_t i = 0; i < children.size(); ++i) {
      const auto& c = children[i];
      if (c.vetoed || c.action.kind == "noop" || c.visits == 0 || c.score <= 0) continue;
      if (best < 0 || c.score > children[best].score) best = static_cast<int>(i);
    }
    if (best >= 0) fallback_ = from_record(children[best].action, *lib_);
  }
  return last_search_->action;
}

std::optional<PointedAction> AgentSession::decide() {
  ++decisions_;
  if (pending_) {
    if (pending_->askee == ego_) {
      last_branch_ = Branch::Answer;
      return answer_pending();
    }
    last_branch_ = Branch::Blocked;
    return std::nullopt;
  }
  const auto& agents = state_.model->agents();
  auto believes = [&](const Formula& f) { return evaluate(state_, Formula::belief(ego_, f)); };
  auto everyone = [&](const Formula& f) {
    std::vector<Formula> ops;
    for (const auto& a : agents) ops.push_back(Formula::belief(a, f));
    return Formula::conjunction(std::move(ops));
  };
  const Formula failed = Formula::failure();
  if (believes(failed)) {
    if (believes(everyone(failed))) {
      last_branch_ = Branch::None;
      return std::nullopt;
    }
    last_branch_ = Branch::ExplainFailure;
    return run_search(Termination::ExplainFailure);
  }
  if (!believes(Formula::negation(failed))) {
    last_branch_ = Branch::AskIfFailure;
    return run_search(Termination::AskIfFailure);
  }
  const Formula suc = Formula::success();
  if (believes(suc)) {
    if (believes(everyone(suc))) {
      last_branch_ = Branch::None;
      return std::nullopt;
    }
    last_branch_ = Branch::ExplainSuccess;
    return run_search(Termination::ExplainSuccess);
  }
  last_branch_ = Branch::SearchAction;
  return run_search(Termination::SearchAction);
}

PointedState PikeSession::collapse(const PointedState& s, const std::string& ego) {
  const PlausibilityModel& m = *s.model;
  const int a = m.agent_index(ego);
  std::vector<int> best = world_indices(m.min_plausible(a, s.designated));
  const auto& worlds = m.worlds();
  const int w = *std::min_element(best.begin(), best.end(),
                                  [&](int x, int y) { return worlds[x].id < worlds[y].id; });
  std::vector<Relation> order(m.agents().size(), Relation{world_bit(0)});
  auto model = std::make_shared<const PlausibilityModel>(
      m.agents(), std::vector<World>{worlds[w]}, std::move(order), m.success_oracle());
  return {std::move(model), world_bit(0)};
}

PikeSession::PikeSession(LibraryPtr lib, std::string ego, const PointedState& initial,
                         AgentOptions opts)
    : AgentSession(std::move(lib), ego, collapse(initial, ego), opts) {}

std::set<ActionKind> PikeSession::restrict_kinds(std::set<ActionKind> kinds) const {
  kinds.erase(ActionKind::Intent);
  kinds.erase(ActionKind::Explain);
  kinds.erase(ActionKind::Ask);
  return kinds;
}

void PikeSession::observe(const PointedAction& act) {
  if (surprised_) {
    ++observations_;
    // Beliefs are frozen, but question bookkeeping continues.
    if (act.meta.kind == ActionKind::Ask) {
      pending_ = PendingQuestion{act.meta.actor, act.meta.askee, *act.meta.formula};
    } else if (act.meta.answer_to && pending_ && *act.meta.answer_to == pending_->phi) {
      pending_.reset();
    }
    return;
  }
  try {
    AgentSession::observe(act);
  } catch (const ObservationContradiction&) {
    surprised_ = true;
    if (act.meta.answer_to) pending_.reset();
  }
}

std::optional<PointedAction> PikeSession::decide() {
  if (surprised_) {
    ++decisions_;
    // Questions are still answered; nothing else is attempted.
    if (pending_ && pending_->askee == ego_) {
      last_branch_ = Branch::Answer;
      return answer_pending();
    }
    last_branch_ = Branch::Surprised;
    return std::nullopt;
  }
  return AgentSession::decide();
}

}  // namespace epike
