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

#include "epike/live.hpp"

#include <algorithm>

#include "epike/candidates.hpp"
#include "epike/errors.hpp"

namespace epike {

LiveSession::LiveSession(Scenario sc, std::string human, AgentOptions opts, int engine_step_cap)
    : sc_(std::move(sc)), human_(std::move(human)), engine_step_cap_(engine_step_cap) {
  const auto& agents = sc_.lib->agents();
  if (std::find(agents.begin(), agents.end(), human_) == agents.end()) {
    throw UnknownAgent(human_);
  }
  if (sc_.ego != human_) engine_order_.push_back(sc_.ego);
  for (const auto& a : agents) {
    if (a != human_ && a != sc_.ego) engine_order_.push_back(a);
    sessions_[a] = make_session(sc_, a, AgentKind::EPike, opts);
  }
  ground_ = sc_.ground_kb();
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& rec : sc_.prelude) apply_locked(from_record(rec, *sc_.lib), "prelude");
  run_engine_locked();
}

void LiveSession::apply_locked(const PointedAction& act, const std::string& branch) {
  if (act.meta.kind == ActionKind::Execute && !executed_.count(act.meta.timepoint)) {
    ground_ = record_execution(ground_, *sc_.lib, act.meta.timepoint, executed_);
    executed_.insert(act.meta.timepoint);
  } else if (act.meta.kind == ActionKind::Intent) {
    ground_ = ground_.add(*act.meta.constraint);
  }
  for (auto& [a, s] : sessions_) s->observe(act);
  events_.push_back({static_cast<int>(events_.size()), to_record(act), describe(act), branch});
  cv_.notify_all();
}

void LiveSession::run_engine_locked() {
  for (int step = 0; step < engine_step_cap_ && status_locked() == "running"; ++step) {
    bool acted = false;
    for (const auto& a : engine_order_) {
      if (auto act = sessions_[a]->decide()) {
        apply_locked(*act, branch_name(sessions_[a]->last_branch()));
        acted = true;
        break;
      }
    }
    if (!acted) return;
  }
}

std::string LiveSession::status_locked() const {
  if (!ground_.consistent()) return "failure";
  if (success_holds(ground_, *sc_.lib)) return "success";
  return "running";
}

std::vector<ActionRecord> LiveSession::available_locked() const {
  std::vector<ActionRecord> out;
  if (closed_ || status_locked() != "running") return out;
  const AgentSession& me = *sessions_.at(human_);
  const auto& pending = me.pending_question();
  if (pending) {
    if (pending->askee == human_) {
      for (Answer ans : {Answer::Yes, Answer::No, Answer::Unsure}) {
        out.push_back(to_record(mk_answer(human_, pending->phi, ans)));
      }
    }
    return out;
  }
  const std::set<ActionKind> kinds{ActionKind::Execute, ActionKind::Intent, ActionKind::Explain,
                                   ActionKind::Ask};
  for (const auto& act : candidate_actions(local_perspective(me.state(), human_), human_, kinds,
                                           *sc_.lib)) {
    out.push_back(to_record(act));
  }
  return out;
}

LiveView LiveSession::view() const {
  std::lock_guard<std::mutex> lock(mu_);
  LiveView v;
  v.human = human_;
  for (const auto& d : sc_.lib->variables()) v.variables.push_back(d.name);
  const PointedState& s = sessions_.at(human_)->state();
  const PlausibilityModel& m = *s.model;
  const WorldSet best = m.min_plausible(m.agent_index(human_), s.designated);
  for (int i : world_indices(s.designated)) {
    v.worlds.push_back({m.worlds()[i].id, has_world(best, i), feasible_subplans(m.worlds()[i].kb, *sc_.lib)});
  }
  v.available = available_locked();
  v.pending = sessions_.at(human_)->pending_question();
  v.status = status_locked();
  v.last_seq = static_cast<int>(events_.size()) - 1;
  return v;
}

std::vector<LiveEvent> LiveSession::submit(const ActionRecord& rec) {
  std::lock_guard<std::mutex> lock(mu_);
  if (closed_) throw InapplicableAction("session is closed");
  if (rec.actor != human_) throw InapplicableAction("actions must be taken by " + human_);
  const auto avail = available_locked();
  if (std::find(avail.begin(), avail.end(), rec) == avail.end()) {
    throw InapplicableAction("'" + rec.kind + " " + rec.payload + "' is not currently available");
  }
  const std::size_t first = events_.size();
  apply_locked(from_record(rec, *sc_.lib), "human");
  run_engine_locked();
  return {events_.begin() + static_cast<std::ptrdiff_t>(first), events_.end()};
}

std::vector<LiveEvent> LiveSession::events_since(int seq) const {
  std::lock_guard<std::mutex> lock(mu_);
  const std::size_t from = seq < 0 ? 0 : static_cast<std::size_t>(seq) + 1;
  if (from >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end()};
}

std::vector<LiveEvent> LiveSession::wait_events(int seq, std::chrono::milliseconds timeout) const {
  std::unique_lock<std::mutex> lock(mu_);
  const std::size_t from = seq < 0 ? 0 : static_cast<std::size_t>(seq) + 1;
  cv_.wait_for(lock, timeout, [&] { return closed_ || events_.size() > from; });
  if (from >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end()};
}

void LiveSession::close() {
  std::lock_guard<std::mutex> lock(mu_);
  closed_ = true;
  cv_.notify_all();
}

bool LiveSession::closed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return closed_;
}

}  // namespace epike
