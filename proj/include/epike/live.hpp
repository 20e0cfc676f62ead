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

#ifndef EPIKE_LIVE_HPP
#define EPIKE_LIVE_HPP

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "epike/harness.hpp"

namespace epike {

struct LiveEvent {
  int seq = 0;
  ActionRecord action;
  std::string text;    // canonical rendering
  std::string branch;  // engine ladder branch, "human" or "prelude"
};

struct LiveWorldView {
  std::string id;
  bool most_plausible = false;
  std::vector<std::vector<std::string>> feasible_subplans;
};

// What the human teammate may see: only its own designated worlds, never
// the ground truth beyond the terminal status.
struct LiveView {
  std::string human;
  std::vector<std::string> variables;
  std::vector<LiveWorldView> worlds;
  std::vector<ActionRecord> available;
  std::optional<PendingQuestion> pending;
  std::string status;  // running | success | failure
  int last_seq = -1;
};

// One human-controlled agent against engine agents. All methods are
// thread-safe; engine turns run synchronously inside submit().
class LiveSession {
 public:
  LiveSession(Scenario sc, std::string human, AgentOptions opts = {}, int engine_step_cap = 20);

  LiveView view() const;
  // Rejects actions absent from view().available with InapplicableAction.
  std::vector<LiveEvent> submit(const ActionRecord& rec);
  std::vector<LiveEvent> events_since(int seq) const;
  // Blocks until an event newer than `seq` exists, the session closes, or
  // the timeout elapses.
  std::vector<LiveEvent> wait_events(int seq, std::chrono::milliseconds timeout) const;
  void close();
  bool closed() const;
  const std::string& human() const { return human_; }
  const Scenario& scenario() const { return sc_; }

 private:
  void apply_locked(const PointedAction& act, const std::string& branch);
  void run_engine_locked();
  std::vector<ActionRecord> available_locked() const;
  std::string status_locked() const;

  Scenario sc_;
  std::string human_;
  int engine_step_cap_;
  std::map<std::string, std::unique_ptr<AgentSession>> sessions_;  // human's tracks its beliefs
  std::vector<std::string> engine_order_;
  KnowledgeBase ground_;
  std::set<std::string> executed_;
  std::vector<LiveEvent> events_;
  bool closed_ = false;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
};

}  // namespace epike

#endif  // EPIKE_LIVE_HPP
