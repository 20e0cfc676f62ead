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

#ifndef EPIKE_EXECUTOR_HPP
#define EPIKE_EXECUTOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epike/mcts.hpp"

namespace epike {

enum class Branch : uint8_t {
  None,
  Answer,
  Blocked,
  ExplainFailure,
  AskIfFailure,
  ExplainSuccess,
  SearchAction,
  Surprised,
};
const char* branch_name(Branch b);

struct AgentOptions {
  int iteration_cap = 1000;
  double time_budget_ms = 0;
  uint64_t seed = 1;
  int horizon = 3;
  int explanation_depth = 1;
};

struct PendingQuestion {
  std::string asker;
  std::string askee;
  Formula phi;
};

// One agent's online execution loop. `observe` folds a public action into
// the agent's state; `decide` runs the callback ladder and returns the
// action to take, if any.
class AgentSession {
 public:
  // `initial` is the compiled state whose designated set is the agent's
  // epistemic component around the actual world.
  AgentSession(LibraryPtr lib, std::string ego, PointedState initial, AgentOptions opts = {});
  virtual ~AgentSession() = default;

  virtual void observe(const PointedAction& act);
  virtual std::optional<PointedAction> decide();
  std::optional<PointedAction> on_observe(const PointedAction& act);

  // Best positive non-noop root action of the last SearchAction call.
  std::optional<PointedAction> fallback() const { return fallback_; }

  const std::string& ego() const { return ego_; }
  const PointedState& state() const { return state_; }
  const LibraryPtr& library() const { return lib_; }
  Branch last_branch() const { return last_branch_; }
  const std::optional<SearchResult>& last_search() const { return last_search_; }
  const std::optional<PendingQuestion>& pending_question() const { return pending_; }
  uint64_t observations() const { return observations_; }
  uint64_t decisions() const { return decisions_; }

  SearchConfig config_for(Termination t) const;

 protected:
  std::optional<PointedAction> answer_pending();
  std::optional<PointedAction> run_search(Termination t);
  virtual std::set<ActionKind> restrict_kinds(std::set<ActionKind> kinds) const { return kinds; }

  LibraryPtr lib_;
  std::string ego_;
  PointedState state_;
  AgentOptions opts_;
  Branch last_branch_ = Branch::None;
  std::optional<SearchResult> last_search_;
  std::optional<PendingQuestion> pending_;
  std::optional<PointedAction> fallback_;
  uint64_t observations_ = 0;
  uint64_t decisions_ = 0;
};

// Naive baseline: the agent's most plausible world taken as common
// knowledge. Never communicates except to answer questions.
class PikeSession final : public AgentSession {
 public:
  PikeSession(LibraryPtr lib, std::string ego, const PointedState& initial, AgentOptions opts = {});

  void observe(const PointedAction& act) override;
  std::optional<PointedAction> decide() override;
  bool surprised() const { return surprised_; }

  // Single-world common-knowledge collapse of the agent's view.
  static PointedState collapse(const PointedState& s, const std::string& ego);

 protected:
  std::set<ActionKind> restrict_kinds(std::set<ActionKind> kinds) const override;

 private:
  bool surprised_ = false;
};

// Truthful answer of `askee` to a question about phi, from its state.
Answer truthful_answer(const PointedState& s, const std::string& askee, const Formula& phi);

}  // namespace epike

#endif  // EPIKE_EXECUTOR_HPP
