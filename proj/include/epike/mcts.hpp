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

#ifndef EPIKE_MCTS_HPP
#define EPIKE_MCTS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "epike/actions.hpp"
#include "epike/candidates.hpp"

namespace epike {

enum class Termination : uint8_t { SearchAction, ExplainFailure, AskIfFailure, ExplainSuccess };
const char* termination_name(Termination t);

struct SearchConfig {
  Termination termination = Termination::SearchAction;
  int horizon = 3;  // execution actions
  double exploration = 4.0;
  std::map<ActionKind, double> penalties = {{ActionKind::Execute, 1.0},
                                            {ActionKind::Noop, 1.0},
                                            {ActionKind::Intent, 0.85},
                                            {ActionKind::Explain, 0.9},
                                            {ActionKind::Ask, 0.9}};
  std::set<ActionKind> ego_kinds;
  std::set<ActionKind> other_kinds;
  int iteration_cap = 1000;
  double time_budget_ms = 0;  // 0: unbounded
  // Tree paths longer than this many actions score 0.
  int action_cap = 8;
  CandidateOptions candidates;
  uint64_t seed = 1;

  double penalty(ActionKind k) const;
  // Defaults per subroutine.
  static SearchConfig for_termination(Termination t);
};

struct ChildReport {
  ActionRecord action;
  double score = 0;
  int visits = 0;
  bool vetoed = false;
};

struct SearchResult {
  std::optional<PointedAction> action;  // nullopt: none (noop included)
  bool chose_noop = false;
  double score = 0;
  int iterations = 0;
  std::string stopped_by;  // "iterations" | "time" | "exhausted"
  std::vector<ChildReport> children;
};

// Tree search from the ego's current state (W_d closed under cc_ego).
SearchResult search(const PointedState& s, const std::string& ego, const SearchConfig& cfg,
                    const LibraryPtr& lib, std::ostream* trace = nullptr);

// Utility of a global state at tree depth `executed`; nullopt when not terminal.
std::optional<double> terminal_utility(const PointedState& global, const std::string& ego,
                                       const SearchConfig& cfg, int executed);

bool detect_implicit_revision(const PointedState& before, const PointedAction& act);

struct ActionScore {
  double subjective = 0;
  double objective = 0;
  bool noop = false;
  bool execute = false;
};
struct DecisionValue {
  double p_noop = 1;
  double expected = 0;
};
DecisionValue backup_decision(const std::vector<ActionScore>& actions);
double backup_predict(const std::vector<DecisionValue>& agents);
double backup_split(const std::vector<double>& child_scores, double penalty);

}  // namespace epike

#endif  // EPIKE_MCTS_HPP
