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

#ifndef EPIKE_CANDIDATES_HPP
#define EPIKE_CANDIDATES_HPP

#include <set>
#include <string>
#include <vector>

#include "epike/actions.hpp"

namespace epike {

struct CandidateOptions {
  // Nesting of B[b] prefixes on explanation literals.
  int explanation_depth = 1;
};

// Actions the agent may take from its own perspective `persp`, in tier
// order: executions, noop, intents, explanations, questions.
std::vector<PointedAction> candidate_actions(const PointedState& persp, const std::string& agent,
                                             const std::set<ActionKind>& kinds,
                                             const PlanLibrary& lib,
                                             const CandidateOptions& opts = {});

// Constraints held by some but not all worlds of the model.
std::vector<Constraint> discrepancy_pool(const PlausibilityModel& m);

// Postcondition the execution of `tp` adds to `kb`.
Constraint execution_post(const KnowledgeBase& kb, const PlanLibrary& lib, const std::string& tp);

// Own unexecuted time points whose execution the agent believes possible
// and believes keeps every one of its most plausible worlds consistent.
std::vector<std::string> believed_feasible_executions(const PointedState& s,
                                                      const std::string& agent,
                                                      const PlanLibrary& lib);

}  // namespace epike

#endif  // EPIKE_CANDIDATES_HPP
