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

#ifndef EPIKE_PLANLIB_HPP
#define EPIKE_PLANLIB_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "epike/constraint.hpp"
#include "epike/kb.hpp"
#include "epike/model.hpp"

namespace epike {

struct TimePoint {
  std::string id;
  Constraint guard;  // conjunction of decision-variable assignments
  std::string owner;
};

struct OrderingConstraint {
  std::string pred;
  std::string succ;
  Constraint guard;
};

// Multi-agent temporal plan library. Each time point also names the
// boolean variable recording its execution.
class PlanLibrary {
 public:
  PlanLibrary(std::vector<VariableDecl> variables, std::vector<TimePoint> timepoints,
              std::vector<OrderingConstraint> orderings, std::vector<std::string> agents,
              std::vector<Constraint> constraints = {});

  const std::vector<VariableDecl>& variables() const { return variables_; }
  const std::vector<TimePoint>& timepoints() const { return timepoints_; }
  const std::vector<OrderingConstraint>& orderings() const { return orderings_; }
  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  // Decision variables followed by one boolean per time point.
  const std::shared_ptr<const Vocabulary>& vocabulary() const { return vocab_; }
  const std::shared_ptr<const Vocabulary>& decision_vocabulary() const { return decision_vocab_; }

  int timepoint_index(const std::string& id) const;  // throws UnknownTimePoint
  const TimePoint& timepoint(const std::string& id) const;
  // Ordering indices whose successor is the given time point, in library order.
  const std::vector<int>& incoming(int tp) const { return incoming_[tp]; }
  // Distinct predecessor time points of `tp`, in first-appearance order.
  const std::vector<int>& predecessors(int tp) const { return predecessors_[tp]; }

  // Minimal partial assignments (as conjunctions) whose activated ordering
  // graph is cyclic.
  const std::vector<Constraint>& nogoods() const { return nogoods_; }

  Constraint executed(const std::string& tp) const;  // tp=T
  uint64_t fingerprint() const { return fingerprint_; }

 private:
  void compute_nogoods();

  std::vector<VariableDecl> variables_;
  std::vector<TimePoint> timepoints_;
  std::vector<OrderingConstraint> orderings_;
  std::vector<std::string> agents_;
  std::vector<Constraint> constraints_;
  std::shared_ptr<const Vocabulary> vocab_;
  std::shared_ptr<const Vocabulary> decision_vocab_;
  std::map<std::string, int> tp_index_;
  std::vector<std::vector<int>> incoming_;
  std::vector<std::vector<int>> predecessors_;
  std::vector<Constraint> nogoods_;
  uint64_t fingerprint_ = 0;
};

using LibraryPtr = std::shared_ptr<const PlanLibrary>;

// A partial assignment written as a conjunction of var=value (or Top).
std::map<std::string, std::string> conjunction_literals(const Constraint& guard);

KnowledgeBase compile_initial_kb(const PlanLibrary& lib, const std::vector<Constraint>& extra);

// Replaces every world's constraints C_w by compile_initial_kb(lib, C_w)
// and binds the library's success oracle.
PointedState compile_initial_state(const PointedState& s0, const LibraryPtr& lib);

// (e=T) & !guard(o) for each ordering o into e whose predecessor is
// outside `executed`. Matches the postcondition of the corresponding
// execution event.
Constraint execution_constraint(const PlanLibrary& lib, const std::string& tp,
                                const std::set<std::string>& executed);
KnowledgeBase record_execution(const KnowledgeBase& kb, const PlanLibrary& lib,
                               const std::string& tp, const std::set<std::string>& executed);

std::set<std::string> executed_timepoints(const KnowledgeBase& kb, const PlanLibrary& lib);
bool success_holds(const KnowledgeBase& kb, const PlanLibrary& lib);
// Full decision assignments consistent with kb, as value tuples in
// variable order.
std::vector<std::vector<std::string>> feasible_subplans(const KnowledgeBase& kb,
                                                        const PlanLibrary& lib);

class PlanSuccessOracle final : public SuccessOracle {
 public:
  explicit PlanSuccessOracle(LibraryPtr lib) : lib_(std::move(lib)) {}
  bool holds(const KnowledgeBase& kb) const override { return success_holds(kb, *lib_); }
  const LibraryPtr& library() const { return lib_; }

 private:
  LibraryPtr lib_;
};

}  // namespace epike

#endif  // EPIKE_PLANLIB_HPP
