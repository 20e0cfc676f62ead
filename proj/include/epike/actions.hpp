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

#ifndef EPIKE_ACTIONS_HPP
#define EPIKE_ACTIONS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epike/formula.hpp"
#include "epike/model.hpp"
#include "epike/planlib.hpp"

namespace epike {

enum class ActionKind : uint8_t { Execute, Intent, Explain, Ask, Noop };

const char* kind_name(ActionKind kind);
ActionKind parse_kind(const std::string& name);

struct Event {
  std::string id;
  Formula pre;
  std::optional<Constraint> post;  // in(c) when present
};

// Event plausibility uses `order` for every agent without an override.
// Rows follow the same convention as Relation: row i holds j iff i <= j.
struct ActionModel {
  std::vector<Event> events;
  Relation order;
  std::map<std::string, Relation> overrides;

  const Relation& relation_for(const std::string& agent) const;
};

struct ActionMeta {
  ActionKind kind = ActionKind::Noop;
  std::string actor;
  std::string timepoint;                // Execute
  std::optional<Constraint> constraint;  // Intent
  std::optional<Formula> formula;        // Explain, Ask
  std::string askee;                     // Ask
  std::optional<Formula> answer_to;      // Explain issued as an answer
};

struct PointedAction {
  std::shared_ptr<const ActionModel> model;
  WorldSet designated = 0;  // event indices
  ActionMeta meta;
};

// Wire record: one line of a trace or one message of the session protocol.
struct ActionRecord {
  std::string kind;
  std::string actor;
  std::string payload;  // time point id | constraint text | formula text | empty
  std::string askee;
  std::string answer_to;

  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

ActionRecord to_record(const PointedAction& act);
PointedAction from_record(const ActionRecord& rec, const PlanLibrary& lib);
std::string describe(const PointedAction& act);
bool same_action(const PointedAction& a, const PointedAction& b);

bool applicable(const PointedState& s, const PointedAction& act);

struct UpdateTrace {
  PointedState state;
  std::vector<std::pair<int, int>> origin;  // per new world: (parent world, event)
};

// Action-priority update. Throws InapplicableAction when no designated
// pair survives.
UpdateTrace product_update_traced(const PointedState& s, const PointedAction& act);
PointedState product_update(const PointedState& s, const PointedAction& act);

PointedAction mk_execution_action(const PlanLibrary& lib, const std::string& timepoint);
PointedAction mk_intent_announcement(const std::string& actor, const Constraint& c);
// Throws RestrictedFormulaError unless phi ::= !phi | B[a](phi) | in(c).
PointedAction mk_explanation(const std::string& actor, const Formula& phi);
PointedAction mk_question(const std::string& asker, const std::string& askee,
                          const Formula& phi);
PointedAction mk_noop(const std::string& actor);

enum class Answer : uint8_t { Yes, No, Unsure };
Formula answer_formula(const std::string& askee, const Formula& phi, Answer answer);
// Truthful public answer by the askee, encoded as an explanation.
PointedAction mk_answer(const std::string& askee, const Formula& phi, Answer answer);

void check_explanation_grammar(const Formula& phi);

}  // namespace epike

#endif  // EPIKE_ACTIONS_HPP
