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

// Brute-force reference implementations and hand-rolled generators used by
// the property tests and the acceptance binary. Nothing here calls the
// engine's solvers, model checker or plan encoding.

#ifndef EPIKE_TESTS_ORACLES_HPP
#define EPIKE_TESTS_ORACLES_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "epike/formula.hpp"
#include "epike/model.hpp"
#include "epike/planlib.hpp"

namespace oracle {

using Assignment = std::map<std::string, std::string>;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen() % n); }
  bool coin(int percent = 50) { return static_cast<int>(below(100)) < percent; }
};

// Every total assignment of the declared variables.
std::vector<Assignment> all_assignments(const std::vector<epike::VariableDecl>& vars);

bool holds(const epike::Constraint& c, const Assignment& a);
bool satisfiable(const std::vector<epike::VariableDecl>& vars,
                 const std::vector<epike::Constraint>& kb);
bool entails(const std::vector<epike::VariableDecl>& vars,
             const std::vector<epike::Constraint>& kb, const epike::Constraint& c);

// Explicit plausibility model: leq[a][i][j] iff world i is at least as
// plausible as world j for agent a.
struct Model {
  std::vector<epike::VariableDecl> vars;
  std::vector<std::string> agents;
  std::vector<std::vector<epike::Constraint>> kbs;
  std::vector<std::vector<std::vector<bool>>> leq;
};

std::vector<int> component(const Model& m, int agent, int w);
std::vector<int> minimal(const Model& m, int agent, const std::vector<int>& set);
// Truth at a single world, straight from the inductive definition.
bool eval(const Model& m, int w, const epike::Formula& f);

// Engine-side copy of an explicit model.
epike::PointedState to_engine(const Model& m, const std::vector<int>& designated);

// Random explicit model: each agent partitions the worlds into components
// and ranks worlds inside a component, which yields a valid plausibility
// relation by construction.
Model random_model(Rng& rng, int max_worlds);
// Random formula of belief depth <= max_depth over the model's agents.
epike::Formula random_formula(Rng& rng, const Model& m, int max_depth);
epike::Constraint random_constraint(Rng& rng, const std::vector<epike::VariableDecl>& vars,
                                    int depth);

// Plan-level references.
struct LibrarySample {
  std::shared_ptr<const epike::PlanLibrary> lib;
  std::vector<std::string> prefix;  // executed time points, in order
};
LibrarySample random_library(Rng& rng, int max_vars, int max_tps, int max_orders);

// A subplan g is compatible with an execution history h when g satisfies
// the task constraints, every executed point is activated by g, and some
// total order of g's activated points starts with h and respects every
// activated ordering. Decided by enumerating permutations.
bool compatible(const epike::PlanLibrary& lib, const Assignment& g,
                const std::vector<std::string>& history);
bool consistent_after(const epike::PlanLibrary& lib, const std::vector<std::string>& history);
bool succeeded_after(const epike::PlanLibrary& lib, const std::vector<std::string>& history);

}  // namespace oracle

#endif  // EPIKE_TESTS_ORACLES_HPP
