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

#ifndef EPIKE_FORMULA_HPP
#define EPIKE_FORMULA_HPP

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "epike/constraint.hpp"

namespace epike {

// Doxastic formula over knowledge-base worlds:
//   in(c) | entailed(c) | !f | (f & ...) | B[a | cond](f) | suc
// sat(c), B[a](f), disjunction and implication are encoded through these.
// `suc` is true at a world whose knowledge base satisfies the model's
// success oracle.
class Formula {
 public:
  enum class Kind : uint8_t { In, Entailed, Not, And, Belief, Success };

  Formula();  // top()

  static Formula in(Constraint c);
  static Formula entailed(Constraint c);
  static Formula sat(Constraint c);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> operands);
  static Formula disjunction(std::vector<Formula> operands);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula belief(std::string agent, Formula body);
  static Formula conditional_belief(std::string agent, Formula condition, Formula body);
  static Formula success();
  static Formula top();     // entailed(true)
  static Formula bottom();  // !entailed(true)
  static Formula failure();  // entailed(false)

  Kind kind() const;
  const Constraint& constraint() const;  // In, Entailed
  const std::string& agent() const;      // Belief
  const Formula& condition() const;      // Belief
  const Formula& body() const;           // Belief
  const std::vector<Formula>& operands() const;  // Not (1), And (>=2)
  uint64_t hash() const;

  bool is_top() const;
  // Recognizes the encoding of sat(c); fills `out` with c.
  bool is_sat(Constraint* out = nullptr) const;
  std::size_t belief_depth() const;
  void collect_agents(std::set<std::string>& out) const;
  bool mentions_success() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

}  // namespace epike

#endif  // EPIKE_FORMULA_HPP
