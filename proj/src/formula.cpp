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

#include "epike/formula.hpp"

#include <algorithm>

namespace epike {

struct Formula::Node {
  Kind kind = Kind::Entailed;
  Constraint constraint;
  std::string agent;
  std::vector<Formula> operands;  // Not/And operands; Belief: {condition, body}
  uint64_t hash = 0;
};

Formula::Formula() : Formula(top()) {}
Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::in(Constraint c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::In;
  n->hash = mix_hash(11, c.hash());
  n->constraint = std::move(c);
  return Formula(std::move(n));
}

Formula Formula::entailed(Constraint c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Entailed;
  n->hash = mix_hash(12, c.hash());
  n->constraint = std::move(c);
  return Formula(std::move(n));
}

Formula Formula::sat(Constraint c) {
  return negation(entailed(Constraint::negation(std::move(c))));
}

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->hash = mix_hash(13, f.hash());
  n->operands.push_back(std::move(f));
  return Formula(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> operands) {
  if (operands.empty()) return top();
  if (operands.size() == 1) return operands.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  uint64_t h = 14;
  for (const auto& f : operands) h = mix_hash(h, f.hash());
  n->hash = h;
  n->operands = std::move(operands);
  return Formula(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
  if (operands.empty()) return bottom();
  if (operands.size() == 1) return operands.front();
  for (auto& f : operands) f = negation(std::move(f));
  return negation(conjunction(std::move(operands)));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return negation(conjunction({std::move(lhs), negation(std::move(rhs))}));
}

Formula Formula::belief(std::string agent, Formula body) {
  return conditional_belief(std::move(agent), top(), std::move(body));
}

Formula Formula::conditional_belief(std::string agent, Formula condition, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Belief;
  n->hash = mix_hash(mix_hash(mix_hash(15, hash_string(agent)), condition.hash()), body.hash());
  n->agent = std::move(agent);
  n->operands = {std::move(condition), std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::success() {
  static const Formula f = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Success;
    n->hash = mix_hash(16, 0x5c);
    return Formula(std::move(n));
  }();
  return f;
}

Formula Formula::top() {
  static const Formula f = entailed(Constraint::top());
  return f;
}

Formula Formula::bottom() { return negation(top()); }

Formula Formula::failure() { return entailed(Constraint::bottom()); }

Formula::Kind Formula::kind() const { return node_->kind; }
const Constraint& Formula::constraint() const { return node_->constraint; }
const std::string& Formula::agent() const { return node_->agent; }
const Formula& Formula::condition() const { return node_->operands[0]; }
const Formula& Formula::body() const { return node_->operands[1]; }
const std::vector<Formula>& Formula::operands() const { return node_->operands; }
uint64_t Formula::hash() const { return node_->hash; }

bool Formula::is_top() const {
  return kind() == Kind::Entailed && constraint().kind() == Constraint::Kind::Top;
}

bool Formula::is_sat(Constraint* out) const {
  if (kind() != Kind::Not) return false;
  const Formula& inner = operands()[0];
  if (inner.kind() != Kind::Entailed || inner.constraint().kind() != Constraint::Kind::Not) {
    return false;
  }
  if (out) *out = inner.constraint().operands()[0];
  return true;
}

std::size_t Formula::belief_depth() const {
  std::size_t d = 0;
  for (const auto& f : operands()) d = std::max(d, f.belief_depth());
  return kind() == Kind::Belief ? d + 1 : d;
}

void Formula::collect_agents(std::set<std::string>& out) const {
  if (kind() == Kind::Belief) out.insert(agent());
  for (const auto& f : operands()) f.collect_agents(out);
}

bool Formula::mentions_success() const {
  if (kind() == Kind::Success) return true;
  return std::any_of(operands().begin(), operands().end(),
                     [](const Formula& f) { return f.mentions_success(); });
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Formula::Kind::In:
    case Formula::Kind::Entailed:
      return a.node_->constraint == b.node_->constraint;
    case Formula::Kind::Success:
      return true;
    case Formula::Kind::Belief:
      return a.node_->agent == b.node_->agent && a.node_->operands == b.node_->operands;
    default:
      return a.node_->operands == b.node_->operands;
  }
}

}  // namespace epike
