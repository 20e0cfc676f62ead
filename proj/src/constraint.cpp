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

#include "epike/constraint.hpp"

#include <algorithm>

#include "epike/errors.hpp"

namespace epike {

uint64_t hash_string(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return mix_hash(h, s.size());
}

VariableDecl VariableDecl::boolean(std::string name) {
  return VariableDecl{std::move(name), {std::string(kTrue), std::string(kFalse)}};
}

bool VariableDecl::is_boolean() const {
  return domain.size() == 2 && domain[0] == kTrue && domain[1] == kFalse;
}

Vocabulary::Vocabulary(std::vector<VariableDecl> decls) : decls_(std::move(decls)) {
  uint64_t h = 0x5eed;
  for (std::size_t i = 0; i < decls_.size(); ++i) {
    const auto& d = decls_[i];
    if (d.domain.empty()) {
      throw MalformedConstraint("variable '" + d.name + "' has an empty domain");
    }
    if (!index_.emplace(d.name, static_cast<int>(i)).second) {
      throw MalformedConstraint("duplicate variable '" + d.name + "'");
    }
    std::set<std::string> seen(d.domain.begin(), d.domain.end());
    if (seen.size() != d.domain.size()) {
      throw MalformedConstraint("duplicate value in domain of '" + d.name + "'");
    }
    h = mix_hash(h, hash_string(d.name));
    for (const auto& v : d.domain) h = mix_hash(h, hash_string(v));
  }
  fingerprint_ = h;
}

int Vocabulary::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

int Vocabulary::value_index(int var, std::string_view value) const {
  const auto& dom = decls_[var].domain;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (dom[i] == value) return static_cast<int>(i);
  }
  return -1;
}

struct Constraint::Node {
  Kind kind = Kind::Top;
  std::string variable;
  std::string value;
  std::vector<Constraint> operands;
  uint64_t hash = 0;
};

Constraint::Constraint() : Constraint(top()) {}
Constraint::Constraint(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Constraint Constraint::top() {
  static const Constraint c = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Top;
    n->hash = mix_hash(1, 0x70b);
    return Constraint(std::move(n));
  }();
  return c;
}

Constraint Constraint::bottom() {
  static const Constraint c = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bottom;
    n->hash = mix_hash(2, 0xb07);
    return Constraint(std::move(n));
  }();
  return c;
}

Constraint Constraint::assign(std::string variable, std::string value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Assign;
  n->hash = mix_hash(mix_hash(3, hash_string(variable)), hash_string(value));
  n->variable = std::move(variable);
  n->value = std::move(value);
  return Constraint(std::move(n));
}

Constraint Constraint::negation(Constraint operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->hash = mix_hash(4, operand.hash());
  n->operands.push_back(std::move(operand));
  return Constraint(std::move(n));
}

Constraint Constraint::conjunction(std::vector<Constraint> operands) {
  if (operands.empty()) return top();
  if (operands.size() == 1) return operands.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  uint64_t h = 5;
  for (const auto& c : operands) h = mix_hash(h, c.hash());
  n->hash = h;
  n->operands = std::move(operands);
  return Constraint(std::move(n));
}

Constraint Constraint::disjunction(std::vector<Constraint> operands) {
  if (operands.empty()) return bottom();
  if (operands.size() == 1) return operands.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  uint64_t h = 6;
  for (const auto& c : operands) h = mix_hash(h, c.hash());
  n->hash = h;
  n->operands = std::move(operands);
  return Constraint(std::move(n));
}

Constraint Constraint::implication(Constraint lhs, Constraint rhs) {
  return disjunction({negation(std::move(lhs)), std::move(rhs)});
}

Constraint::Kind Constraint::kind() const { return node_->kind; }
const std::string& Constraint::variable() const { return node_->variable; }
const std::string& Constraint::value() const { return node_->value; }
const std::vector<Constraint>& Constraint::operands() const { return node_->operands; }
uint64_t Constraint::hash() const { return node_->hash; }

bool operator==(const Constraint& a, const Constraint& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Constraint::Kind::Top:
    case Constraint::Kind::Bottom:
      return true;
    case Constraint::Kind::Assign:
      return a.node_->variable == b.node_->variable && a.node_->value == b.node_->value;
    default:
      return a.node_->operands == b.node_->operands;
  }
}

bool Constraint::holds(const std::map<std::string, std::string>& assignment) const {
  switch (kind()) {
    case Kind::Top:
      return true;
    case Kind::Bottom:
      return false;
    case Kind::Assign: {
      auto it = assignment.find(variable());
      return it != assignment.end() && it->second == value();
    }
    case Kind::Not:
      return !operands()[0].holds(assignment);
    case Kind::And:
      return std::all_of(operands().begin(), operands().end(),
                         [&](const Constraint& c) { return c.holds(assignment); });
    case Kind::Or:
      return std::any_of(operands().begin(), operands().end(),
                         [&](const Constraint& c) { return c.holds(assignment); });
  }
  return false;
}

void Constraint::collect_variables(std::set<std::string>& out) const {
  if (kind() == Kind::Assign) {
    out.insert(variable());
    return;
  }
  for (const auto& c : operands()) c.collect_variables(out);
}

std::size_t Constraint::depth() const {
  std::size_t d = 0;
  for (const auto& c : operands()) d = std::max(d, c.depth());
  return operands().empty() ? 0 : d + 1;
}

void validate_constraint(const Vocabulary& vocab, const Constraint& c) {
  if (c.kind() == Constraint::Kind::Assign) {
    int var = vocab.index_of(c.variable());
    if (var < 0) throw MalformedConstraint("undeclared variable '" + c.variable() + "'");
    if (vocab.value_index(var, c.value()) < 0) {
      throw MalformedConstraint("value '" + c.value() + "' not in domain of '" +
                                c.variable() + "'");
    }
    return;
  }
  for (const auto& op : c.operands()) validate_constraint(vocab, op);
}

}  // namespace epike
