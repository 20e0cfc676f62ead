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

#ifndef EPIKE_CONSTRAINT_HPP
#define EPIKE_CONSTRAINT_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace epike {

inline constexpr std::string_view kTrue = "T";
inline constexpr std::string_view kFalse = "F";

inline uint64_t mix_hash(uint64_t h, uint64_t v) {
  // splitmix64 finalizer over the running value.
  uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t hash_string(std::string_view s);

struct VariableDecl {
  std::string name;
  std::vector<std::string> domain;

  static VariableDecl boolean(std::string name);
  bool is_boolean() const;
  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

// Ordered, immutable set of declared variables shared by every world of a
// model. Value lookups are by index for the solver.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<VariableDecl> decls);

  const std::vector<VariableDecl>& decls() const { return decls_; }
  std::size_t size() const { return decls_.size(); }
  const VariableDecl& at(int index) const { return decls_[index]; }

  // -1 when absent.
  int index_of(std::string_view name) const;
  int value_index(int var, std::string_view value) const;

  uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::vector<VariableDecl> decls_;
  std::unordered_map<std::string, int> index_;
  uint64_t fingerprint_ = 0;
};

// Propositional formula over finite-domain assignments. Immutable and
// cheap to copy; equality is structural with no normalization beyond the
// degenerate cases of conjunction()/disjunction() (0 or 1 operands).
class Constraint {
 public:
  enum class Kind : uint8_t { Top, Bottom, Assign, Not, And, Or };

  Constraint();  // Top

  static Constraint top();
  static Constraint bottom();
  static Constraint assign(std::string variable, std::string value);
  static Constraint negation(Constraint operand);
  static Constraint conjunction(std::vector<Constraint> operands);
  static Constraint disjunction(std::vector<Constraint> operands);
  static Constraint implication(Constraint lhs, Constraint rhs);

  Kind kind() const;
  const std::string& variable() const;
  const std::string& value() const;
  const std::vector<Constraint>& operands() const;
  uint64_t hash() const;

  // Evaluates under a full assignment given as name -> value.
  bool holds(const std::map<std::string, std::string>& assignment) const;
  void collect_variables(std::set<std::string>& out) const;
  std::size_t depth() const;

  friend bool operator==(const Constraint& a, const Constraint& b);
  friend bool operator!=(const Constraint& a, const Constraint& b) { return !(a == b); }

 private:
  struct Node;
  explicit Constraint(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct ConstraintHash {
  std::size_t operator()(const Constraint& c) const { return c.hash(); }
};

// Throws MalformedConstraint when c names an undeclared variable or an
// out-of-domain value.
void validate_constraint(const Vocabulary& vocab, const Constraint& c);

}  // namespace epike

#endif  // EPIKE_CONSTRAINT_HPP
