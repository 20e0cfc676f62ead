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

#ifndef EPIKE_KB_HPP
#define EPIKE_KB_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "epike/constraint.hpp"

namespace epike {

// Value index per variable of a Vocabulary; -1 means unassigned.
using Assignment = std::vector<int>;

// Constraint set over a shared vocabulary. Set semantics under structural
// equality; every query depends only on the set, never on insertion order.
class KnowledgeBase {
 public:
  KnowledgeBase();
  explicit KnowledgeBase(std::shared_ptr<const Vocabulary> vocab,
                         std::vector<Constraint> constraints = {});

  KnowledgeBase add(const Constraint& c) const;
  KnowledgeBase remove(const Constraint& c) const;

  bool contains(const Constraint& c) const;
  bool entails(const Constraint& c) const;
  bool sat(const Constraint& c) const;
  bool consistent() const;

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Vocabulary& vocabulary() const { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& vocabulary_ptr() const { return vocab_; }
  uint64_t fingerprint() const { return fingerprint_; }

 private:
  void refresh_fingerprint();

  std::shared_ptr<const Vocabulary> vocab_;
  std::vector<Constraint> constraints_;
  uint64_t fingerprint_ = 0;
};

// Pluggable satisfiability backend.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual bool satisfiable(const Vocabulary& vocab,
                           std::span<const Constraint> constraints) = 0;
  // Distinct projections onto `project` (variable indices) of the full
  // satisfying assignments, sorted.
  virtual std::vector<Assignment> project_models(const Vocabulary& vocab,
                                                 std::span<const Constraint> constraints,
                                                 std::span<const int> project) = 0;
};

// Exhaustive truth-table enumeration. Exponential; used as the oracle.
class EnumerationSolver final : public SolverBackend {
 public:
  bool satisfiable(const Vocabulary& vocab,
                   std::span<const Constraint> constraints) override;
  std::vector<Assignment> project_models(const Vocabulary& vocab,
                                         std::span<const Constraint> constraints,
                                         std::span<const int> project) override;
};

// Chronological backtracking with three-valued evaluation of every
// asserted constraint under the partial assignment. Assertions are kept on
// a stack so a knowledge base can be loaded once and probed repeatedly.
class BacktrackingSolver final : public SolverBackend {
 public:
  BacktrackingSolver();
  ~BacktrackingSolver() override;

  void reset(std::shared_ptr<const Vocabulary> vocab);
  void push();
  void pop();
  void add(const Constraint& c);
  bool check();

  bool satisfiable(const Vocabulary& vocab,
                   std::span<const Constraint> constraints) override;
  std::vector<Assignment> project_models(const Vocabulary& vocab,
                                         std::span<const Constraint> constraints,
                                         std::span<const int> project) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Cached query front end shared by all knowledge bases. Results are keyed
// by (constraint-set fingerprint, query hash).
class QueryEngine {
 public:
  static QueryEngine& shared();

  bool sat(const KnowledgeBase& kb, const Constraint& query);
  std::vector<Assignment> project_models(const KnowledgeBase& kb, std::span<const int> vars);

  void clear();
  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<uint64_t, uint64_t>& k) const {
      return static_cast<std::size_t>(mix_hash(k.first, k.second));
    }
  };
  std::mutex mutex_;
  std::unordered_map<std::pair<uint64_t, uint64_t>, bool, KeyHash> sat_cache_;
  uint64_t hits_ = 0;
  uint64_t misses_ = 0;
};

// Assignments to `vars` (names) that extend to full models of kb, as value
// tuples in `vars` order. Exhaustive; desk-scale only.
std::vector<std::vector<std::string>> enumerate_models(const KnowledgeBase& kb,
                                                       const std::vector<std::string>& vars);

}  // namespace epike

#endif  // EPIKE_KB_HPP
