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

#ifndef EPIKE_MODEL_HPP
#define EPIKE_MODEL_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "epike/formula.hpp"
#include "epike/kb.hpp"

namespace epike {

// Worlds are addressed by index; a set of worlds is a bit mask, which caps
// a model at 64 worlds.
using WorldSet = uint64_t;
inline constexpr int kMaxWorlds = 64;

inline WorldSet world_bit(int i) { return WorldSet{1} << i; }
inline bool has_world(WorldSet s, int i) { return (s >> i) & 1u; }
int world_count(WorldSet s);
std::vector<int> world_indices(WorldSet s);

// Decides the `suc` atom on a single world's knowledge base.
class SuccessOracle {
 public:
  virtual ~SuccessOracle() = default;
  virtual bool holds(const KnowledgeBase& kb) const = 0;
};

struct World {
  std::string id;
  KnowledgeBase kb;
};

// Per-agent plausibility relation: row i holds every j with w_i <=_a w_j
// ("w_i is at least as plausible as w_j").
using Relation = std::vector<WorldSet>;

// Reflexive-transitive closure of an edge relation over n worlds.
Relation close_preorder(Relation rel, int n);

struct ModelViolation {
  std::string property;  // reflexivity | transitivity | local-connectedness | well-foundedness
  std::string agent;
  std::vector<std::string> witnesses;
};

// Plausibility model whose worlds carry knowledge bases. The relation is
// stored exactly as given; callers close it with close_preorder() first
// when building from arrows. Immutable once built, shared via shared_ptr.
class PlausibilityModel {
 public:
  PlausibilityModel(std::vector<std::string> agents, std::vector<World> worlds,
                    std::vector<Relation> order,
                    std::shared_ptr<const SuccessOracle> oracle = nullptr);
  ~PlausibilityModel();
  PlausibilityModel(const PlausibilityModel&) = delete;
  PlausibilityModel& operator=(const PlausibilityModel&) = delete;

  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<World>& worlds() const { return worlds_; }
  int size() const { return static_cast<int>(worlds_.size()); }
  WorldSet all() const;

  int agent_index(const std::string& name) const;  // throws UnknownAgent
  int world_index(const std::string& id) const;    // throws UnknownWorld

  bool leq(int agent, int i, int j) const { return has_world(order_[agent][i], j); }
  bool strictly_less(int agent, int i, int j) const {
    return leq(agent, i, j) && !leq(agent, j, i);
  }
  const Relation& relation(int agent) const { return order_[agent]; }

  WorldSet component(int agent, int world) const { return cc_[agent][world]; }
  WorldSet most_plausible(int agent, int world) const { return min_cc_[agent][world]; }
  WorldSet min_plausible(int agent, WorldSet s) const;

  // [f]_M as a world set; memoized per formula.
  WorldSet denotation(const Formula& f) const;

  const std::shared_ptr<const SuccessOracle>& success_oracle() const { return oracle_; }
  uint64_t fingerprint() const { return fingerprint_; }

  std::vector<ModelViolation> validate() const;

 private:
  WorldSet compute(const Formula& f) const;

  std::vector<std::string> agents_;
  std::vector<World> worlds_;
  std::vector<Relation> order_;
  std::vector<std::vector<WorldSet>> cc_;
  std::vector<std::vector<WorldSet>> min_cc_;
  std::shared_ptr<const SuccessOracle> oracle_;
  uint64_t fingerprint_ = 0;

  struct Cache;
  std::unique_ptr<Cache> cache_;
};

using ModelPtr = std::shared_ptr<const PlausibilityModel>;

struct PointedState {
  ModelPtr model;
  WorldSet designated = 0;

  bool is_global() const { return world_count(designated) == 1; }
  uint64_t fingerprint() const;
};

// id-based queries (the textual surface used by tests and tools)
std::vector<std::string> cc(const PlausibilityModel& m, const std::string& agent,
                            const std::string& world);
std::vector<std::string> min_plausible(const PlausibilityModel& m, const std::string& agent,
                                       const std::vector<std::string>& worlds);

bool evaluate(const PointedState& s, const Formula& f);
// The designated set becomes min_a of the union of a's components around
// the current designated worlds.
PointedState local_perspective(const PointedState& s, const std::string& agent);
PointedState local_perspective(const PointedState& s, int agent);
std::vector<PointedState> split_globals(const PointedState& s);
std::vector<ModelViolation> validate_model(const PlausibilityModel& m);

std::vector<std::string> designated_ids(const PointedState& s);

}  // namespace epike

#endif  // EPIKE_MODEL_HPP
