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

#include "epike/model.hpp"

#include <algorithm>
#include <bit>

#include "epike/errors.hpp"

namespace epike {

int world_count(WorldSet s) { return std::popcount(s); }

std::vector<int> world_indices(WorldSet s) {
  std::vector<int> out;
  while (s) {
    int i = std::countr_zero(s);
    out.push_back(i);
    s &= s - 1;
  }
  return out;
}

Relation close_preorder(Relation rel, int n) {
  rel.resize(n, 0);
  for (int i = 0; i < n; ++i) rel[i] |= world_bit(i);
  // Warshall over bit rows.
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (has_world(rel[i], k)) rel[i] |= rel[k];
    }
  }
  return rel;
}

namespace {

// Components of the symmetric-transitive closure of one relation.
std::vector<WorldSet> components(const Relation& rel, int n) {
  std::vector<WorldSet> sym(n, 0);
  for (int i = 0; i < n; ++i) {
    sym[i] |= world_bit(i) | rel[i];
    for (int j : world_indices(rel[i])) sym[j] |= world_bit(i);
  }
  std::vector<WorldSet> cc(n, 0);
  for (int i = 0; i < n; ++i) {
    if (cc[i]) continue;
    WorldSet comp = world_bit(i);
    WorldSet frontier = comp;
    while (frontier) {
      WorldSet next = 0;
      for (int j : world_indices(frontier)) next |= sym[j];
      frontier = next & ~comp;
      comp |= next;
    }
    for (int j : world_indices(comp)) cc[j] = comp;
  }
  return cc;
}

WorldSet min_of(const Relation& rel, WorldSet s) {
  WorldSet out = 0;
  for (int w : world_indices(s)) {
    bool minimal = true;
    for (int v : world_indices(s)) {
      if (v != w && has_world(rel[v], w) && !has_world(rel[w], v)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out |= world_bit(w);
  }
  return out;
}

}  // namespace

struct PlausibilityModel::Cache {
  std::mutex mutex;
  std::unordered_map<Formula, WorldSet, FormulaHash> denotations;
};

PlausibilityModel::PlausibilityModel(std::vector<std::string> agents, std::vector<World> worlds,
                                     std::vector<Relation> order,
                                     std::shared_ptr<const SuccessOracle> oracle)
    : agents_(std::move(agents)),
      worlds_(std::move(worlds)),
      order_(std::move(order)),
      oracle_(std::move(oracle)),
      cache_(std::make_unique<Cache>()) {
  const int n = size();
  if (n == 0) throw InvalidScenario("a plausibility model needs at least one world");
  if (n > kMaxWorlds) throw InvalidScenario("a plausibility model holds at most 64 worlds");
  if (order_.size() != agents_.size()) {
    throw InvalidScenario("one plausibility relation per agent is required");
  }
  for (std::size_t i = 0; i < worlds_.size(); ++i) {
    for (std::size_t j = i + 1; j < worlds_.size(); ++j) {
      if (worlds_[i].id == worlds_[j].id) {
        throw InvalidScenario("duplicate world id '" + worlds_[i].id + "'");
      }
    }
  }
  uint64_t h = 0xd0c;
  for (const auto& a : agents_) h = mix_hash(h, hash_string(a));
  for (const auto& w : worlds_) h = mix_hash(mix_hash(h, hash_string(w.id)), w.kb.fingerprint());
  for (auto& rel : order_) {
    rel.resize(n, 0);
    for (auto& row : rel) {
      row &= all();
      h = mix_hash(h, row);
    }
  }
  fingerprint_ = h;

  for (const auto& rel : order_) {
    auto cc = components(rel, n);
    std::vector<WorldSet> mins(n, 0);
    for (int i = 0; i < n; ++i) mins[i] = min_of(rel, cc[i]);
    cc_.push_back(std::move(cc));
    min_cc_.push_back(std::move(mins));
  }
}

PlausibilityModel::~PlausibilityModel() = default;

WorldSet PlausibilityModel::all() const {
  return size() == kMaxWorlds ? ~WorldSet{0} : world_bit(size()) - 1;
}

int PlausibilityModel::agent_index(const std::string& name) const {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i] == name) return static_cast<int>(i);
  }
  throw UnknownAgent(name);
}

int PlausibilityModel::world_index(const std::string& id) const {
  for (std::size_t i = 0; i < worlds_.size(); ++i) {
    if (worlds_[i].id == id) return static_cast<int>(i);
  }
  throw UnknownWorld(id);
}

WorldSet PlausibilityModel::min_plausible(int agent, WorldSet s) const {
  return min_of(order_[agent], s);
}

WorldSet PlausibilityModel::denotation(const Formula& f) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->denotations.find(f);
    if (it != cache_->denotations.end()) return it->second;
  }
  WorldSet result = compute(f);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  cache_->denotations.emplace(f, result);
  return result;
}

WorldSet PlausibilityModel::compute(const Formula& f) const {
  const int n = size();
  WorldSet out = 0;
  switch (f.kind()) {
    case Formula::Kind::In:
      for (int i = 0; i < n; ++i) {
        if (worlds_[i].kb.contains(f.constraint())) out |= world_bit(i);
      }
      return out;
    case Formula::Kind::Entailed:
      for (int i = 0; i < n; ++i) {
        if (worlds_[i].kb.entails(f.constraint())) out |= world_bit(i);
      }
      return out;
    case Formula::Kind::Success:
      if (!oracle_) throw MalformedFormula("'suc' needs a plan library bound to the model");
      for (int i = 0; i < n; ++i) {
        if (oracle_->holds(worlds_[i].kb)) out |= world_bit(i);
      }
      return out;
    case Formula::Kind::Not:
      return all() & ~denotation(f.operands()[0]);
    case Formula::Kind::And:
      out = all();
      for (const auto& op : f.operands()) {
        out &= denotation(op);
        if (!out) break;
      }
      return out;
    case Formula::Kind::Belief: {
      auto it = std::find(agents_.begin(), agents_.end(), f.agent());
      if (it == agents_.end()) throw UnknownAgent(f.agent());
      const int a = static_cast<int>(it - agents_.begin());
      const WorldSet cond = f.condition().is_top() ? all() : denotation(f.condition());
      const WorldSet body = denotation(f.body());
      WorldSet done = 0;
      for (int i = 0; i < n; ++i) {
        if (has_world(done, i)) continue;
        // The verdict is constant across a component.
        const WorldSet comp = cc_[a][i];
        done |= comp;
        const WorldSet best = cond == all() ? min_cc_[a][i] : min_of(order_[a], cond & comp);
        if ((best & ~body) == 0) out |= comp;
      }
      return out;
    }
  }
  return out;
}

std::vector<ModelViolation> PlausibilityModel::validate() const {
  std::vector<ModelViolation> out;
  const int n = size();
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    const Relation& rel = order_[a];
    const std::string& agent = agents_[a];
    for (int i = 0; i < n; ++i) {
      if (!has_world(rel[i], i)) out.push_back({"reflexivity", agent, {worlds_[i].id}});
    }
    for (int i = 0; i < n; ++i) {
      for (int j : world_indices(rel[i])) {
        for (int k : world_indices(rel[j])) {
          if (!has_world(rel[i], k)) {
            out.push_back({"transitivity", agent, {worlds_[i].id, worlds_[j].id, worlds_[k].id}});
          }
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j : world_indices(cc_[a][i])) {
        if (j > i && !has_world(rel[i], j) && !has_world(rel[j], i)) {
          out.push_back({"local-connectedness", agent, {worlds_[i].id, worlds_[j].id}});
        }
      }
    }
    WorldSet seen = 0;
    for (int i = 0; i < n; ++i) {
      if (has_world(seen, i)) continue;
      seen |= cc_[a][i];
      if (min_cc_[a][i] == 0) {
        std::vector<std::string> ids;
        for (int j : world_indices(cc_[a][i])) ids.push_back(worlds_[j].id);
        out.push_back({"well-foundedness", agent, std::move(ids)});
      }
    }
  }
  return out;
}

uint64_t PointedState::fingerprint() const {
  return mix_hash(model ? model->fingerprint() : 0, designated);
}

std::vector<std::string> cc(const PlausibilityModel& m, const std::string& agent,
                            const std::string& world) {
  WorldSet s = m.component(m.agent_index(agent), m.world_index(world));
  std::vector<std::string> out;
  for (int i : world_indices(s)) out.push_back(m.worlds()[i].id);
  return out;
}

std::vector<std::string> min_plausible(const PlausibilityModel& m, const std::string& agent,
                                       const std::vector<std::string>& worlds) {
  const int a = m.agent_index(agent);
  WorldSet s = 0;
  for (const auto& id : worlds) s |= world_bit(m.world_index(id));
  std::vector<std::string> out;
  for (int i : world_indices(m.min_plausible(a, s))) out.push_back(m.worlds()[i].id);
  return out;
}

bool evaluate(const PointedState& s, const Formula& f) {
  return (s.designated & ~s.model->denotation(f)) == 0;
}

PointedState local_perspective(const PointedState& s, int agent) {
  WorldSet closure = 0;
  for (int w : world_indices(s.designated)) closure |= s.model->component(agent, w);
  return {s.model, s.model->min_plausible(agent, closure)};
}

PointedState local_perspective(const PointedState& s, const std::string& agent) {
  return local_perspective(s, s.model->agent_index(agent));
}

std::vector<PointedState> split_globals(const PointedState& s) {
  std::vector<int> idx = world_indices(s.designated);
  const auto& worlds = s.model->worlds();
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return worlds[a].id < worlds[b].id; });
  std::vector<PointedState> out;
  for (int i : idx) out.push_back({s.model, world_bit(i)});
  return out;
}

std::vector<ModelViolation> validate_model(const PlausibilityModel& m) { return m.validate(); }

std::vector<std::string> designated_ids(const PointedState& s) {
  std::vector<std::string> out;
  for (int i : world_indices(s.designated)) out.push_back(s.model->worlds()[i].id);
  return out;
}

}  // namespace epike
