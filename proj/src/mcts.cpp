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

#include "epike/mcts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "epike/errors.hpp"

namespace epike {

namespace {

constexpr double kTie = 1e-12;

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::SearchAction: return "search-action";
    case Termination::ExplainFailure: return "explain-failure";
    case Termination::AskIfFailure: return "ask-if-failure";
    case Termination::ExplainSuccess: return "explain-success";
  }
  return "search-action";
}

double SearchConfig::penalty(ActionKind k) const {
  auto it = penalties.find(k);
  return it == penalties.end() ? 1.0 : it->second;
}

SearchConfig SearchConfig::for_termination(Termination t) {
  SearchConfig cfg;
  cfg.termination = t;
  switch (t) {
    case Termination::SearchAction:
      cfg.exploration = 4.0;
      cfg.ego_kinds = {ActionKind::Execute, ActionKind::Noop, ActionKind::Intent,
                       ActionKind::Explain, ActionKind::Ask};
      cfg.other_kinds = {ActionKind::Execute, ActionKind::Noop, ActionKind::Explain};
      break;
    case Termination::ExplainFailure:
    case Termination::ExplainSuccess:
      cfg.exploration = std::sqrt(2.0);
      cfg.ego_kinds = {ActionKind::Explain, ActionKind::Ask};
      break;
    case Termination::AskIfFailure:
      cfg.exploration = std::sqrt(2.0);
      cfg.ego_kinds = {ActionKind::Ask};
      break;
  }
  return cfg;
}

DecisionValue backup_decision(const std::vector<ActionScore>& actions) {
  bool perfect_execution = false;
  for (const auto& a : actions) {
    if (a.execute && a.subjective >= 1.0 - kTie) perfect_execution = true;
  }
  double best = 0;
  for (const auto& a : actions) {
    if (a.noop && perfect_execution) continue;
    best = std::max(best, a.subjective);
  }
  if (best <= 0) return {1.0, 0.0};
  double total = 0;
  for (const auto& a : actions) {
    if (a.noop && perfect_execution) continue;
    if (a.subjective >= best - kTie) total += a.subjective;
  }
  DecisionValue out{0.0, 0.0};
  for (const auto& a : actions) {
    if (a.noop && perfect_execution) continue;
    if (a.subjective < best - kTie) continue;
    const double p = a.subjective / total;
    if (a.noop) {
      out.p_noop += p;
    } else {
      out.expected += p * a.objective;
    }
  }
  return out;
}

double backup_predict(const std::vector<DecisionValue>& agents) {
  double all_noop = 1.0;
  double expected = 0;
  double acting = 0;
  for (const auto& d : agents) {
    all_noop *= d.p_noop;
    expected += d.expected;
    acting += 1.0 - d.p_noop;
  }
  if (acting <= 0) return 0.0;
  return (1.0 - all_noop) * (expected / acting);
}

double backup_split(const std::vector<double>& child_scores, double penalty) {
  if (child_scores.empty()) return 0.0;
  return penalty * *std::min_element(child_scores.begin(), child_scores.end());
}

std::optional<double> terminal_utility(const PointedState& g, const std::string& ego,
                                       const SearchConfig& cfg, int executed) {
  const auto& agents = g.model->agents();
  auto everyone_believes = [&](const Formula& f) {
    std::vector<Formula> ops;
    for (const auto& a : agents) ops.push_back(Formula::belief(a, f));
    return evaluate(g, Formula::conjunction(std::move(ops)));
  };
  switch (cfg.termination) {
    case Termination::SearchAction:
      if (evaluate(g, Formula::failure())) return 0.0;
      if (evaluate(g, Formula::success())) return 1.0;
      if (executed >= cfg.horizon) return 1.0;
      return std::nullopt;
    case Termination::ExplainFailure:
      if (everyone_believes(Formula::failure())) return 1.0;
      return std::nullopt;
    case Termination::AskIfFailure:
      if (evaluate(g, Formula::belief(ego, Formula::failure())) ||
          evaluate(g, Formula::belief(ego, Formula::negation(Formula::failure())))) {
        return 1.0;
      }
      return std::nullopt;
    case Termination::ExplainSuccess:
      if (everyone_believes(Formula::success())) return 1.0;
      return std::nullopt;
  }
  return std::nullopt;
}

bool detect_implicit_revision(const PointedState& before, const PointedAction& act) {
  if (act.meta.kind != ActionKind::Execute && act.meta.kind != ActionKind::Intent) return false;
  UpdateTrace up;
  try {
    up = product_update_traced(before, act);
  } catch (const InapplicableAction&) {
    return false;
  }
  const PlausibilityModel& m0 = *before.model;
  const PlausibilityModel& m1 = *up.state.model;
  const int na = static_cast<int>(m0.agents().size());
  for (int w1 : world_indices(up.state.designated)) {
    const int w0 = up.origin[w1].first;
    for (int b = 0; b < na; ++b) {
      const WorldSet prior = m0.most_plausible(b, w0);
      for (int v : world_indices(m1.most_plausible(b, w1))) {
        if (!has_world(prior, up.origin[v].first)) return true;
      }
    }
  }
  return false;
}

namespace {

enum class NodeType : uint8_t { Split, Predict, Decision };

struct Edge {
  PointedAction act;
  int subj = -1;
  int obj = -1;  // == subj when shared, -1 for noop
  int visits = 0;
  bool vetoed = false;
  bool built = false;
};

struct Node {
  NodeType type = NodeType::Predict;
  PointedState state;
  int executed = 0;
  int actions = 0;
  uint64_t waiting = 0;  // agents whose consecutive noops led here
  int visits = 0;
  double value = 0;
  std::vector<int> children;

  // Split
  ActionKind kind = ActionKind::Noop;

  // Predict
  std::optional<double> terminal;
  double rollout_sum = 0;
  int rollouts = 0;
  bool expanded = false;

  // Decision
  int agent = -1;
  PointedState persp;
  std::vector<Edge> edges;
  int tiers_open = 0;
  DecisionValue dv;
};

class Search {
 public:
  Search(const std::string& ego, const SearchConfig& cfg, const LibraryPtr& lib, std::ostream* trace)
      : ego_(ego), cfg_(cfg), lib_(lib), trace_(trace), rng_(cfg.seed) {}

  SearchResult run(const PointedState& s) {
    const int ego = s.model->agent_index(ego_);
    ego_index_ = ego;
    const PointedState root_state{s.model, s.model->min_plausible(ego, s.designated)};
    Node root;
    root.type = NodeType::Decision;
    root.state = root_state;
    root.persp = root_state;
    root.agent = ego;
    nodes_.push_back(std::move(root));

    const auto start = std::chrono::steady_clock::now();
    SearchResult result;
    result.stopped_by = "iterations";
    for (int it = 0; it < cfg_.iteration_cap; ++it) {
      if (cfg_.time_budget_ms > 0) {
        const double elapsed = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        if (elapsed >= cfg_.time_budget_ms) {
          result.stopped_by = "time";
          break;
        }
      }
      if (!iterate(it)) {
        result.stopped_by = "exhausted";
        break;
      }
      ++result.iterations;
    }

    const Node& r = nodes_[0];
    int best = -1;
    double best_score = 0;
    for (std::size_t i = 0; i < r.edges.size(); ++i) {
      const Edge& e = r.edges[i];
      const double sc = edge_subjective(e);
      ChildReport rep{to_record(e.act), sc, e.visits, e.vetoed};
      result.children.push_back(rep);
      if (e.vetoed || e.visits == 0 || sc <= 0) continue;
      if (best < 0 || sc > best_score + kTie) {
        best = static_cast<int>(i);
        best_score = sc;
      } else if (sc >= best_score - kTie && r.edges[best].act.meta.kind == ActionKind::Noop &&
                 e.act.meta.kind != ActionKind::Noop) {
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) {
      result.score = best_score;
      if (r.edges[best].act.meta.kind == ActionKind::Noop) {
        result.chose_noop = true;
      } else {
        result.action = r.edges[best].act;
      }
    }
    return result;
  }

 private:
  const std::set<ActionKind>& kinds_for(int agent) const {
    return agent == ego_index_ ? cfg_.ego_kinds : cfg_.other_kinds;
  }

  double edge_subjective(const Edge& e) const {
    if (e.vetoed || e.subj < 0) return 0.0;
    return nodes_[e.subj].visits > 0 ? nodes_[e.subj].value : 0.0;
  }
  double edge_objective(const Edge& e) const {
    if (e.vetoed || e.act.meta.kind == ActionKind::Noop) return 0.0;
    if (e.obj < 0 || nodes_[e.obj].visits == 0) return edge_subjective(e);
    return nodes_[e.obj].value;
  }

  int new_split(const PointedState& state, const Node& parent, const PointedAction& act) {
    Node n;
    n.type = NodeType::Split;
    n.state = state;
    n.kind = act.meta.kind;
    n.executed = parent.executed + (act.meta.kind == ActionKind::Execute ? 1 : 0);
    n.actions = parent.actions + 1;
    if (act.meta.kind == ActionKind::Noop) {
      n.waiting = parent.waiting | (uint64_t{1} << state.model->agent_index(act.meta.actor));
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int new_predict(const PointedState& g, const Node& split) {
    Node n;
    n.type = NodeType::Predict;
    n.state = g;
    n.executed = split.executed;
    n.actions = split.actions;
    n.waiting = split.waiting;
    const int na = static_cast<int>(g.model->agents().size());
    if (auto t = terminal_utility(g, ego_, cfg_, n.executed)) {
      n.terminal = *t;
    } else if (n.actions >= cfg_.action_cap) {
      n.terminal = 0.0;
    } else if (n.waiting == (na >= 64 ? ~uint64_t{0} : (uint64_t{1} << na) - 1)) {
      n.terminal = 0.0;
    }
    if (n.terminal) n.value = *n.terminal;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int new_decision(const Node& predict, int agent) {
    Node n;
    n.type = NodeType::Decision;
    n.state = predict.state;
    n.persp = local_perspective(predict.state, agent);
    n.agent = agent;
    n.executed = predict.executed;
    n.actions = predict.actions;
    n.waiting = predict.waiting;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Opens candidate tiers lazily: executions, then noop, then communication
  // once no earlier action reaches the best communication penalty.
  void open_tiers(int id) {
    static const std::vector<std::set<ActionKind>> kTiers = {
        {ActionKind::Execute}, {ActionKind::Noop},
        {ActionKind::Intent, ActionKind::Explain, ActionKind::Ask}};
    while (nodes_[id].tiers_open < static_cast<int>(kTiers.size())) {
      Node& n = nodes_[id];
      bool all_visited = true;
      double best = 0;
      for (const auto& e : n.edges) {
        if (e.vetoed) continue;
        if (e.visits == 0) all_visited = false;
        best = std::max(best, edge_subjective(e));
      }
      if (!all_visited) return;
      const int tier = n.tiers_open;
      std::set<ActionKind> kinds;
      for (ActionKind k : kTiers[tier]) {
        if (kinds_for(n.agent).count(k)) kinds.insert(k);
      }
      if (tier == 2 && !kinds.empty()) {
        double bound = 0;
        for (ActionKind k : kinds) bound = std::max(bound, cfg_.penalty(k));
        if (!n.edges.empty() && best >= bound) return;
      }
      n.tiers_open = tier + 1;
      if (kinds.empty()) continue;
      const std::string agent = n.state.model->agents()[n.agent];
      std::vector<PointedAction> acts =
          candidate_actions(n.persp, agent, kinds, *lib_, cfg_.candidates);
      for (auto& act : acts) {
        Edge e;
        e.vetoed = detect_implicit_revision(nodes_[id].persp, act);
        e.act = std::move(act);
        nodes_[id].edges.push_back(std::move(e));
      }
    }
  }

  void build_edge(int id, int ei) {
    Edge& e = nodes_[id].edges[ei];
    e.built = true;
    const PointedAction act = e.act;
    const PointedState persp = nodes_[id].persp;
    const PointedState state = nodes_[id].state;
    try {
      PointedState subj = product_update(persp, act);
      int s = new_split(subj, nodes_[id], act);
      int o = -1;
      if (act.meta.kind != ActionKind::Noop) {
        if (persp.designated == state.designated) {
          o = s;
        } else {
          o = new_split(product_update(state, act), nodes_[id], act);
        }
      }
      nodes_[id].edges[ei].subj = s;
      nodes_[id].edges[ei].obj = o;
    } catch (const InapplicableAction&) {
      nodes_[id].edges[ei].vetoed = true;
    }
  }

  int select_edge(int id) {
    open_tiers(id);
    Node& n = nodes_[id];
    int pick = -1;
    double best = -std::numeric_limits<double>::infinity();
    const double log_n = std::log(std::max(1, n.visits));
    for (std::size_t i = 0; i < n.edges.size(); ++i) {
      const Edge& e = n.edges[i];
      if (e.vetoed) continue;
      if (e.visits == 0) return static_cast<int>(i);
      const double ucb =
          edge_subjective(e) + cfg_.exploration * std::sqrt(log_n / static_cast<double>(e.visits));
      if (ucb > best) {
        best = ucb;
        pick = static_cast<int>(i);
      }
    }
    return pick;
  }

  double rollout(PointedState g, int executed) {
    if (cfg_.termination != Termination::SearchAction) return 0.0;
    const auto& agents = g.model->agents();
    std::vector<int> order(agents.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int step = 0; step <= cfg_.horizon; ++step) {
      if (auto t = terminal_utility(g, ego_, cfg_, executed)) return *t;
      std::shuffle(order.begin(), order.end(), rng_);
      bool acted = false;
      for (int a : order) {
        if (!kinds_for(a).count(ActionKind::Execute)) continue;
        std::vector<std::string> options = believed_feasible_executions(g, agents[a], *lib_);
        if (options.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
        try {
          g = product_update(g, mk_execution_action(*lib_, options[pick(rng_)]));
        } catch (const InapplicableAction&) {
          return 0.0;
        }
        ++executed;
        acted = true;
        break;
      }
      if (!acted) return 0.0;
    }
    return terminal_utility(g, ego_, cfg_, executed).value_or(1.0);
  }

  void refresh(int id) {
    Node& n = nodes_[id];
    switch (n.type) {
      case NodeType::Split: {
        std::vector<double> scores;
        for (int c : n.children) {
          if (nodes_[c].visits > 0) scores.push_back(nodes_[c].value);
        }
        n.value = backup_split(scores, cfg_.penalty(n.kind));
        return;
      }
      case NodeType::Predict: {
        if (n.terminal) return;
        bool ready = n.expanded;
        std::vector<DecisionValue> dvs;
        for (int c : n.children) {
          if (nodes_[c].visits == 0) ready = false;
          dvs.push_back(nodes_[c].dv);
        }
        if (ready) {
          n.value = backup_predict(dvs);
        } else if (n.rollouts > 0) {
          n.value = n.rollout_sum / n.rollouts;
        }
        return;
      }
      case NodeType::Decision: {
        std::vector<ActionScore> scores;
        for (const auto& e : n.edges) {
          if (e.visits == 0 && !e.vetoed) continue;
          scores.push_back({edge_subjective(e), edge_objective(e),
                            e.act.meta.kind == ActionKind::Noop,
                            e.act.meta.kind == ActionKind::Execute});
        }
        n.dv = backup_decision(scores);
        n.value = n.dv.expected;
        return;
      }
    }
  }

  // One selection / expansion / simulation / backup pass.
  bool iterate(int it) {
    std::vector<int> path{0};
    std::vector<std::string> chosen;
    int id = 0;
    double leaf = 0;
    while (true) {
      Node& n = nodes_[id];
      if (n.type == NodeType::Decision) {
        const int ei = select_edge(id);
        if (ei < 0) {
          if (id == 0) return false;
          break;
        }
        if (!nodes_[id].edges[ei].built) build_edge(id, ei);
        Edge& e = nodes_[id].edges[ei];
        ++e.visits;
        if (e.vetoed) break;
        if (trace_) chosen.push_back(describe(e.act));
        int next = e.subj;
        if (e.obj >= 0 && e.obj != e.subj && nodes_[e.obj].visits < nodes_[e.subj].visits) {
          next = e.obj;
        }
        id = next;
      } else if (n.type == NodeType::Split) {
        if (n.children.empty()) {
          for (const auto& g : split_globals(n.state)) {
            int c = new_predict(g, nodes_[id]);
            nodes_[id].children.push_back(c);
          }
        }
        const Node& s = nodes_[id];
        int pick = -1;
        double best = -std::numeric_limits<double>::infinity();
        const double log_n = std::log(std::max(1, s.visits));
        for (int c : s.children) {
          const Node& child = nodes_[c];
          if (child.visits == 0) {
            pick = c;
            break;
          }
          const double ucb = (1.0 - child.value) +
                             cfg_.exploration * std::sqrt(log_n / static_cast<double>(child.visits));
          if (ucb > best) {
            best = ucb;
            pick = c;
          }
        }
        id = pick;
      } else {
        if (n.terminal) {
          leaf = *n.terminal;
          break;
        }
        if (n.visits == 0) {
          leaf = rollout(n.state, n.executed);
          nodes_[id].rollout_sum += leaf;
          nodes_[id].rollouts += 1;
          break;
        }
        if (!n.expanded) {
          nodes_[id].expanded = true;
          const int na = static_cast<int>(n.state.model->agents().size());
          for (int a = 0; a < na; ++a) {
            if (nodes_[id].waiting & (uint64_t{1} << a)) continue;
            int c = new_decision(nodes_[id], a);
            nodes_[id].children.push_back(c);
          }
        }
        const Node& p = nodes_[id];
        int pick = -1;
        for (int c : p.children) {
          if (pick < 0 || nodes_[c].visits < nodes_[pick].visits) pick = c;
        }
        id = pick;
      }
      path.push_back(id);
    }
    for (auto rit = path.rbegin(); rit != path.rend(); ++rit) {
      nodes_[*rit].visits += 1;
      if (*rit != 0) refresh(*rit);
    }
    if (trace_) {
      *trace_ << "{\"iteration\":" << it << ",\"path\":[";
      for (std::size_t i = 0; i < path.size(); ++i) *trace_ << (i ? "," : "") << path[i];
      *trace_ << "],\"actions\":[";
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        *trace_ << (i ? "," : "") << '"' << chosen[i] << '"';
      }
      *trace_ << "],\"leaf\":" << leaf << "}\n";
    }
    return true;
  }

  std::string ego_;
  int ego_index_ = 0;
  const SearchConfig& cfg_;
  LibraryPtr lib_;
  std::ostream* trace_;
  std::mt19937_64 rng_;
  std::vector<Node> nodes_;
};

}  // namespace

SearchResult search(const PointedState& s, const std::string& ego, const SearchConfig& cfg,
                    const LibraryPtr& lib, std::ostream* trace) {
  if (!s.model || s.designated == 0) throw InvalidScenario("search needs a non-empty state");
  Search engine(ego, cfg, lib, trace);
  return engine.run(s);
}

}  // namespace epike
