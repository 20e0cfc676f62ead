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

#ifndef EPIKE_HARNESS_HPP
#define EPIKE_HARNESS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epike/executor.hpp"
#include "epike/scenario.hpp"

namespace epike {

enum class AgentKind : uint8_t { EPike, Pike, Script };
AgentKind parse_agent_kind(const std::string& name);
const char* agent_kind_name(AgentKind k);

// Replays a fixed list of actions; answers questions truthfully from its
// own (EPike) belief state.
class ScriptSession final : public AgentSession {
 public:
  ScriptSession(LibraryPtr lib, std::string ego, PointedState initial,
                std::vector<ActionRecord> script);
  std::optional<PointedAction> decide() override;
  std::size_t remaining() const { return script_.size() - next_; }

 private:
  std::vector<ActionRecord> script_;
  std::size_t next_ = 0;
};

std::unique_ptr<AgentSession> make_session(const Scenario& sc, const std::string& agent,
                                           AgentKind kind, const AgentOptions& opts);

struct RunOptions {
  std::map<std::string, AgentKind> kinds;  // default EPike
  AgentOptions agent;                      // seed is mixed per agent
  int max_steps = 40;
  double wall_clock_ms = 0;  // 0: unbounded
  bool hang_mitigation = false;
  bool deterministic_trace = false;
  // Robustness mode: each round a seeded draw picks which agent is polled
  // first, modelling random response latency. Off keeps ego priority.
  std::optional<uint64_t> latency_seed;
};

struct TraceStep {
  int seq = 0;
  ActionRecord action;
  double elapsed_ms = 0;
  std::string branch;
  std::map<std::string, uint64_t> fingerprints;  // per agent, after observing
};

struct RunOutcome {
  std::string verdict;  // success | failure | hang
  std::string stop_reason;
  std::vector<TraceStep> steps;
  std::map<std::string, std::vector<double>> callback_ms;  // CPU time per decide()
  std::vector<std::string> first_actor;                    // per round that produced an action
  std::map<std::string, std::string> final_branch;
  std::string error;
};

RunOutcome run_pair(const Scenario& sc, const RunOptions& opts);
// Same as run_pair, also returning the sessions for post-run inspection.
RunOutcome run_pair(const Scenario& sc, const RunOptions& opts,
                    std::map<std::string, std::unique_ptr<AgentSession>>& sessions);

std::string trace_jsonl(const RunOutcome& out);
std::vector<TraceStep> parse_trace_jsonl(const std::string& text);

// Feeds a trace through fresh sessions; returns the sequence numbers whose
// recorded fingerprints are not reproduced.
std::vector<int> replay_trace(const Scenario& sc, const RunOptions& opts,
                              const std::vector<TraceStep>& steps);

struct RandomTaskParams {
  int num_variables = 4;
  int num_orders = 2;
  int num_constraints = 3;
  int diff = 1;
  int domain_size = 2;
  uint64_t seed = 1;
  int max_retries = 200;
};

Scenario generate_random_task(const RandomTaskParams& params);

struct SuiteCondition {
  RandomTaskParams params;
  std::string system;  // epike | pike
};

struct SuiteRow {
  RandomTaskParams params;
  std::string system;
  int runs = 0;
  double success_rate = 0;
  double failure_rate = 0;
  double hang_rate = 0;
  double mean_callback_ms = 0;  // ego agent
};

struct SuiteGrid {
  std::vector<RandomTaskParams> conditions;
  std::vector<std::string> systems = {"epike", "pike"};
  int tasks = 10;
  int reps = 2;
  RunOptions run;
};

SuiteGrid parse_suite_grid(const std::string& json_text);
std::vector<SuiteRow> run_suite(const SuiteGrid& grid);
std::string suite_csv(const std::vector<SuiteRow>& rows);

}  // namespace epike

#endif  // EPIKE_HARNESS_HPP
