/* Copyright 2026 The EPike Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * Stable C interface to the engine. Every function returns an epk_status;
 * on failure the message is available from epk_last_error() on the same
 * thread until the next call. Strings returned through `char**` are owned
 * by the caller and released with epk_string_free(). Structured inputs and
 * outputs are JSON documents.
 */

#ifndef EPIKE_EPIKE_H
#define EPIKE_EPIKE_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EPK_API __declspec(dllexport)
#else
#define EPK_API __attribute__((visibility("default")))
#endif

typedef enum epk_status {
  EPK_OK = 0,
  EPK_ERR_ARGUMENT = 1,      /* null handle or malformed options */
  EPK_ERR_PARSE = 2,         /* constraint, formula or JSON syntax */
  EPK_ERR_INVALID = 3,       /* scenario, library or model fails validation */
  EPK_ERR_UNKNOWN_NAME = 4,  /* agent, world or time point not declared */
  EPK_ERR_INAPPLICABLE = 5,  /* action precondition fails or not offered */
  EPK_ERR_CONTRADICTION = 6, /* observation irreconcilable with beliefs */
  EPK_ERR_GENERATION = 7,    /* random task parameters unsatisfiable */
  EPK_ERR_INTERNAL = 8
} epk_status;

typedef struct epk_scenario epk_scenario;
typedef struct epk_session epk_session;
typedef struct epk_live epk_live;

EPK_API const char* epk_version(void);
EPK_API const char* epk_last_error(void);
EPK_API const char* epk_status_name(epk_status status);
EPK_API void epk_string_free(char* s);

/* Scenarios */
EPK_API epk_status epk_scenario_load(const char* path, epk_scenario** out);
EPK_API epk_status epk_scenario_parse(const char* json, epk_scenario** out);
/* params: {num_variables, num_orders, num_constraints, diff, domain_size, seed} */
EPK_API epk_status epk_scenario_generate(const char* params_json, epk_scenario** out);
EPK_API epk_status epk_scenario_to_json(const epk_scenario* sc, char** out);
EPK_API epk_status epk_scenario_check(const epk_scenario* sc, int* valid, char** report);
/* Truth of a formula in `agent`'s view, or in the true world if agent is NULL. */
EPK_API epk_status epk_scenario_eval(const epk_scenario* sc, const char* agent,
                                     const char* formula, int* result);
EPK_API void epk_scenario_free(epk_scenario* sc);

/*
 * Simulation. options: {agents: "epike,pike", seed, iterations, timeout_ms,
 * horizon, max_steps, wall_clock_ms, hang_mitigation, deterministic,
 * latency_seed}. The result holds verdict, stop_reason, error, steps,
 * mean_callback_ms per agent, first_actor and the JSONL trace.
 */
EPK_API epk_status epk_run(const epk_scenario* sc, const char* options_json, char** result_json);
/* Number of trace steps whose state fingerprints do not reproduce. */
EPK_API epk_status epk_replay(const epk_scenario* sc, const char* options_json,
                              const char* trace_jsonl, int* mismatches);
EPK_API epk_status epk_suite(const char* grid_json, char** csv);

/* One agent's executor. Actions are {actor, kind, payload, askee, answer_to}. */
EPK_API epk_status epk_session_create(const epk_scenario* sc, const char* agent,
                                      const char* kind, const char* options_json,
                                      epk_session** out);
EPK_API epk_status epk_session_observe(epk_session* s, const char* action_json);
/* *action_json is set to NULL when the agent chooses not to act. */
EPK_API epk_status epk_session_decide(epk_session* s, char** action_json);
EPK_API epk_status epk_session_branch(const epk_session* s, char** branch);
EPK_API void epk_session_free(epk_session* s);

/* Live play: one human-controlled agent against engine agents. */
EPK_API epk_status epk_live_create(const epk_scenario* sc, const char* human,
                                   const char* options_json, epk_live** out);
EPK_API epk_status epk_live_view(epk_live* live, char** view_json);
EPK_API epk_status epk_live_submit(epk_live* live, const char* action_json, char** events_json);
/* Events with seq > since; waits up to timeout_ms when none exist yet. */
EPK_API epk_status epk_live_events(epk_live* live, int since, int timeout_ms, char** events_json);
EPK_API epk_status epk_live_close(epk_live* live);
EPK_API void epk_live_free(epk_live* live);

#ifdef __cplusplus
}
#endif

#endif /* EPIKE_EPIKE_H */
