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

#ifndef EPIKE_TOOLS_SERVICE_HPP
#define EPIKE_TOOLS_SERVICE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "epike/epike.h"
#include "httplib.h"

namespace epike_service {

// Owns live sessions keyed by id. Routes are JSON over HTTP:
//   POST   /sessions                 {scenario | scenario_path, human, options}
//   GET    /sessions/:id/view
//   POST   /sessions/:id/actions     {actor, kind, payload, askee, answer_to}
//   GET    /sessions/:id/events?since=N&timeout_ms=M
//   GET    /sessions/:id/stream      server-sent events
//   DELETE /sessions/:id
class Service {
 public:
  explicit Service(std::string scenario_dir = "") : scenario_dir_(std::move(scenario_dir)) {}
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void install(httplib::Server& server);
  std::size_t open_sessions() const;

 private:
  struct Live;
  std::shared_ptr<Live> find(const std::string& id) const;

  std::string scenario_dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Live>> sessions_;
  unsigned long next_id_ = 1;
};

}  // namespace epike_service

#endif  // EPIKE_TOOLS_SERVICE_HPP
