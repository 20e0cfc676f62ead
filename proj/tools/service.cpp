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

#include "service.hpp"

#include <algorithm>
#include <atomic>

#include "json.hpp"

namespace epike_service {

using nlohmann::json;

namespace {

// Takes ownership of a string returned by the C API.
std::string take(char* s) {
  std::string out = s ? s : "";
  epk_string_free(s);
  return out;
}

int http_status(epk_status st) {
  switch (st) {
    case EPK_OK: return 200;
    case EPK_ERR_INAPPLICABLE: return 409;
    case EPK_ERR_UNKNOWN_NAME: return 404;
    case EPK_ERR_INTERNAL: return 500;
    default: return 400;
  }
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, epk_status st) {
  reply(res, http_status(st), {{"error", epk_status_name(st)}, {"message", epk_last_error()}});
}

}  // namespace

struct Service::Live {
  epk_live* handle = nullptr;
  std::atomic<bool> closed{false};
  ~Live() { epk_live_free(handle); }
};

Service::~Service() {
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& [id, live] : sessions_) {
    live->closed = true;
    epk_live_close(live->handle);
  }
}

std::size_t Service::open_sessions() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.size();
}

std::shared_ptr<Service::Live> Service::find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void Service::install(httplib::Server& server) {
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      return reply(res, 400, {{"error", "parse"}, {"message", e.what()}});
    }
    if (!body.contains("human") || !body["human"].is_string()) {
      return reply(res, 400, {{"error", "argument"}, {"message", "field 'human' is required"}});
    }
    epk_scenario* sc = nullptr;
    epk_status st;
    if (body.contains("scenario")) {
      st = epk_scenario_parse(body["scenario"].dump().c_str(), &sc);
    } else if (body.contains("scenario_path") && body["scenario_path"].is_string()) {
      const std::string rel = body["scenario_path"].get<std::string>();
      if (scenario_dir_.empty() || rel.find("..") != std::string::npos || rel.empty() || rel[0] == '/') {
        return reply(res, 400, {{"error", "argument"}, {"message", "scenario_path is not permitted"}});
      }
      st = epk_scenario_load((scenario_dir_ + "/" + rel).c_str(), &sc);
    } else {
      return reply(res, 400, {{"error", "argument"}, {"message", "field 'scenario' is required"}});
    }
    if (st != EPK_OK) return reply_error(res, st);
    auto live = std::make_shared<Live>();
    const std::string options = body.value("options", json::object()).dump();
    st = epk_live_create(sc, body["human"].get<std::string>().c_str(), options.c_str(), &live->handle);
    epk_scenario_free(sc);
    if (st != EPK_OK) return reply_error(res, st);
    char* view = nullptr;
    st = epk_live_view(live->handle, &view);
    if (st != EPK_OK) return reply_error(res, st);
    std::string id;
    {
      std::lock_guard<std::mutex> lock(mu_);
      id = std::to_string(next_id_++);
      sessions_[id] = live;
    }
    reply(res, 201, {{"id", id}, {"view", json::parse(take(view))}});
  });

  server.Get(R"(/sessions/(\d+)/view)", [this](const httplib::Request& req, httplib::Response& res) {
    auto live = find(req.matches[1]);
    if (!live) return reply(res, 404, {{"error", "unknown-session"}});
    char* view = nullptr;
    const epk_status st = epk_live_view(live->handle, &view);
    if (st != EPK_OK) return reply_error(res, st);
    reply(res, 200, json::parse(take(view)));
  });

  server.Post(R"(/sessions/(\d+)/actions)", [this](const httplib::Request& req, httplib::Response& res) {
    auto live = find(req.matches[1]);
    if (!live) return reply(res, 404, {{"error", "unknown-session"}});
    char* events = nullptr;
    epk_status st = epk_live_submit(live->handle, req.body.c_str(), &events);
    if (st != EPK_OK) return reply_error(res, st);
    json out{{"events", json::parse(take(events))}};
    char* view = nullptr;
    st = epk_live_view(live->handle, &view);
    if (st != EPK_OK) return reply_error(res, st);
    out["view"] = json::parse(take(view));
    reply(res, 200, out);
  });

  server.Get(R"(/sessions/(\d+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    auto live = find(req.matches[1]);
    if (!live) return reply(res, 404, {{"error", "unknown-session"}});
    int since = -1;
    int timeout_ms = 0;
    try {
      if (req.has_param("since")) since = std::stoi(req.get_param_value("since"));
      if (req.has_param("timeout_ms")) timeout_ms = std::stoi(req.get_param_value("timeout_ms"));
    } catch (const std::exception&) {
      return reply(res, 400, {{"error", "argument"}, {"message", "since and timeout_ms must be integers"}});
    }
    timeout_ms = std::clamp(timeout_ms, 0, 30000);
    char* events = nullptr;
    const epk_status st = epk_live_events(live->handle, since, timeout_ms, &events);
    if (st != EPK_OK) return reply_error(res, st);
    reply(res, 200, json::parse(take(events)));
  });

  server.Get(R"(/sessions/(\d+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
    auto live = find(req.matches[1]);
    if (!live) return reply(res, 404, {{"error", "unknown-session"}});
    auto since = std::make_shared<int>(-1);
    if (req.has_param("since")) {
      try {
        *since = std::stoi(req.get_param_value("since"));
      } catch (const std::exception&) {
        return reply(res, 400, {{"error", "argument"}});
      }
    }
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [live, since](std::size_t, httplib::DataSink& sink) {
          if (live->closed || !sink.is_writable()) {
            sink.done();
            return true;
          }
          char* events = nullptr;
          if (epk_live_events(live->handle, *since, 500, &events) != EPK_OK) return false;
          for (const auto& e : json::parse(take(events))) {
            const std::string frame = "id: " + std::to_string(e["seq"].get<int>()) +
                                      "\nevent: action\ndata: " + e.dump() + "\n\n";
            if (!sink.write(frame.data(), frame.size())) return false;
            *since = e["seq"].get<int>();
          }
          return true;
        });
  });

  server.Delete(R"(/sessions/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::shared_ptr<Live> live;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = sessions_.find(req.matches[1]);
      if (it == sessions_.end()) return reply(res, 404, {{"error", "unknown-session"}});
      live = it->second;
      sessions_.erase(it);
    }
    live->closed = true;
    epk_live_close(live->handle);
    reply(res, 200, {{"closed", req.matches[1].str()}});
  });
}

}  // namespace epike_service
