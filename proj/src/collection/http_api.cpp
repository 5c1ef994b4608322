// Copyright 2026 The shoptraj Authors
//
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


#include "shoptraj/collection/http_api.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "shoptraj/errors.hpp"

namespace shoptraj::collection
{

using nlohmann::json;

namespace
{

void send_json(httplib::Response & res, const json & body, int status = 200)
{
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response & res, const std::string & code, const std::string & message)
{
  send_json(res, {{"error", code}, {"message", message}}, status_for(code));
}

json parse_body(const httplib::Request & req)
{
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw SessionError("bad_request", "request body must be a JSON object");
  }
  return j;
}

json trajectory_json(const planner::AnnotatedTrajectory & t) { return json::parse(planner::to_json_line(t)); }

// Runs `fn` and converts library errors into error responses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn)
{
  return [fn](const httplib::Request & req, httplib::Response & res) {
    try {
      fn(req, res);
    } catch (const SessionError & e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception & e) {
      send_error(res, "bad_request", e.what());
    } catch (const Error & e) {
      send_error(res, e.code(), e.what());
    }
  };
}

}  // namespace

int status_for(const std::string & code)
{
  if (code == "unknown_map" || code == "unknown_caption" || code == "unknown_session") {
    return 404;
  }
  if (code == "active_session" || code == "session_not_active") {
    return 409;
  }
  if (code == "not_at_cashier" || code == "empty_log") {
    return 422;
  }
  if (code == "bad_request") {
    return 400;
  }
  return 500;
}

void register_routes(httplib::Server & server, SessionStore & store, const std::filesystem::path & static_dir)
{
  server.Get("/maps", guarded([&store](const httplib::Request &, httplib::Response & res) {
    json maps = json::array();
    for (const auto & m : store.maps()) {
      maps.push_back(
        {{"id", m.map.id()}, {"label", m.label}, {"width", m.map.width()}, {"height", m.map.height()}});
    }
    send_json(res, {{"maps", maps}});
  }));

  server.Get(R"(/maps/([^/]+))", guarded([&store](const httplib::Request & req, httplib::Response & res) {
    const StudyMap * m = store.find_map(req.matches[1]);
    if (m == nullptr) {
      throw SessionError("unknown_map", "no map '" + std::string(req.matches[1]) + "'");
    }
    json doc = json::parse(serialize_map(m->map));
    doc["label"] = m->label;
    send_json(res, doc);
  }));

  server.Get(R"(/assignments/([^/]+))", guarded([&store](const httplib::Request & req, httplib::Response & res) {
    const std::string participant = req.matches[1];
    json rounds = json::array();
    for (const auto & a : store.assignments(participant)) {
      json j = to_json(a);
      j["caption"] = store.find_caption(a.caption_id)->text;
      rounds.push_back(std::move(j));
    }
    send_json(res, {{"participant_id", participant}, {"assignments", rounds}});
  }));

  server.Post("/sessions", guarded([&store](const httplib::Request & req, httplib::Response & res) {
    const json body = parse_body(req);
    const auto view = store.create_session(
      body.at("participant_id").get<std::string>(), body.at("map_id").get<std::string>(),
      body.at("caption_id").get<std::string>(),
      round_kind_from_string(body.value("round_kind", std::string("main"))));
    spdlog::info("[collect] {} started by {} on {}", view.session_id, view.participant_id, view.map_id);
    send_json(res, to_json(view), 201);
  }));

  server.Get(R"(/sessions/([^/]+))", guarded([&store](const httplib::Request & req, httplib::Response & res) {
    send_json(res, to_json(store.session(req.matches[1])));
  }));

  server.Post(R"(/sessions/([^/]+)/events)", guarded([&store](const httplib::Request & req, httplib::Response & res) {
    const json body = parse_body(req);
    std::vector<SessionEvent> events;
    for (const auto & e : body.at("events")) {
      events.push_back(event_from_json(e));
    }
    const std::string id = req.matches[1];
    const auto outcomes = store.record_events(id, events);
    json results = json::array();
    for (const auto & o : outcomes) {
      results.push_back(to_json(o));
    }
    const auto view = store.session(id);
    send_json(
      res, {{"session_id", id},
            {"event_count", view.accepted_events},
            {"position", {view.position.x, view.position.y}},
            {"cart", view.cart},
            {"results", results}});
  }));

  server.Post(
    R"(/sessions/([^/]+)/complete)", guarded([&store](const httplib::Request & req, httplib::Response & res) {
      const auto traj = store.complete_session(req.matches[1]);
      spdlog::info("[collect] {} completed with {} frames", std::string(req.matches[1]), traj.positions.size());
      send_json(res, {{"session_id", std::string(req.matches[1])}, {"trajectory", trajectory_json(traj)}});
    }));

  server.Get("/export", guarded([&store](const httplib::Request & req, httplib::Response & res) {
    ExportFilter f;
    if (req.has_param("map_id")) {
      f.map_id = req.get_param_value("map_id");
    }
    if (req.has_param("map_label")) {
      f.map_label = req.get_param_value("map_label");
    }
    if (req.has_param("caption_source")) {
      f.caption_source = req.get_param_value("caption_source");
    }
    f.include_pilot = req.get_param_value("include_pilot") == "1" || req.get_param_value("include_pilot") == "true";
    const auto out = store.export_sessions(f);
    if (req.get_param_value("format") == "jsonl") {
      std::string body;
      for (const auto & s : out.sessions) {
        body += planner::to_json_line(s.trajectory) + "\n";
      }
      res.set_content(body, "application/x-ndjson");
      return;
    }
    json sessions = json::array();
    for (const auto & s : out.sessions) {
      sessions.push_back(
        {{"session_id", s.session_id},
         {"participant_id", s.participant_id},
         {"map_label", s.map_label},
         {"caption_source", s.caption_source},
         {"trajectory", trajectory_json(s.trajectory)}});
    }
    send_json(res, {{"count", out.sessions.size()}, {"strata", out.strata}, {"sessions", sessions}});
  }));

  if (!static_dir.empty() && std::filesystem::is_directory(static_dir)) {
    server.set_mount_point("/app", static_dir.string());
  }
}

}  // namespace shoptraj::collection
