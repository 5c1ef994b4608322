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


#include "shoptraj/collection/session_store.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <set>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"

namespace shoptraj::collection
{

using nlohmann::json;

std::string_view to_string(RoundKind k) { return k == RoundKind::pilot ? "pilot" : "main"; }

std::string_view to_string(SessionState s)
{
  switch (s) {
    case SessionState::active:
      return "active";
    case SessionState::completed:
      return "completed";
    case SessionState::abandoned:
      return "abandoned";
  }
  return "active";
}

std::string_view to_string(EventKind k)
{
  switch (k) {
    case EventKind::move:
      return "move";
    case EventKind::cart_add:
      return "cart_add";
    case EventKind::cart_remove:
      return "cart_remove";
  }
  return "move";
}

RoundKind round_kind_from_string(std::string_view s)
{
  if (s == "pilot") {
    return RoundKind::pilot;
  }
  if (s == "main") {
    return RoundKind::main;
  }
  throw SessionError("bad_request", "round_kind must be 'pilot' or 'main'");
}

EventKind event_kind_from_string(std::string_view s)
{
  if (s == "move") {
    return EventKind::move;
  }
  if (s == "cart_add") {
    return EventKind::cart_add;
  }
  if (s == "cart_remove") {
    return EventKind::cart_remove;
  }
  throw SessionError("bad_request", "unknown event kind '" + std::string(s) + "'");
}

struct SessionStore::Session
{
  SessionView view;
  std::set<std::string> touched;
  std::filesystem::path log;
  mutable std::mutex mutex;
};

SessionStore::SessionStore(std::vector<StudyMap> maps, std::vector<CaptionEntry> captions, StoreOptions options)
: maps_(std::move(maps)), captions_(std::move(captions)), options_(std::move(options))
{
  for (const auto & m : maps_) {
    grids_.emplace(m.map.id(), MoveGrid(m.map, options_.grid_step));
  }
  // MoveGrid keeps a pointer to its map; maps_ is not modified afterwards.
  if (!options_.data_dir.empty()) {
    replay();
  }
}

SessionStore::~SessionStore() = default;

const StudyMap * SessionStore::find_map(const std::string & id) const
{
  for (const auto & m : maps_) {
    if (m.map.id() == id) {
      return &m;
    }
  }
  return nullptr;
}

const CaptionEntry * SessionStore::find_caption(const std::string & id) const
{
  for (const auto & c : captions_) {
    if (c.id == id) {
      return &c;
    }
  }
  return nullptr;
}

std::string SessionStore::now() const
{
  if (options_.clock) {
    return options_.clock();
  }
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

std::vector<Assignment> SessionStore::assignments(const std::string & participant_id) const
{
  if (maps_.empty() || captions_.empty()) {
    return {};
  }
  std::mt19937_64 rng(options_.assignment_seed ^ std::stoull(sha256_hex(participant_id).substr(0, 16), nullptr, 16));
  std::vector<std::size_t> caption_order(captions_.size());
  std::iota(caption_order.begin(), caption_order.end(), std::size_t{0});
  std::shuffle(caption_order.begin(), caption_order.end(), rng);
  std::vector<Assignment> out;
  const int rounds = options_.pilot_rounds + options_.main_rounds;
  std::vector<std::size_t> map_order;
  for (int r = 0; r < rounds; ++r) {
    if (map_order.empty()) {
      map_order.resize(maps_.size());
      std::iota(map_order.begin(), map_order.end(), std::size_t{0});
      std::shuffle(map_order.begin(), map_order.end(), rng);
    }
    Assignment a;
    a.round_index = r;
    a.round = r < options_.pilot_rounds ? RoundKind::pilot : RoundKind::main;
    a.map_id = maps_[map_order.back()].map.id();
    map_order.pop_back();
    a.caption_id = captions_[caption_order[static_cast<std::size_t>(r) % caption_order.size()]].id;
    out.push_back(std::move(a));
  }
  return out;
}

void SessionStore::append_index(const json & line)
{
  if (options_.data_dir.empty()) {
    return;
  }
  std::lock_guard<std::mutex> lock(index_mutex_);
  append_text_file(options_.data_dir / "index.jsonl", line.dump() + "\n");
}

SessionStore::Session & SessionStore::get(const std::string & id) const
{
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw SessionError("unknown_session", "no session '" + id + "'");
  }
  return *it->second;
}

SessionView SessionStore::create_session(
  const std::string & participant_id, const std::string & map_id, const std::string & caption_id, RoundKind round)
{
  if (participant_id.empty()) {
    throw SessionError("bad_request", "participant_id is required");
  }
  const StudyMap * m = find_map(map_id);
  if (m == nullptr) {
    throw SessionError("unknown_map", "no map '" + map_id + "'");
  }
  if (find_caption(caption_id) == nullptr) {
    throw SessionError("unknown_caption", "no caption '" + caption_id + "'");
  }
  auto s = std::make_unique<Session>();
  SessionView view;
  {
    std::unique_lock lock(sessions_mutex_);
    const auto active = active_by_participant_.find(participant_id);
    if (active != active_by_participant_.end()) {
      throw SessionError(
        "active_session", "participant '" + participant_id + "' already has active session " + active->second);
    }
    s->view.session_id = fmt::format("sess-{:06d}", next_id_++);
    s->view.participant_id = participant_id;
    s->view.map_id = map_id;
    s->view.caption_id = caption_id;
    s->view.round = round;
    s->view.started_at = now();
    s->view.position = grids_.at(map_id).snap(m->map.entrance());
    s->view.frames.push_back(s->view.position);
    if (!options_.data_dir.empty()) {
      s->log = options_.data_dir / "sessions" / (s->view.session_id + ".jsonl");
      json created = {
        {"type", "created"},
        {"session_id", s->view.session_id},
        {"participant_id", participant_id},
        {"map_id", map_id},
        {"caption_id", caption_id},
        {"round_kind", to_string(round)},
        {"started_at", s->view.started_at}};
      write_text_file(s->log, created.dump() + "\n");
    }
    active_by_participant_[participant_id] = s->view.session_id;
    view = s->view;
    sessions_[view.session_id] = std::move(s);
  }
  append_index(
    {{"session_id", view.session_id},
     {"participant_id", participant_id},
     {"map_id", map_id},
     {"caption_id", caption_id},
     {"round_kind", to_string(round)},
     {"state", "active"}});
  return view;
}

EventOutcome SessionStore::apply(Session & s, const SessionEvent & e) const
{
  EventOutcome out;
  SessionView & v = s.view;
  out.position = v.position;
  auto reject = [&](std::string reason) {
    out.reason = std::move(reason);
    return out;
  };
  if (e.t < v.last_t) {
    return reject("out_of_order");
  }
  const StudyMap & m = *find_map(v.map_id);
  const MoveGrid & grid = grids_.at(v.map_id);
  switch (e.kind) {
    case EventKind::move: {
      const Point2 p = grid.snap(e.position);
      if (!m.map.in_bounds(p)) {
        return reject("out_of_bounds");
      }
      if (!grid.is_unit_step(v.position, p)) {
        return reject("not_unit_step");
      }
      if (!grid.walkable(p)) {
        return reject("collision");
      }
      v.position = p;
      break;
    }
    case EventKind::cart_add:
    case EventKind::cart_remove: {
      const Item * item = m.map.find_item(e.item_id);
      if (item == nullptr) {
        return reject("unknown_item");
      }
      if (!grid.can_reach(v.position, *item)) {
        return reject("not_adjacent");
      }
      const auto it = std::find(v.cart.begin(), v.cart.end(), item->id);
      if (e.kind == EventKind::cart_add) {
        if (it != v.cart.end()) {
          return reject("already_in_cart");
        }
        v.cart.push_back(item->id);
      } else {
        if (it == v.cart.end()) {
          return reject("not_in_cart");
        }
        v.cart.erase(it);
      }
      break;
    }
  }
  v.frames.push_back(v.position);
  s.touched.insert(m.map.nearest_item(v.position).id);
  ++v.accepted_events;
  v.last_t = e.t;
  out.accepted = true;
  out.position = v.position;
  return out;
}

std::vector<EventOutcome> SessionStore::record_events(
  const std::string & session_id, const std::vector<SessionEvent> & events)
{
  Session & s = get(session_id);
  std::lock_guard<std::mutex> lock(s.mutex);
  if (s.view.state != SessionState::active) {
    throw SessionError("session_not_active", "session " + session_id + " is " + std::string(to_string(s.view.state)));
  }
  std::vector<EventOutcome> out;
  std::string lines;
  for (const auto & e : events) {
    out.push_back(apply(s, e));
    json line = {{"type", "event"}, {"event", to_json(e)}, {"accepted", out.back().accepted}};
    if (!out.back().accepted) {
      line["reason"] = out.back().reason;
    }
    lines += line.dump() + "\n";
  }
  if (!s.log.empty()) {
    append_text_file(s.log, lines);
  }
  return out;
}

planner::AnnotatedTrajectory SessionStore::trajectory_of(const SessionView & s) const
{
  const StudyMap * m = find_map(s.map_id);
  planner::AnnotatedTrajectory t;
  t.caption_id = s.caption_id;
  t.map_id = s.map_id;
  t.provenance = planner::Provenance::human;
  t.dt = 0.5;
  t.positions = s.frames;
  t.items_in_contact = planner::annotate_contacts(m->map, s.frames);
  t.purchased = s.cart;
  return t;
}

planner::AnnotatedTrajectory SessionStore::complete_session(const std::string & session_id)
{
  Session & s = get(session_id);
  SessionView view;
  {
    std::lock_guard<std::mutex> lock(s.mutex);
    if (s.view.state != SessionState::active) {
      throw SessionError(
        "session_not_active", "session " + session_id + " is " + std::string(to_string(s.view.state)));
    }
    if (s.view.accepted_events == 0) {
      throw SessionError("empty_log", "session " + session_id + " has no accepted events");
    }
    const StudyMap & m = *find_map(s.view.map_id);
    if (!m.map.cashier().contains(s.view.position)) {
      throw SessionError(
        "not_at_cashier", fmt::format(
                            "session {} ends at ({:.3f}, {:.3f}), outside the cashier region", session_id,
                            s.view.position.x, s.view.position.y));
    }
    s.view.state = SessionState::completed;
    s.view.ended_at = now();
    if (!s.log.empty()) {
      append_text_file(s.log, json{{"type", "completed"}, {"ended_at", s.view.ended_at}}.dump() + "\n");
    }
    view = s.view;
  }
  {
    std::unique_lock lock(sessions_mutex_);
    active_by_participant_.erase(view.participant_id);
  }
  append_index({{"session_id", session_id}, {"state", "completed"}});
  return trajectory_of(view);
}

SessionView SessionStore::session(const std::string & session_id) const
{
  Session & s = get(session_id);
  std::lock_guard<std::mutex> lock(s.mutex);
  return s.view;
}

std::vector<SessionView> SessionStore::sessions() const
{
  std::vector<Session *> all;
  {
    std::shared_lock lock(sessions_mutex_);
    for (const auto & [id, s] : sessions_) {
      all.push_back(s.get());
    }
  }
  std::vector<SessionView> out;
  for (Session * s : all) {
    std::lock_guard<std::mutex> lock(s->mutex);
    out.push_back(s->view);
  }
  return out;
}

ExportResult SessionStore::export_sessions(const ExportFilter & filter) const
{
  ExportResult out;
  for (const auto & s : sessions()) {
    if (s.state != SessionState::completed || (s.round == RoundKind::pilot && !filter.include_pilot)) {
      continue;
    }
    const StudyMap * m = find_map(s.map_id);
    const CaptionEntry * c = find_caption(s.caption_id);
    const std::string source = c == nullptr ? "unknown" : c->source;
    if ((filter.map_id && *filter.map_id != s.map_id) || (filter.map_label && *filter.map_label != m->label) ||
        (filter.caption_source && *filter.caption_source != source)) {
      continue;
    }
    ++out.strata[m->label + "/" + source];
    out.sessions.push_back({s.session_id, s.participant_id, m->label, source, trajectory_of(s)});
  }
  return out;
}

void SessionStore::replay()
{
  const auto index = options_.data_dir / "index.jsonl";
  if (!std::filesystem::exists(index)) {
    return;
  }
  std::vector<std::string> order;
  for (const auto & line : read_lines(index)) {
    const json j = json::parse(line);
    if (j.contains("participant_id")) {
      order.push_back(j.at("session_id").get<std::string>());
    }
  }
  for (const auto & id : order) {
    auto s = std::make_unique<Session>();
    s->log = options_.data_dir / "sessions" / (id + ".jsonl");
    for (const auto & line : read_lines(s->log)) {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "created") {
        s->view.session_id = id;
        s->view.participant_id = j.at("participant_id").get<std::string>();
        s->view.map_id = j.at("map_id").get<std::string>();
        s->view.caption_id = j.at("caption_id").get<std::string>();
        s->view.round = round_kind_from_string(j.at("round_kind").get<std::string>());
        s->view.started_at = j.at("started_at").get<std::string>();
        const StudyMap * m = find_map(s->view.map_id);
        if (m == nullptr) {
          throw SessionError("corrupt_log", "session " + id + " refers to unknown map " + s->view.map_id);
        }
        s->view.position = grids_.at(s->view.map_id).snap(m->map.entrance());
        s->view.frames.push_back(s->view.position);
      } else if (type == "event") {
        if (!j.at("accepted").get<bool>()) {
          continue;
        }
        if (!apply(*s, event_from_json(j.at("event"))).accepted) {
          throw SessionError("corrupt_log", "session " + id + " log does not replay");
        }
      } else if (type == "completed") {
        s->view.state = SessionState::completed;
        s->view.ended_at = j.at("ended_at").get<std::string>();
      }
    }
    if (s->view.state == SessionState::active) {
      active_by_participant_[s->view.participant_id] = id;
    }
    const auto n = std::stoull(id.substr(5));
    next_id_ = std::max<std::uint64_t>(next_id_, n + 1);
    sessions_[id] = std::move(s);
  }
  spdlog::info("[collect] replayed {} sessions from {}", sessions_.size(), options_.data_dir.string());
}

std::vector<CaptionEntry> read_captions(const std::filesystem::path & path)
{
  std::vector<CaptionEntry> out;
  for (const auto & line : read_lines(path)) {
    const json j = json::parse(line);
    out.push_back(
      {j.at("caption_id").get<std::string>(), j.at("text").get<std::string>(),
       j.value("source", std::string("synthesized"))});
  }
  return out;
}

json to_json(const SessionView & s)
{
  json frames = json::array();
  for (const auto & p : s.frames) {
    frames.push_back({p.x, p.y});
  }
  return {
    {"session_id", s.session_id},
    {"participant_id", s.participant_id},
    {"map_id", s.map_id},
    {"caption_id", s.caption_id},
    {"round_kind", to_string(s.round)},
    {"state", to_string(s.state)},
    {"started_at", s.started_at},
    {"ended_at", s.ended_at.empty() ? json(nullptr) : json(s.ended_at)},
    {"position", {s.position.x, s.position.y}},
    {"cart", s.cart},
    {"event_count", s.accepted_events},
    {"frames", frames}};
}

json to_json(const Assignment & a)
{
  return {
    {"round_index", a.round_index}, {"round_kind", to_string(a.round)}, {"map_id", a.map_id},
    {"caption_id", a.caption_id}};
}

json to_json(const EventOutcome & o)
{
  json j = {{"accepted", o.accepted}, {"position", {o.position.x, o.position.y}}};
  if (!o.accepted) {
    j["reason"] = o.reason;
  }
  return j;
}

SessionEvent event_from_json(const json & j)
{
  SessionEvent e;
  try {
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.t = j.value("t", 0L);
    if (e.kind == EventKind::move) {
      const auto & p = j.at("position");
      e.position = {p.at(0).get<double>(), p.at(1).get<double>()};
    } else {
      e.item_id = j.at("item_id").get<std::string>();
    }
  } catch (const json::exception & ex) {
    throw SessionError("bad_request", std::string("malformed event: ") + ex.what());
  }
  return e;
}

json to_json(const SessionEvent & e)
{
  json j = {{"kind", to_string(e.kind)}, {"t", e.t}};
  if (e.kind == EventKind::move) {
    j["position"] = {e.position.x, e.position.y};
  } else {
    j["item_id"] = e.item_id;
  }
  return j;
}

}  // namespace shoptraj::collection
