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


#ifndef SHOPTRAJ_COLLECTION_SESSION_STORE_HPP_
#define SHOPTRAJ_COLLECTION_SESSION_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shoptraj/collection/grid.hpp"
#include "shoptraj/planner/trajectory.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::collection
{

enum class RoundKind { pilot, main };
enum class SessionState { active, completed, abandoned };
enum class EventKind { move, cart_add, cart_remove };

std::string_view to_string(RoundKind k);
std::string_view to_string(SessionState s);
std::string_view to_string(EventKind k);
RoundKind round_kind_from_string(std::string_view s);
EventKind event_kind_from_string(std::string_view s);

struct CaptionEntry
{
  std::string id;
  std::string text;
  std::string source;  // "synthesized" or "human"
};

struct StudyMap
{
  StoreMap map;
  std::string label;  // "seen" or "unseen"
};

struct SessionEvent
{
  EventKind kind = EventKind::move;
  Point2 position;      // move
  std::string item_id;  // cart ops
  long t = 0;           // client timestep
};

struct EventOutcome
{
  bool accepted = false;
  std::string reason;  // empty when accepted
  Point2 position;     // avatar after the event
};

struct SessionView
{
  std::string session_id;
  std::string participant_id;
  std::string map_id;
  std::string caption_id;
  RoundKind round = RoundKind::main;
  SessionState state = SessionState::active;
  std::string started_at;
  std::string ended_at;
  Point2 position;
  std::vector<std::string> cart;
  std::vector<Point2> frames;  // entrance + one per accepted event
  std::size_t accepted_events = 0;
  long last_t = -1;
};

struct Assignment
{
  int round_index = 0;
  RoundKind round = RoundKind::main;
  std::string map_id;
  std::string caption_id;
};

struct ExportFilter
{
  std::optional<std::string> map_id;
  std::optional<std::string> map_label;
  std::optional<std::string> caption_source;
  bool include_pilot = false;
};

struct ExportedSession
{
  std::string session_id;
  std::string participant_id;
  std::string map_label;
  std::string caption_source;
  planner::AnnotatedTrajectory trajectory;
};

struct ExportResult
{
  std::vector<ExportedSession> sessions;
  std::map<std::string, int> strata;  // "<map label>/<caption source>"
};

struct StoreOptions
{
  std::filesystem::path data_dir;  // session logs and index
  double grid_step = kDefaultGridStep;
  std::uint64_t assignment_seed = 0;
  int pilot_rounds = 2;
  int main_rounds = 5;
  std::function<std::string()> clock;  // ISO timestamps; defaults to UTC now
};

/**
 * @brief Sessions of the human collection study.
 *
 * Each session has an append-only log `<data_dir>/sessions/<id>.jsonl`;
 * `<data_dir>/index.jsonl` records creation and state changes. Opening a
 * store replays every log, so state is always a function of the files.
 * Appends to one session are serialized; sessions do not share locks.
 */
class SessionStore
{
public:
  SessionStore(std::vector<StudyMap> maps, std::vector<CaptionEntry> captions, StoreOptions options);
  ~SessionStore();

  const std::vector<StudyMap> & maps() const { return maps_; }
  const StudyMap * find_map(const std::string & id) const;
  const CaptionEntry * find_caption(const std::string & id) const;

  /// Seeded schedule: pilot rounds first, then main rounds.
  std::vector<Assignment> assignments(const std::string & participant_id) const;

  /// SessionError codes: unknown_map, unknown_caption, active_session.
  SessionView create_session(
    const std::string & participant_id, const std::string & map_id, const std::string & caption_id, RoundKind round);

  /// Applies events in order; rejected events leave the state unchanged.
  /// SessionError codes: unknown_session, session_not_active.
  std::vector<EventOutcome> record_events(const std::string & session_id, const std::vector<SessionEvent> & events);

  /// SessionError codes: unknown_session, session_not_active, empty_log,
  /// not_at_cashier.
  planner::AnnotatedTrajectory complete_session(const std::string & session_id);

  SessionView session(const std::string & session_id) const;
  std::vector<SessionView> sessions() const;

  ExportResult export_sessions(const ExportFilter & filter = {}) const;

  /// Rebuilds a completed session's trajectory from its state.
  planner::AnnotatedTrajectory trajectory_of(const SessionView & s) const;

private:
  struct Session;

  Session & get(const std::string & id) const;
  void append_index(const nlohmann::json & line);
  void replay();
  EventOutcome apply(Session & s, const SessionEvent & e) const;
  std::string now() const;

  std::vector<StudyMap> maps_;
  std::vector<CaptionEntry> captions_;
  StoreOptions options_;
  std::map<std::string, MoveGrid> grids_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::map<std::string, std::string> active_by_participant_;
  std::uint64_t next_id_ = 1;
  std::mutex index_mutex_;
};

/// Reads {"caption_id","text","source"} lines.
std::vector<CaptionEntry> read_captions(const std::filesystem::path & path);

nlohmann::json to_json(const SessionView & s);
nlohmann::json to_json(const Assignment & a);
nlohmann::json to_json(const EventOutcome & o);
SessionEvent event_from_json(const nlohmann::json & j);
nlohmann::json to_json(const SessionEvent & e);

}  // namespace shoptraj::collection

#endif  // SHOPTRAJ_COLLECTION_SESSION_STORE_HPP_
