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


#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include <nlohmann/json.hpp>

#include "shoptraj/collection/grid.hpp"
#include "shoptraj/collection/http_api.hpp"
#include "shoptraj/collection/script.hpp"
#include "shoptraj/collection/session_store.hpp"
#include "shoptraj/io.hpp"
#include "test_support.hpp"

namespace shoptraj::collection
{
namespace
{

using nlohmann::json;

class HttpApiTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    write_text_file(static_dir / "index.html", "<html>collector</html>");
    StoreOptions o;
    o.data_dir = data_dir.path();
    o.assignment_seed = 1;
    store = std::make_unique<SessionStore>(
      std::vector<StudyMap>{{testing::seen_map(), "seen"}, {testing::unseen_map(), "unseen"}},
      read_captions(testing::data_path("captions/study_captions.jsonl")), o);
    register_routes(server, *store, static_dir.path());
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }

  void TearDown() override
  {
    server.stop();
    thread.join();
  }

  std::pair<int, json> get(const std::string & path)
  {
    auto res = client->Get(path);
    EXPECT_TRUE(res);
    return {res->status, json::parse(res->body, nullptr, false)};
  }

  std::pair<int, json> post(const std::string & path, const std::string & body)
  {
    auto res = client->Post(path, body, "application/json");
    EXPECT_TRUE(res);
    return {res->status, json::parse(res->body, nullptr, false)};
  }

  std::string start(const std::string & participant, const std::string & map_id = "seen")
  {
    const auto [status, body] = post(
      "/sessions", json{{"participant_id", participant}, {"map_id", map_id}, {"caption_id", "syn-s0001"}}.dump());
    EXPECT_EQ(status, 201);
    return body.value("session_id", std::string());
  }

  testing::TempDir data_dir;
  testing::TempDir static_dir;
  std::unique_ptr<SessionStore> store;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::unique_ptr<httplib::Client> client;
};

TEST_F(HttpApiTest, StatusMapping)
{
  EXPECT_EQ(status_for("unknown_session"), 404);
  EXPECT_EQ(status_for("active_session"), 409);
  EXPECT_EQ(status_for("session_not_active"), 409);
  EXPECT_EQ(status_for("not_at_cashier"), 422);
  EXPECT_EQ(status_for("empty_log"), 422);
  EXPECT_EQ(status_for("bad_request"), 400);
  EXPECT_EQ(status_for("anything_else"), 500);
}

TEST_F(HttpApiTest, MapsAndAssignments)
{
  const auto [s1, maps] = get("/maps");
  EXPECT_EQ(s1, 200);
  ASSERT_EQ(maps["maps"].size(), 2u);
  EXPECT_EQ(maps["maps"][0]["label"], "seen");

  const auto [s2, doc] = get("/maps/seen");
  EXPECT_EQ(s2, 200);
  EXPECT_EQ(doc["label"], "seen");
  json plain = doc;
  plain.erase("label");
  EXPECT_EQ(load_map(plain.dump()), testing::seen_map());

  const auto [s3, missing] = get("/maps/mars");
  EXPECT_EQ(s3, 404);
  EXPECT_EQ(missing["error"], "unknown_map");

  const auto [s4, a] = get("/assignments/p9");
  EXPECT_EQ(s4, 200);
  EXPECT_EQ(a["assignments"].size(), 7u);
  EXPECT_FALSE(a["assignments"][0]["caption"].get<std::string>().empty());
}

TEST_F(HttpApiTest, FullSessionOverHttp)
{
  const std::string id = start("p1");
  ASSERT_FALSE(id.empty());
  const auto [s0, view] = get("/sessions/" + id);
  EXPECT_EQ(s0, 200);
  EXPECT_EQ(view["state"], "active");

  const MoveGrid grid(testing::seen_map());
  const SessionScript script = script_session(testing::seen_map(), grid, {"s-fru01", "s-bak01"});
  json events = json::array();
  for (const auto & e : script.events) {
    events.push_back(to_json(e));
  }
  // A jump is rejected without failing the batch.
  events.push_back({{"kind", "move"}, {"position", {1.5, 1.0}}, {"t", 100000}});
  const auto [s1, rec] = post("/sessions/" + id + "/events", json{{"events", events}}.dump());
  EXPECT_EQ(s1, 200);
  EXPECT_EQ(rec["event_count"], script.events.size());
  EXPECT_EQ(rec["cart"], json(script.cart));
  EXPECT_EQ(rec["results"].back()["accepted"], false);
  EXPECT_EQ(rec["results"].back()["reason"], "not_unit_step");

  const auto [s2, done] = post("/sessions/" + id + "/complete", "");
  EXPECT_EQ(s2, 200);
  EXPECT_EQ(done["trajectory"]["provenance"], "human");
  EXPECT_EQ(done["trajectory"]["purchased"], json(script.cart));
  EXPECT_EQ(done["trajectory"]["positions"].size(), script.positions.size());

  const auto [s3, again] = post("/sessions/" + id + "/complete", "");
  EXPECT_EQ(s3, 409);
  EXPECT_EQ(again["error"], "session_not_active");
  const auto [s4, late] = post("/sessions/" + id + "/events", R"({"events": []})");
  EXPECT_EQ(s4, 409);

  const auto [s5, exported] = get("/export");
  EXPECT_EQ(s5, 200);
  EXPECT_EQ(exported["count"], 1);
  EXPECT_EQ(exported["strata"]["seen/synthesized"], 1);
  const auto [s6, none] = get("/export?map_label=unseen");
  EXPECT_EQ(none["count"], 0);

  auto jsonl = client->Get("/export?format=jsonl");
  ASSERT_TRUE(jsonl);
  EXPECT_EQ(jsonl->get_header_value("Content-Type"), "application/x-ndjson");
  EXPECT_EQ(std::count(jsonl->body.begin(), jsonl->body.end(), '\n'), 1);
  EXPECT_EQ(planner::parse_trajectory_line(jsonl->body.substr(0, jsonl->body.size() - 1)).purchased, script.cart);
}

TEST_F(HttpApiTest, ErrorResponses)
{
  const auto [s1, bad] = post("/sessions", "not json");
  EXPECT_EQ(s1, 400);
  EXPECT_EQ(bad["error"], "bad_request");
  const auto [s2, missing_field] = post("/sessions", R"({"participant_id": "p"})");
  EXPECT_EQ(s2, 400);
  const auto [s3, bad_round] =
    post("/sessions", R"({"participant_id": "p", "map_id": "seen", "caption_id": "syn-s0001", "round_kind": "x"})");
  EXPECT_EQ(s3, 400);
  const auto [s4, no_map] = post("/sessions", R"({"participant_id": "p", "map_id": "mars", "caption_id": "syn-s0001"})");
  EXPECT_EQ(s4, 404);
  const auto [s5, no_caption] = post("/sessions", R"({"participant_id": "p", "map_id": "seen", "caption_id": "zz"})");
  EXPECT_EQ(s5, 404);
  EXPECT_EQ(no_caption["error"], "unknown_caption");

  const std::string id = start("p");
  const auto [s6, dup] = post("/sessions", R"({"participant_id": "p", "map_id": "unseen", "caption_id": "syn-s0001"})");
  EXPECT_EQ(s6, 409);
  EXPECT_EQ(dup["error"], "active_session");
  const auto [s7, empty] = post("/sessions/" + id + "/complete", "");
  EXPECT_EQ(s7, 422);
  EXPECT_EQ(empty["error"], "empty_log");
  post("/sessions/" + id + "/events", R"({"events": [{"kind": "move", "position": [2.0, 1.0], "t": 1}]})");
  const auto [s8, far] = post("/sessions/" + id + "/complete", "");
  EXPECT_EQ(s8, 422);
  EXPECT_EQ(far["error"], "not_at_cashier");
  const auto [s9, bad_event] = post("/sessions/" + id + "/events", R"({"events": [{"kind": "fly"}]})");
  EXPECT_EQ(s9, 400);
  const auto [s10, no_events] = post("/sessions/" + id + "/events", R"({"moves": []})");
  EXPECT_EQ(s10, 400);
  const auto [s11, unknown] = get("/sessions/nope");
  EXPECT_EQ(s11, 404);
  EXPECT_EQ(unknown["error"], "unknown_session");
  const auto [s12, unknown_events] = post("/sessions/nope/events", R"({"events": []})");
  EXPECT_EQ(s12, 404);
}

TEST_F(HttpApiTest, ServesStaticApp)
{
  auto res = client->Get("/app/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>collector</html>");
}

}  // namespace
}  // namespace shoptraj::collection
