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

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"
#include "shoptraj/llm/gateway.hpp"
#include "shoptraj/llm/structured.hpp"
#include "test_support.hpp"

namespace shoptraj::llm
{
namespace
{

using nlohmann::json;

PromptRequest request(const std::string & tag, const std::string & user)
{
  PromptRequest r;
  r.system = "sys";
  r.user = user;
  r.tag = tag;
  return r;
}

template <typename E>
std::string code_of(const std::function<void()> & fn)
{
  try {
    fn();
  } catch (const E & e) {
    return e.code();
  }
  return "no error";
}

// Local chat-completion stub that answers from a scripted status queue.
class StubServer
{
public:
  StubServer()
  {
    server_.Post("/v1/chat", [this](const httplib::Request & req, httplib::Response & res) {
      std::lock_guard<std::mutex> lock(mutex_);
      bodies_.push_back(req.body);
      auth_ = req.get_header_value("Authorization");
      const int status = statuses_.empty() ? 200 : statuses_.front();
      if (!statuses_.empty()) {
        statuses_.pop_front();
      }
      res.status = status;
      if (status == 200) {
        res.set_content(reply_, "application/json");
      } else {
        res.set_content("error", "text/plain");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer()
  {
    server_.stop();
    thread_.join();
  }

  void script(std::deque<int> statuses, std::string reply = "")
  {
    std::lock_guard<std::mutex> lock(mutex_);
    statuses_ = std::move(statuses);
    reply_ = reply.empty()
      ? json{{"choices", json::array({{{"message", {{"content", "hello"}}}}})}}.dump()
      : std::move(reply);
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat"; }
  std::vector<std::string> bodies()
  {
    std::lock_guard<std::mutex> lock(mutex_);
    return bodies_;
  }
  std::string auth()
  {
    std::lock_guard<std::mutex> lock(mutex_);
    return auth_;
  }

private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mutex_;
  std::deque<int> statuses_;
  std::string reply_;
  std::vector<std::string> bodies_;
  std::string auth_;
};

BackendConfig live_config(const std::string & endpoint)
{
  BackendConfig c;
  c.kind = BackendKind::live;
  c.endpoint = endpoint;
  c.api_key_env = "SHOPTRAJ_TEST_KEY";
  c.max_retries = 3;
  c.backoff_base = 0.5;
  c.timeout_seconds = 5.0;
  return c;
}

class LiveBackendTest : public ::testing::Test
{
protected:
  void SetUp() override { ::setenv("SHOPTRAJ_TEST_KEY", "secret", 1); }

  LiveBackend make()
  {
    return LiveBackend(live_config(server.endpoint()), [this](std::chrono::duration<double> d) {
      delays.push_back(d.count());
    });
  }

  StubServer server;
  std::vector<double> delays;
};

TEST(FixtureKey, HashOfUserPromptUnderTag)
{
  // sha256("abc") = ba7816bf8f01cfea414140de5dae2223...
  EXPECT_EQ(fixture_key(request("step1", "abc")), "step1/ba7816bf8f01cfea");
  // The system prompt and sampling settings do not affect the key.
  PromptRequest r = request("step1", "abc");
  r.system = "other";
  r.temperature = 0.1;
  EXPECT_EQ(fixture_key(r), "step1/ba7816bf8f01cfea");
  EXPECT_EQ(fixture_path("/f", r), std::filesystem::path("/f/step1/ba7816bf8f01cfea.txt"));
}

TEST(MockBackend, ReplaysFixtureAndReportsMissing)
{
  testing::TempDir dir;
  const PromptRequest r = request("step2", "plan please");
  write_text_file(fixture_path(dir.path(), r), "{\"fruit\": 2}");
  MockBackend backend(dir.path());
  EXPECT_EQ(backend.complete(r), "{\"fruit\": 2}");
  EXPECT_EQ(backend.complete(r), backend.complete(r));
  EXPECT_EQ(code_of<GatewayError>([&] { backend.complete(request("step2", "other")); }), "missing_fixture");
}

TEST(RecordingBackend, WritesReplayableFixtures)
{
  testing::TempDir src;
  testing::TempDir rec;
  const PromptRequest r = request("step3", "items for fruit");
  write_text_file(fixture_path(src.path(), r), "[\"Apples\"]");
  RecordingBackend recorder(std::make_unique<MockBackend>(src.path()), rec.path());
  EXPECT_EQ(recorder.complete(r), "[\"Apples\"]");
  EXPECT_EQ(MockBackend(rec.path()).complete(r), "[\"Apples\"]");
}

TEST(Config, ValidationRules)
{
  BackendConfig c;
  c.kind = BackendKind::mock;
  EXPECT_EQ(code_of<ConfigError>([&] { validate_config(c); }), "config_error");
  c.fixture_dir = "/tmp";
  EXPECT_NO_THROW(validate_config(c));
  c.max_retries = -1;
  EXPECT_EQ(code_of<ConfigError>([&] { validate_config(c); }), "config_error");
  c.max_retries = 0;
  c.max_in_flight = 0;
  EXPECT_EQ(code_of<ConfigError>([&] { validate_config(c); }), "config_error");
  c.max_in_flight = 1;
  c.backoff_base = -1.0;
  EXPECT_EQ(code_of<ConfigError>([&] { validate_config(c); }), "config_error");

  BackendConfig live = live_config("");
  EXPECT_EQ(code_of<ConfigError>([&] { validate_config(live); }), "config_error");
  live.endpoint = "http://localhost:1/x";
  EXPECT_NO_THROW(validate_config(live));
  live.api_key_env = "";
  EXPECT_EQ(code_of<ConfigError>([&] { validate_config(live); }), "config_error");
}

TEST(Config, FromJsonResolvesRelativePaths)
{
  const json j = {{"kind", "mock"}, {"fixture_dir", "fx"}, {"max_retries", 5}};
  const BackendConfig c = backend_config_from_json(j, "/base");
  EXPECT_EQ(c.kind, BackendKind::mock);
  EXPECT_EQ(c.fixture_dir, std::filesystem::path("/base/fx"));
  EXPECT_EQ(c.max_retries, 5);
  EXPECT_EQ(
    code_of<ConfigError>([] { backend_config_from_json({{"kind", "cloud"}}, "/"); }), "config_error");
}

TEST(RetryPolicy, Bounds)
{
  const RetryPolicy p{3, 1.0, 2.0};
  EXPECT_DOUBLE_EQ(p.max_delay(0), 1.0);
  EXPECT_DOUBLE_EQ(p.max_delay(2), 4.0);
  EXPECT_DOUBLE_EQ(p.max_total_delay(), 7.0);
}

TEST_F(LiveBackendTest, SuccessSendsChatRequest)
{
  server.script({});
  LiveBackend b = make();
  PromptRequest r = request("step1", "write captions");
  r.temperature = 0.3;
  r.max_tokens = 77;
  EXPECT_EQ(b.complete(r), "hello");
  EXPECT_EQ(b.last_attempts(), 1);
  EXPECT_TRUE(delays.empty());
  EXPECT_EQ(server.auth(), "Bearer secret");
  const json body = json::parse(server.bodies().at(0));
  EXPECT_EQ(body["model"], "gpt-4");
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "write captions");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.3);
  EXPECT_EQ(body["max_tokens"], 77);
}

TEST_F(LiveBackendTest, RetriesTransientFailuresWithBoundedBackoff)
{
  server.script({500, 429, 503});
  LiveBackend b = make();
  EXPECT_EQ(b.complete(request("step1", "x")), "hello");
  EXPECT_EQ(b.last_attempts(), 4);
  ASSERT_EQ(delays.size(), 3u);
  double total = 0.0;
  for (std::size_t k = 0; k < delays.size(); ++k) {
    EXPECT_GE(delays[k], 0.0);
    EXPECT_LE(delays[k], 0.5 * std::pow(2.0, static_cast<double>(k)));
    total += delays[k];
  }
  EXPECT_NEAR(b.last_total_backoff(), total, 1e-12);
  const RetryPolicy policy{3, 0.5, 2.0};
  EXPECT_LE(total, policy.max_total_delay());
}

TEST_F(LiveBackendTest, ExhaustedRetriesAreTransportFailure)
{
  server.script({500, 500, 500, 500, 500});
  LiveBackend b = make();
  EXPECT_EQ(code_of<GatewayError>([&] { b.complete(request("step1", "x")); }), "transport_failure");
  EXPECT_EQ(b.last_attempts(), 4);
  EXPECT_EQ(delays.size(), 3u);
}

TEST_F(LiveBackendTest, AuthAndRejectionAreNotRetried)
{
  server.script({401});
  LiveBackend b = make();
  EXPECT_EQ(code_of<GatewayError>([&] { b.complete(request("step1", "x")); }), "auth_failure");
  EXPECT_EQ(b.last_attempts(), 1);
  server.script({400});
  EXPECT_EQ(code_of<GatewayError>([&] { b.complete(request("step1", "x")); }), "request_rejected");
  EXPECT_EQ(b.last_attempts(), 1);
  EXPECT_TRUE(delays.empty());
}

TEST_F(LiveBackendTest, MalformedBodyIsBadResponse)
{
  server.script({}, "{\"choices\": []}");
  LiveBackend b = make();
  EXPECT_EQ(code_of<GatewayError>([&] { b.complete(request("step1", "x")); }), "bad_response");
}

TEST_F(LiveBackendTest, MissingKeyIsAuthFailure)
{
  ::unsetenv("SHOPTRAJ_TEST_KEY");
  LiveBackend b = make();
  EXPECT_EQ(code_of<GatewayError>([&] { b.complete(request("step1", "x")); }), "auth_failure");
  EXPECT_TRUE(server.bodies().empty());
}

TEST(LiveBackend, UnreachableHostIsTransportFailure)
{
  ::setenv("SHOPTRAJ_TEST_KEY", "secret", 1);
  BackendConfig c = live_config("http://127.0.0.1:1/v1/chat");
  c.max_retries = 2;
  int sleeps = 0;
  LiveBackend b(c, [&](std::chrono::duration<double>) { ++sleeps; });
  EXPECT_EQ(code_of<GatewayError>([&] { b.complete(request("step1", "x")); }), "transport_failure");
  EXPECT_EQ(b.last_attempts(), 3);
  EXPECT_EQ(sleeps, 2);
}

// Counts concurrent calls to check the gateway's in-flight bound.
class SlowBackend final : public Backend
{
public:
  std::string complete(const PromptRequest &) override
  {
    const int now = ++current;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --current;
    return "ok";
  }
  static inline std::atomic<int> current{0};
  static inline std::atomic<int> peak{0};
};

TEST(Gateway, BoundsInFlightRequests)
{
  Gateway gw(std::make_unique<SlowBackend>(), 2);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] { EXPECT_EQ(gw.complete(request("t", "x")), "ok"); });
  }
  for (auto & t : threads) {
    t.join();
  }
  EXPECT_LE(SlowBackend::peak.load(), 2);
  EXPECT_GE(SlowBackend::peak.load(), 1);
}

TEST(Structured, ExtractJsonSkipsProse)
{
  const auto obj = extract_json("Sure! {bad} here: {\"a\": \"}\", \"b\": [1]} done", true);
  ASSERT_TRUE(obj);
  EXPECT_EQ((*obj)["a"], "}");
  const auto list = extract_json("```json\n[\"x\", \"y\"]\n```", false);
  ASSERT_TRUE(list);
  EXPECT_EQ(list->size(), 2u);
  EXPECT_FALSE(extract_json("no json here", true));
  EXPECT_FALSE(extract_json("[1, 2]", true));
}

TEST(Structured, SchemaErrorsNameTheField)
{
  const Schema s = Schema::object(
    {{"caption", Schema::string()}, {"num_items", Schema::integer()}, {"tags", Schema::list_of(Schema::string())}});
  EXPECT_NO_THROW(parse_structured(R"({"caption": "c", "num_items": 3.0, "tags": []})", s));
  try {
    parse_structured(R"({"caption": "c", "tags": []})", s);
    FAIL();
  } catch (const StructuredOutputError & e) {
    EXPECT_EQ(e.code(), "missing_field");
    EXPECT_EQ(e.field(), "num_items");
  }
  try {
    parse_structured(R"({"caption": "c", "num_items": 2.5, "tags": []})", s);
    FAIL();
  } catch (const StructuredOutputError & e) {
    EXPECT_EQ(e.code(), "type_mismatch");
    EXPECT_EQ(e.field(), "num_items");
  }
  try {
    parse_structured(R"({"caption": "c", "num_items": 1, "tags": ["a", 4]})", s);
    FAIL();
  } catch (const StructuredOutputError & e) {
    EXPECT_EQ(e.field(), "tags[1]");
  }
  try {
    parse_structured("nothing", s);
    FAIL();
  } catch (const StructuredOutputError & e) {
    EXPECT_EQ(e.code(), "no_object");
    EXPECT_EQ(e.field(), "");
  }
  EXPECT_NE(format_instructions(s).find("\"num_items\": \"<integer>\""), std::string::npos);
}

// Serves a fixed sequence of replies and records the prompts it saw.
class SequenceBackend final : public Backend
{
public:
  SequenceBackend(std::vector<std::string> replies, std::vector<std::string> * seen)
  : replies_(std::move(replies)), seen_(seen)
  {
  }
  std::string complete(const PromptRequest & req) override
  {
    seen_->push_back(req.user);
    return replies_.at(next_++);
  }

private:
  std::vector<std::string> replies_;
  std::vector<std::string> * seen_;
  std::size_t next_ = 0;
};

TEST(Structured, RepromptsExactlyOnce)
{
  const Schema s = Schema::map_of(Schema::integer());
  std::vector<std::string> seen;
  Gateway ok(std::make_unique<SequenceBackend>(std::vector<std::string>{"oops", "{\"a\": 1}"}, &seen));
  EXPECT_EQ(complete_structured(ok, request("step2", "plan"), s)["a"], 1);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0], "plan");
  EXPECT_NE(seen[1].find("Your previous reply could not be used"), std::string::npos);

  seen.clear();
  Gateway bad(std::make_unique<SequenceBackend>(
    std::vector<std::string>{"{\"a\": \"x\"}", "{\"a\": \"y\"}", "{\"a\": 3}"}, &seen));
  EXPECT_EQ(code_of<StructuredOutputError>([&] { complete_structured(bad, request("step2", "plan"), s); }), "type_mismatch");
  EXPECT_EQ(seen.size(), 2u);
}

TEST(Structured, ValidatorRejectionTriggersReprompt)
{
  const Schema s = Schema::map_of(Schema::integer());
  std::vector<std::string> seen;
  Gateway gw(std::make_unique<SequenceBackend>(std::vector<std::string>{"{\"a\": 0}", "{\"a\": 2}"}, &seen));
  const json v = complete_structured(gw, request("step2", "plan"), s, [](const json & j) {
    if (j["a"] == 0) {
      throw PipelineError("empty_plan", "zero");
    }
  });
  EXPECT_EQ(v["a"], 2);
  EXPECT_EQ(seen.size(), 2u);
}

}  // namespace
}  // namespace shoptraj::llm
