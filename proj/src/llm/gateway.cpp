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

#include "shoptraj/llm/gateway.hpp"

#include <cmath>
#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"

namespace shoptraj::llm
{

using nlohmann::json;

void validate_config(const BackendConfig & config)
{
  if (config.max_retries < 0) {
    throw ConfigError("config_error", "backend.max_retries must be >= 0");
  }
  if (config.max_in_flight < 1) {
    throw ConfigError("config_error", "backend.max_in_flight must be >= 1");
  }
  if (config.backoff_base < 0.0) {
    throw ConfigError("config_error", "backend.backoff_base must be >= 0");
  }
  if (config.kind == BackendKind::live) {
    if (config.endpoint.empty() || config.api_key_env.empty()) {
      throw ConfigError("config_error", "live backend requires endpoint and api_key_env");
    }
  } else if (config.fixture_dir.empty()) {
    throw ConfigError("config_error", "mock backend requires fixture_dir");
  }
}

BackendConfig backend_config_from_json(const json & j, const std::filesystem::path & base_dir)
{
  BackendConfig c;
  const std::string kind = j.value("kind", std::string("mock"));
  if (kind == "live") {
    c.kind = BackendKind::live;
  } else if (kind == "mock") {
    c.kind = BackendKind::mock;
  } else {
    throw ConfigError("config_error", "backend.kind must be 'live' or 'mock'");
  }
  c.endpoint = j.value("endpoint", c.endpoint);
  c.model_name = j.value("model_name", c.model_name);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  auto resolve = [&](const std::string & p) -> std::filesystem::path {
    if (p.empty()) {
      return {};
    }
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  c.fixture_dir = resolve(j.value("fixture_dir", std::string()));
  c.record_dir = resolve(j.value("record_dir", std::string()));
  c.max_retries = j.value("max_retries", c.max_retries);
  c.backoff_base = j.value("backoff_base", c.backoff_base);
  c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
  c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  validate_config(c);
  return c;
}

std::string fixture_key(const PromptRequest & req)
{
  return req.tag + "/" + sha256_hex(req.user).substr(0, 16);
}

std::filesystem::path fixture_path(const std::filesystem::path & fixture_dir, const PromptRequest & req)
{
  return fixture_dir / (fixture_key(req) + ".txt");
}

MockBackend::MockBackend(std::filesystem::path fixture_dir) : fixture_dir_(std::move(fixture_dir)) {}

std::string MockBackend::complete(const PromptRequest & req)
{
  const auto path = fixture_path(fixture_dir_, req);
  if (!std::filesystem::exists(path)) {
    throw GatewayError(
      "missing_fixture", "no mock fixture for tag '" + req.tag + "' at " + path.string());
  }
  return read_text_file(path);
}

double RetryPolicy::max_delay(int attempt) const
{
  return base_seconds * std::pow(factor, attempt);
}

double RetryPolicy::max_total_delay() const
{
  if (max_retries == 0) {
    return 0.0;
  }
  return base_seconds * (std::pow(factor, max_retries) - 1.0) / (factor - 1.0);
}

namespace
{

struct Endpoint
{
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string & url)
{
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw ConfigError("config_error", "endpoint is not an http(s) URL: " + url);
  }
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

enum class Outcome { ok, transient, auth, fatal };

}  // namespace

LiveBackend::LiveBackend(BackendConfig config, Sleeper sleeper, std::uint64_t jitter_seed)
: config_(std::move(config)),
  policy_{config_.max_retries, config_.backoff_base, 2.0},
  sleeper_(std::move(sleeper)),
  rng_(jitter_seed)
{
  validate_config(config_);
  if (!sleeper_) {
    sleeper_ = [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
  }
}

std::string LiveBackend::complete(const PromptRequest & req)
{
  const char * key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw GatewayError(
      "auth_failure", "environment variable " + config_.api_key_env + " is not set");
  }
  const Endpoint ep = split_endpoint(config_.endpoint);
  const json body = {
    {"model", config_.model_name},
    {"messages",
     json::array(
       {{{"role", "system"}, {"content", req.system}}, {{"role", "user"}, {"content", req.user}}})},
    {"temperature", req.temperature},
    {"max_tokens", req.max_tokens}};
  const std::string payload = body.dump();
  const httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};

  last_attempts_ = 0;
  last_total_backoff_ = 0.0;
  std::string last_error;
  for (int attempt = 0; attempt <= policy_.max_retries; ++attempt) {
    if (attempt > 0) {
      double delay = 0.0;
      {
        std::lock_guard<std::mutex> lock(rng_mutex_);
        std::uniform_real_distribution<double> jitter(0.0, policy_.max_delay(attempt - 1));
        delay = jitter(rng_);
      }
      last_total_backoff_ += delay;
      sleeper_(std::chrono::duration<double>(delay));
    }
    ++last_attempts_;

    httplib::Client client(ep.origin);
    const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    auto res = client.Post(ep.path, headers, payload, "application/json");

    Outcome outcome = Outcome::ok;
    if (!res) {
      outcome = Outcome::transient;
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status == 401 || res->status == 403) {
      outcome = Outcome::auth;
      last_error = "HTTP " + std::to_string(res->status);
    } else if (res->status == 429 || res->status >= 500) {
      outcome = Outcome::transient;
      last_error = "HTTP " + std::to_string(res->status);
    } else if (res->status != 200) {
      outcome = Outcome::fatal;
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
    }

    switch (outcome) {
      case Outcome::ok:
        try {
          const json reply = json::parse(res->body);
          return reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception & e) {
          throw GatewayError("bad_response", std::string("malformed completion body: ") + e.what());
        }
      case Outcome::auth:
        throw GatewayError("auth_failure", "authentication rejected: " + last_error);
      case Outcome::fatal:
        throw GatewayError("request_rejected", last_error);
      case Outcome::transient:
        spdlog::warn("[{}] attempt {} failed: {}", req.tag, attempt + 1, last_error);
        break;
    }
  }
  throw GatewayError(
    "transport_failure", "giving up after " + std::to_string(last_attempts_) +
                           " attempts: " + last_error);
}

RecordingBackend::RecordingBackend(std::unique_ptr<Backend> inner, std::filesystem::path record_dir)
: inner_(std::move(inner)), record_dir_(std::move(record_dir))
{
}

std::string RecordingBackend::complete(const PromptRequest & req)
{
  std::string reply = inner_->complete(req);
  std::lock_guard<std::mutex> lock(mutex_);
  write_text_file(fixture_path(record_dir_, req), reply);
  return reply;
}

Gateway::Gateway(std::unique_ptr<Backend> backend, int max_in_flight)
: backend_(std::move(backend)), max_in_flight_(std::max(1, max_in_flight))
{
}

std::string Gateway::complete(const PromptRequest & req)
{
  {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [this] { return in_flight_ < max_in_flight_; });
    ++in_flight_;
  }
  struct Release
  {
    Gateway * self;
    ~Release()
    {
      {
        std::lock_guard<std::mutex> lock(self->mutex_);
        --self->in_flight_;
      }
      self->cv_.notify_one();
    }
  } release{this};
  return backend_->complete(req);
}

std::unique_ptr<Backend> make_backend(const BackendConfig & config)
{
  validate_config(config);
  std::unique_ptr<Backend> backend;
  if (config.kind == BackendKind::live) {
    backend = std::make_unique<LiveBackend>(config);
  } else {
    backend = std::make_unique<MockBackend>(config.fixture_dir);
  }
  if (!config.record_dir.empty()) {
    backend = std::make_unique<RecordingBackend>(std::move(backend), config.record_dir);
  }
  return backend;
}

std::unique_ptr<Gateway> make_gateway(const BackendConfig & config)
{
  return std::make_unique<Gateway>(make_backend(config), config.max_in_flight);
}

std::string complete(const BackendConfig & config, const PromptRequest & req)
{
  return make_backend(config)->complete(req);
}

}  // namespace shoptraj::llm
