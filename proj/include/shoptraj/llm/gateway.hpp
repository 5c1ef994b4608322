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

#ifndef SHOPTRAJ_LLM_GATEWAY_HPP_
#define SHOPTRAJ_LLM_GATEWAY_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace shoptraj::llm
{

struct PromptRequest
{
  std::string system;
  std::string user;
  double temperature = 1.0;
  int max_tokens = 2048;
  std::string tag;  // pipeline step label, e.g. "step1"
};

enum class BackendKind { live, mock };

struct BackendConfig
{
  BackendKind kind = BackendKind::mock;
  std::string endpoint;        // live: full URL of the chat-completion route
  std::string model_name = "gpt-4";
  std::string api_key_env = "OPENAI_API_KEY";
  std::filesystem::path fixture_dir;  // mock: replay directory
  std::filesystem::path record_dir;   // optional: write every reply as a fixture
  int max_retries = 3;
  double backoff_base = 1.0;  // seconds
  int max_in_flight = 4;
  double timeout_seconds = 120.0;
};

/// Throws ConfigError when required fields for the chosen kind are missing.
void validate_config(const BackendConfig & config);
BackendConfig backend_config_from_json(const nlohmann::json & j, const std::filesystem::path & base_dir);

/// Fixture key for the mock backend: "<tag>/<first 16 hex of sha256(user)>".
std::string fixture_key(const PromptRequest & req);
std::filesystem::path fixture_path(const std::filesystem::path & fixture_dir, const PromptRequest & req);

class Backend
{
public:
  virtual ~Backend() = default;
  virtual std::string complete(const PromptRequest & req) = 0;
};

/// Replays fixture files; a pure function of (fixture_dir, tag, hash(user)).
class MockBackend final : public Backend
{
public:
  explicit MockBackend(std::filesystem::path fixture_dir);
  std::string complete(const PromptRequest & req) override;

private:
  std::filesystem::path fixture_dir_;
};

using Sleeper = std::function<void(std::chrono::duration<double>)>;

/// Exponential backoff with full jitter: attempt k (0-based) sleeps a
/// uniform draw from [0, base * 2^k].
struct RetryPolicy
{
  int max_retries = 3;
  double base_seconds = 1.0;
  double factor = 2.0;

  double max_delay(int attempt) const;
  /// Upper bound on total sleep over all retries: base * (factor^R - 1) / (factor - 1).
  double max_total_delay() const;
};

/// Chat-completion client over HTTP(S).
class LiveBackend final : public Backend
{
public:
  explicit LiveBackend(BackendConfig config, Sleeper sleeper = {}, std::uint64_t jitter_seed = 0x5eed);
  std::string complete(const PromptRequest & req) override;

  /// Transport attempts issued by the most recent complete() call.
  int last_attempts() const { return last_attempts_; }
  double last_total_backoff() const { return last_total_backoff_; }

private:
  BackendConfig config_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
  int last_attempts_ = 0;
  double last_total_backoff_ = 0.0;
};

/// Wraps another backend and writes each reply under record_dir using the
/// mock key layout, so a recorded run can be replayed offline.
class RecordingBackend final : public Backend
{
public:
  RecordingBackend(std::unique_ptr<Backend> inner, std::filesystem::path record_dir);
  std::string complete(const PromptRequest & req) override;

private:
  std::unique_ptr<Backend> inner_;
  std::filesystem::path record_dir_;
  std::mutex mutex_;
};

/// Shareable front end. Bounds concurrent in-flight requests.
class Gateway
{
public:
  Gateway(std::unique_ptr<Backend> backend, int max_in_flight = 4);

  std::string complete(const PromptRequest & req);
  int max_in_flight() const { return max_in_flight_; }

private:
  std::unique_ptr<Backend> backend_;
  int max_in_flight_;
  int in_flight_ = 0;
  std::mutex mutex_;
  std::condition_variable cv_;
};

std::unique_ptr<Backend> make_backend(const BackendConfig & config);
std::unique_ptr<Gateway> make_gateway(const BackendConfig & config);

/// One-shot convenience around make_backend(config)->complete(req).
std::string complete(const BackendConfig & config, const PromptRequest & req);

}  // namespace shoptraj::llm

#endif  // SHOPTRAJ_LLM_GATEWAY_HPP_
