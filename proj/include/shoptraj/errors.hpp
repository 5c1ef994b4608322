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

#ifndef SHOPTRAJ_ERRORS_HPP_
#define SHOPTRAJ_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace shoptraj
{

/// Base error. `code()` is a stable machine-readable reason such as
/// "geometric_violation" or "missing_fixture".
class Error : public std::runtime_error
{
public:
  Error(std::string code, const std::string & message)
  : std::runtime_error(message), code_(std::move(code))
  {
  }

  const std::string & code() const noexcept { return code_; }

private:
  std::string code_;
};

class MapError : public Error
{
public:
  using Error::Error;
};

class GatewayError : public Error
{
public:
  using Error::Error;
};

/// Raised when a model reply cannot be parsed or does not match its schema.
/// `field()` names the offending field path ("" when no object was found).
class StructuredOutputError : public Error
{
public:
  StructuredOutputError(std::string code, std::string field, const std::string & message)
  : Error(std::move(code), message), field_(std::move(field))
  {
  }

  const std::string & field() const noexcept { return field_; }

private:
  std::string field_;
};

class PipelineError : public Error
{
public:
  using Error::Error;
};

class PlanningError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

class SessionError : public Error
{
public:
  using Error::Error;
};

}  // namespace shoptraj

#endif  // SHOPTRAJ_ERRORS_HPP_
