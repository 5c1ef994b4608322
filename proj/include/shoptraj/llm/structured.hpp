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

#ifndef SHOPTRAJ_LLM_STRUCTURED_HPP_
#define SHOPTRAJ_LLM_STRUCTURED_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "shoptraj/llm/gateway.hpp"

namespace shoptraj::llm
{

/// Describes the shape a model reply must have. Objects list required
/// fields; maps have string keys and uniformly typed values.
class Schema
{
public:
  enum class Kind { string, integer, list, map, object };

  static Schema string();
  static Schema integer();
  static Schema list_of(Schema element);
  static Schema map_of(Schema value);
  static Schema object(std::vector<std::pair<std::string, Schema>> fields);

  Kind kind() const { return kind_; }
  const Schema & element() const { return *element_; }
  const std::vector<std::pair<std::string, Schema>> & fields() const { return fields_; }

  /// Human-readable type, e.g. "map<string, integer>".
  std::string describe() const;

private:
  Kind kind_ = Kind::string;
  std::shared_ptr<const Schema> element_;
  std::vector<std::pair<std::string, Schema>> fields_;
};

/// Finds the first balanced JSON value embedded in free text (prose, code
/// fences) whose top-level kind matches `want_object`. Returns nullopt when
/// none parses.
std::optional<nlohmann::json> extract_json(std::string_view raw, bool want_object);

/// Throws StructuredOutputError naming the offending field path.
void validate_against(const nlohmann::json & value, const Schema & schema, const std::string & path = "");

/// Extracts and validates. Error codes: no_object, missing_field, type_mismatch.
nlohmann::json parse_structured(std::string_view raw, const Schema & schema);

/// Text appended to prompts in place of {format_instructions}.
std::string format_instructions(const Schema & schema);

/// Domain check run after schema validation; throw StructuredOutputError
/// (or any shoptraj::Error) to reject the reply.
using ReplyValidator = std::function<void(const nlohmann::json &)>;

/// Requests, parses and validates. A rejected reply triggers exactly one
/// re-prompt with the error appended; a second rejection is rethrown.
nlohmann::json complete_structured(
  Gateway & gateway, const PromptRequest & request, const Schema & schema,
  const ReplyValidator & validator = {});

/// The follow-up prompt used after a rejected reply.
PromptRequest reprompt_request(const PromptRequest & original, const std::string & error);

}  // namespace shoptraj::llm

#endif  // SHOPTRAJ_LLM_STRUCTURED_HPP_
