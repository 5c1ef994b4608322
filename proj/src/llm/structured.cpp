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

#include "shoptraj/llm/structured.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "shoptraj/errors.hpp"

namespace shoptraj::llm
{

using nlohmann::json;

Schema Schema::string()
{
  Schema s;
  s.kind_ = Kind::string;
  return s;
}

Schema Schema::integer()
{
  Schema s;
  s.kind_ = Kind::integer;
  return s;
}

Schema Schema::list_of(Schema element)
{
  Schema s;
  s.kind_ = Kind::list;
  s.element_ = std::make_shared<const Schema>(std::move(element));
  return s;
}

Schema Schema::map_of(Schema value)
{
  Schema s;
  s.kind_ = Kind::map;
  s.element_ = std::make_shared<const Schema>(std::move(value));
  return s;
}

Schema Schema::object(std::vector<std::pair<std::string, Schema>> fields)
{
  Schema s;
  s.kind_ = Kind::object;
  s.fields_ = std::move(fields);
  return s;
}

std::string Schema::describe() const
{
  switch (kind_) {
    case Kind::string:
      return "string";
    case Kind::integer:
      return "integer";
    case Kind::list:
      return "list<" + element_->describe() + ">";
    case Kind::map:
      return "map<string, " + element_->describe() + ">";
    case Kind::object: {
      std::string out = "{";
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        out += (i ? ", " : "") + fields_[i].first + ": " + fields_[i].second.describe();
      }
      return out + "}";
    }
  }
  return "?";
}

namespace
{

// Index one past the bracket matching raw[start], or npos.
std::size_t match_bracket(std::string_view raw, std::size_t start)
{
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      ++depth;
    } else if (c == '}' || c == ']') {
      if (--depth == 0) {
        return i + 1;
      }
    }
  }
  return std::string_view::npos;
}

std::string join_path(const std::string & base, const std::string & key)
{
  return base.empty() ? key : base + "." + key;
}

json skeleton(const Schema & s)
{
  switch (s.kind()) {
    case Schema::Kind::string:
      return "<string>";
    case Schema::Kind::integer:
      return "<integer>";
    case Schema::Kind::list:
      return json::array({skeleton(s.element()), "..."});
    case Schema::Kind::map:
      return json{{"<key>", skeleton(s.element())}, {"...", "..."}};
    case Schema::Kind::object: {
      json o = json::object();
      for (const auto & [name, field] : s.fields()) {
        o[name] = skeleton(field);
      }
      return o;
    }
  }
  return nullptr;
}

}  // namespace

std::optional<json> extract_json(std::string_view raw, bool want_object)
{
  const char open = want_object ? '{' : '[';
  for (std::size_t pos = raw.find(open); pos != std::string_view::npos; pos = raw.find(open, pos + 1)) {
    const std::size_t end = match_bracket(raw, pos);
    if (end == std::string_view::npos) {
      continue;
    }
    json parsed = json::parse(raw.substr(pos, end - pos), nullptr, false);
    if (parsed.is_discarded()) {
      continue;
    }
    if (want_object ? parsed.is_object() : parsed.is_array()) {
      return parsed;
    }
  }
  return std::nullopt;
}

void validate_against(const json & value, const Schema & schema, const std::string & path)
{
  const std::string where = path.empty() ? std::string("<root>") : path;
  auto mismatch = [&](const char * expected) {
    throw StructuredOutputError(
      "type_mismatch", where,
      "field '" + where + "' should be " + expected + " but is " + value.type_name() + " (" +
        value.dump() + ")");
  };
  switch (schema.kind()) {
    case Schema::Kind::string:
      if (!value.is_string()) {
        mismatch("a string");
      }
      return;
    case Schema::Kind::integer:
      if (value.is_number_integer()) {
        return;
      }
      if (value.is_number_float()) {
        const double d = value.get<double>();
        if (std::isfinite(d) && std::floor(d) == d) {
          return;
        }
      }
      mismatch("an integer");
      return;
    case Schema::Kind::list:
      if (!value.is_array()) {
        mismatch("a list");
      }
      for (std::size_t i = 0; i < value.size(); ++i) {
        validate_against(value[i], schema.element(), path + "[" + std::to_string(i) + "]");
      }
      return;
    case Schema::Kind::map:
      if (!value.is_object()) {
        mismatch("an object");
      }
      for (const auto & [key, v] : value.items()) {
        validate_against(v, schema.element(), join_path(path, key));
      }
      return;
    case Schema::Kind::object:
      if (!value.is_object()) {
        mismatch("an object");
      }
      for (const auto & [name, field] : schema.fields()) {
        const std::string fpath = join_path(path, name);
        if (!value.contains(name)) {
          throw StructuredOutputError("missing_field", fpath, "required field '" + fpath + "' is missing");
        }
        validate_against(value.at(name), field, fpath);
      }
      return;
  }
}

json parse_structured(std::string_view raw, const Schema & schema)
{
  const bool want_object = schema.kind() != Schema::Kind::list;
  auto extracted = extract_json(raw, want_object);
  if (!extracted) {
    throw StructuredOutputError(
      "no_object", "", std::string("reply contains no parseable JSON ") + (want_object ? "object" : "list"));
  }
  validate_against(*extracted, schema);
  return std::move(*extracted);
}

std::string format_instructions(const Schema & schema)
{
  return "Return your answer as a single JSON " +
         std::string(schema.kind() == Schema::Kind::list ? "list" : "object") +
         " with exactly this shape (type: " + schema.describe() + "):\n```json\n" +
         skeleton(schema).dump(2) + "\n```";
}

PromptRequest reprompt_request(const PromptRequest & original, const std::string & error)
{
  PromptRequest r = original;
  r.user += "\n\nYour previous reply could not be used: " + error +
            "\nReply again and follow the required format and rules exactly.";
  return r;
}

json complete_structured(
  Gateway & gateway, const PromptRequest & request, const Schema & schema,
  const ReplyValidator & validator)
{
  auto attempt = [&](const PromptRequest & req) {
    json value = parse_structured(gateway.complete(req), schema);
    if (validator) {
      validator(value);
    }
    return value;
  };
  try {
    return attempt(request);
  } catch (const StructuredOutputError & e) {
    spdlog::warn("[{}] rejected reply ({}), re-prompting once", request.tag, e.what());
    return attempt(reprompt_request(request, e.what()));
  } catch (const PipelineError & e) {
    spdlog::warn("[{}] rejected reply ({}), re-prompting once", request.tag, e.what());
    return attempt(reprompt_request(request, e.what()));
  }
}

}  // namespace shoptraj::llm
