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

#ifndef SHOPTRAJ_PIPELINE_PROMPTS_HPP_
#define SHOPTRAJ_PIPELINE_PROMPTS_HPP_

#include <map>
#include <string>
#include <string_view>

namespace shoptraj::pipeline
{

// Prompt templates compiled in from assets/prompts/*.txt. Names are the file
// stems, e.g. "step2_user".
std::string_view prompt_asset(std::string_view name);
std::string_view prompt_set_version();

// Replaces every {name} placeholder (name = [a-z_]+). Throws
// PipelineError("unfilled_placeholder") when a placeholder has no value.
std::string render_template(std::string_view tpl, const std::map<std::string, std::string> & values);

}  // namespace shoptraj::pipeline

#endif  // SHOPTRAJ_PIPELINE_PROMPTS_HPP_
