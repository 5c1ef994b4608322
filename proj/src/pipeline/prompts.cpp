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

#include "shoptraj/pipeline/prompts.hpp"

#include <cctype>

#include "prompt_assets.hpp"
#include "shoptraj/errors.hpp"

namespace shoptraj::pipeline
{

std::string_view prompt_asset(std::string_view name)
{
  for (const auto & asset : generated::kPromptAssets) {
    if (asset.name == name) {
      return asset.text;
    }
  }
  throw PipelineError("unknown_prompt", "no prompt asset named '" + std::string(name) + "'");
}

std::string_view prompt_set_version() { return generated::kPromptSetVersion; }

std::string render_template(std::string_view tpl, const std::map<std::string, std::string> & values)
{
  std::string out;
  out.reserve(tpl.size() * 2);
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] == '{') {
      std::size_t j = i + 1;
      while (j < tpl.size() && (std::islower(static_cast<unsigned char>(tpl[j])) || tpl[j] == '_')) {
        ++j;
      }
      if (j < tpl.size() && tpl[j] == '}' && j > i + 1) {
        const std::string name(tpl.substr(i + 1, j - i - 1));
        const auto it = values.find(name);
        if (it == values.end()) {
          throw PipelineError("unfilled_placeholder", "template placeholder {" + name + "} has no value");
        }
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out.push_back(tpl[i++]);
  }
  return out;
}

}  // namespace shoptraj::pipeline
