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


#ifndef SHOPTRAJ_TOOLS_SCRIPTED_LLM_HPP_
#define SHOPTRAJ_TOOLS_SCRIPTED_LLM_HPP_

#include <string>

#include "shoptraj/llm/gateway.hpp"

namespace shoptraj::tools
{

/// Deterministic stand-in for a chat model. Reads the pipeline prompts and
/// answers in the requested JSON shape; the reply depends only on the user
/// text, so a recorded run replays bit for bit.
class ScriptedBackend final : public llm::Backend
{
public:
  std::string complete(const llm::PromptRequest & req) override;
};

}  // namespace shoptraj::tools

#endif  // SHOPTRAJ_TOOLS_SCRIPTED_LLM_HPP_
