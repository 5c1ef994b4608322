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


// Records mock-backend fixtures by running synthesis against the scripted
// responder. One run per paraphrase count so every prompt variant exists.

#include <cstdlib>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "scripted_llm.hpp"
#include "shoptraj/errors.hpp"
#include "shoptraj/pipeline/synth.hpp"

int main(int argc, char ** argv)
{
  using namespace shoptraj;
  CLI::App app{"Record LLM fixtures with the scripted responder"};
  std::string config_path;
  std::string out_dir;
  std::vector<int> ks{2, 4, 8};
  app.add_option("config", config_path, "pipeline config")->required()->check(CLI::ExistingFile);
  app.add_option("out", out_dir, "fixture directory to write")->required();
  app.add_option("-k,--paraphrases", ks, "paraphrase counts to record");
  CLI11_PARSE(app, argc, argv);

  try {
    for (const int k : ks) {
      auto cfg = pipeline::load_config(config_path, {{"paraphrases", k}});
      llm::Gateway gw(
        std::make_unique<llm::RecordingBackend>(std::make_unique<tools::ScriptedBackend>(), out_dir),
        cfg.backend.max_in_flight);
      const auto result = pipeline::synthesize(cfg, gw, gw);
      spdlog::info("recorded k={} ({} records, {} failed samples)", k, result.records.size(), result.failed);
      if (result.failed > 0) {
        return 1;
      }
    }
  } catch (const Error & e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
