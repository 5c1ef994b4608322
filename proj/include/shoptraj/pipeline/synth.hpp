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


#ifndef SHOPTRAJ_PIPELINE_SYNTH_HPP_
#define SHOPTRAJ_PIPELINE_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shoptraj/llm/gateway.hpp"
#include "shoptraj/pipeline/augmentation.hpp"
#include "shoptraj/pipeline/captions.hpp"
#include "shoptraj/planner/params.hpp"
#include "shoptraj/planner/trajectory.hpp"
#include "shoptraj/translation/translation.hpp"

namespace shoptraj::pipeline
{

struct SplitCounts
{
  int train = 0;
  int val = 0;
  int test = 0;
};

struct PipelineConfig
{
  std::filesystem::path map_path;
  llm::BackendConfig backend;
  std::optional<llm::BackendConfig> paraphrase_backend;  // defaults to `backend`
  int n_samples = 80;
  SplitCounts split{64, 16, 0};
  int paraphrases = 0;
  planner::PlannerParams planner;
  double stop_threshold = translation::kDefaultStopThreshold;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  int workers = 0;            // 0: hardware concurrency
  int planning_attempts = 3;  // per sample, each with a fresh stream
  StepOptions steps;
  ParaphraseOptions paraphrase;

  /// Hash of every setting that can change the output bytes (not out_dir,
  /// not workers).
  std::string config_sha256;
};

/// Paths in `j` are relative to `base_dir`. Throws ConfigError.
PipelineConfig config_from_json(const nlohmann::json & j, const std::filesystem::path & base_dir);
PipelineConfig load_config(const std::filesystem::path & path, const nlohmann::json & overrides = nlohmann::json::object());

/// Seeded shuffle of [0, n) then contiguous train / val / test blocks.
std::vector<translation::Split> assign_splits(const SplitCounts & counts, std::uint64_t seed);

/// Sample id for index i, e.g. "s0007".
std::string sample_id(int index);

/// Stream for sample i, attempt a. Independent of scheduling.
std::uint64_t sample_seed(std::uint64_t seed, int index, int attempt);

struct SampleStatus
{
  int index = 0;
  std::string sample_id;
  translation::Split split = translation::Split::train;
  bool ok = false;
  std::string error_code;
  std::string message;
  int attempts = 0;
  std::vector<std::string> warnings;
};

struct SynthSample
{
  CaptionProfile profile;
  ActionPlan plan;
  ItemLists lists;
  std::optional<planner::AnnotatedTrajectory> trajectory;
};

struct SynthResult
{
  std::vector<SynthSample> samples;
  std::vector<SampleStatus> status;
  std::vector<translation::DatasetRecord> records;  // train, val, test; index order
  std::string map_id;
  std::string map_sha256;
  int failed = 0;
  int augment_skipped = 0;
  int paraphrase_duplicates = 0;
};

/// Steps 1-4, translation, split and augmentation. Writes nothing.
SynthResult synthesize(const PipelineConfig & config, llm::Gateway & gateway, llm::Gateway & paraphrase_gateway);
SynthResult synthesize(const PipelineConfig & config);

nlohmann::ordered_json make_manifest(const PipelineConfig & config, const SynthResult & result);

/// dataset.jsonl, trajectories.jsonl, samples.jsonl and manifest.json.
void write_outputs(const std::filesystem::path & out_dir, const PipelineConfig & config, const SynthResult & result);

}  // namespace shoptraj::pipeline

#endif  // SHOPTRAJ_PIPELINE_SYNTH_HPP_
