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


#ifndef SHOPTRAJ_TRANSLATION_TRANSLATION_HPP_
#define SHOPTRAJ_TRANSLATION_TRANSLATION_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shoptraj/geometry.hpp"
#include "shoptraj/planner/trajectory.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::translation
{

inline constexpr double kDefaultStopThreshold = 0.15;

/// Stop timesteps and one category token per maximal run.
struct StopSequence
{
  std::vector<std::size_t> indices;
  std::vector<std::string> tokens;
  std::vector<std::string> run_items;  // item id in contact, one per run
};

/// Timestep t >= 1 is a stop when ||x_t - x_{t-1}|| < threshold. Adjacent
/// stop timesteps at the same item form one run. `contacts[t]` is the item
/// id in contact at t.
StopSequence detect_stops(
  const StoreMap & map, const std::vector<Point2> & positions, const std::vector<std::string> & contacts,
  double threshold = kDefaultStopThreshold);

/// Same, with contacts taken from the nearest catalog item.
StopSequence detect_stops(
  const StoreMap & map, const std::vector<Point2> & positions, double threshold = kDefaultStopThreshold);

/**
 * @brief Renders the model input string.
 *
 * Format (LF newlines, no trailing newline):
 * `Trajectory is fruit</s>fish</s>\n Customer purchase item list is ['A', 'B']\n Output:`
 */
std::string render_model_input(const std::vector<std::string> & tokens, const std::vector<std::string> & purchase_names);

struct ModelInput
{
  std::vector<std::string> tokens;
  std::vector<std::string> purchase_names;

  friend bool operator==(const ModelInput &, const ModelInput &) = default;
};

/// Inverse of render_model_input. Throws PipelineError("bad_input_text").
ModelInput parse_model_input(std::string_view text);

enum class Split { train, val, test };

std::string_view to_string(Split s);
Split split_from_string(std::string_view s);

/// "original" or "paraphrase:<i>" with i >= 1.
std::string lineage_original();
std::string lineage_paraphrase(int i);
bool is_original(std::string_view lineage);

struct DatasetRecord
{
  std::string sample_id;
  Split split = Split::train;
  std::string lineage = "original";
  std::string input_text;
  std::string reference_caption;
  std::string map_id;

  friend bool operator==(const DatasetRecord &, const DatasetRecord &) = default;
};

/// Throws PipelineError("unknown_item") when a purchased id is not in the
/// catalog, ("empty_caption") for an empty caption.
DatasetRecord build_record(
  const planner::AnnotatedTrajectory & traj, const std::string & caption, const StoreMap & map,
  double threshold = kDefaultStopThreshold);

nlohmann::json to_json(const DatasetRecord & r);
DatasetRecord record_from_json(const nlohmann::json & j);
std::string to_json_line(const DatasetRecord & r);

std::vector<DatasetRecord> read_dataset(const std::filesystem::path & path);
void write_dataset(const std::filesystem::path & path, const std::vector<DatasetRecord> & records);

}  // namespace shoptraj::translation

#endif  // SHOPTRAJ_TRANSLATION_TRANSLATION_HPP_
