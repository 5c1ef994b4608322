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


#ifndef SHOPTRAJ_EVALUATION_ABLATION_HPP_
#define SHOPTRAJ_EVALUATION_ABLATION_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "shoptraj/planner/trajectory.hpp"
#include "shoptraj/store_map.hpp"
#include "shoptraj/translation/translation.hpp"

namespace shoptraj::evaluation
{

enum class AblationKind { none, drop_traj, drop_item, shuffle_traj, shuffle_item, noise };

struct AblationMode
{
  AblationKind kind = AblationKind::none;
  double fraction = 0.05;   // noise only
  double magnitude = 0.1;   // noise only, meters

  /// Table row label, e.g. "w/o Traj" or "w/ 5% noise".
  std::string label() const;
};

/// "none", "drop_traj", "drop_item", "shuffle_traj", "shuffle_item",
/// "noise" or "noise:<fraction>[:<magnitude>]". Throws ConfigError.
AblationMode parse_ablation(std::string_view text);

/// Uniform permutation without fixed points, by rejection.
/// Throws PipelineError("derangement_impossible") when n < 2.
std::vector<std::size_t> derangement(std::size_t n, std::mt19937_64 & rng);

/// Number of timesteps the noise protocol moves: ceil(f * T).
std::size_t noise_count(double fraction, std::size_t timesteps);

struct NoisyTrajectory
{
  planner::AnnotatedTrajectory trajectory;
  std::vector<std::size_t> modified;  // ascending
};

/// Moves noise_count() distinct timesteps by a uniform draw from the disc
/// of radius `magnitude` (never exactly zero) and re-annotates contacts.
NoisyTrajectory apply_noise(
  const planner::AnnotatedTrajectory & traj, const StoreMap & map, double fraction, double magnitude,
  std::mt19937_64 & rng);

using MapLookup = std::function<const StoreMap &(const std::string & map_id)>;

/**
 * @brief Returns the records with ablated input_text, same order.
 *
 * Text modes work on the rendered strings. Noise needs the source
 * trajectory of every record (matched by sample_id) and rebuilds the input.
 */
std::vector<translation::DatasetRecord> apply_ablation(
  const std::vector<translation::DatasetRecord> & records, const AblationMode & mode, std::mt19937_64 & rng,
  const std::vector<planner::AnnotatedTrajectory> & trajectories = {}, const MapLookup & maps = {},
  double threshold = translation::kDefaultStopThreshold);

}  // namespace shoptraj::evaluation

#endif  // SHOPTRAJ_EVALUATION_ABLATION_HPP_
