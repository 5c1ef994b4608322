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


#include "shoptraj/evaluation/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "shoptraj/errors.hpp"

namespace shoptraj::evaluation
{

using translation::DatasetRecord;

std::string AblationMode::label() const
{
  switch (kind) {
    case AblationKind::none:
      return "Full";
    case AblationKind::drop_traj:
      return "w/o Traj";
    case AblationKind::drop_item:
      return "w/o Item";
    case AblationKind::shuffle_traj:
      return "w/ Shuffle Traj";
    case AblationKind::shuffle_item:
      return "w/ Shuffle Item";
    case AblationKind::noise:
      return fmt::format("w/ {:g}% noise", fraction * 100.0);
  }
  return "?";
}

AblationMode parse_ablation(std::string_view text)
{
  AblationMode m;
  if (text == "none") {
    return m;
  }
  if (text == "drop_traj") {
    m.kind = AblationKind::drop_traj;
  } else if (text == "drop_item") {
    m.kind = AblationKind::drop_item;
  } else if (text == "shuffle_traj") {
    m.kind = AblationKind::shuffle_traj;
  } else if (text == "shuffle_item") {
    m.kind = AblationKind::shuffle_item;
  } else if (text == "noise" || text.starts_with("noise:")) {
    m.kind = AblationKind::noise;
    std::string rest(text.substr(std::min<std::size_t>(text.size(), 6)));
    try {
      if (!rest.empty()) {
        std::size_t used = 0;
        m.fraction = std::stod(rest, &used);
        rest.erase(0, used);
        if (!rest.empty()) {
          if (rest.front() != ':') {
            throw std::invalid_argument(rest);
          }
          m.magnitude = std::stod(rest.substr(1), &used);
          if (used + 1 != rest.size()) {
            throw std::invalid_argument(rest);
          }
        }
      }
    } catch (const std::exception &) {
      throw ConfigError("bad_ablation", "cannot parse noise ablation '" + std::string(text) + "'");
    }
    if (!(m.fraction >= 0.0 && m.fraction <= 1.0) || !(m.magnitude >= 0.0)) {
      throw ConfigError("bad_ablation", "noise fraction must be in [0, 1] and magnitude >= 0");
    }
  } else {
    throw ConfigError("bad_ablation", "unknown ablation '" + std::string(text) + "'");
  }
  return m;
}

std::vector<std::size_t> derangement(std::size_t n, std::mt19937_64 & rng)
{
  if (n < 2) {
    throw PipelineError("derangement_impossible", "shuffle ablation needs at least 2 samples");
  }
  std::vector<std::size_t> perm(n);
  while (true) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    bool fixed = false;
    for (std::size_t i = 0; i < n && !fixed; ++i) {
      fixed = perm[i] == i;
    }
    if (!fixed) {
      return perm;
    }
  }
}

std::size_t noise_count(double fraction, std::size_t timesteps)
{
  // The epsilon keeps 0.05 * 100 from rounding up to 6.
  const double k = std::ceil(fraction * static_cast<double>(timesteps) - 1e-9);
  return std::min(timesteps, static_cast<std::size_t>(std::max(0.0, k)));
}

NoisyTrajectory apply_noise(
  const planner::AnnotatedTrajectory & traj, const StoreMap & map, double fraction, double magnitude,
  std::mt19937_64 & rng)
{
  NoisyTrajectory out{traj, {}};
  const std::size_t k = noise_count(fraction, traj.positions.size());
  if (k == 0 || magnitude <= 0.0) {
    return out;
  }
  std::vector<std::size_t> order(traj.positions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  out.modified.assign(order.begin(), order.begin() + static_cast<long>(k));
  std::sort(out.modified.begin(), out.modified.end());

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const std::size_t t : out.modified) {
    double radius = 0.0;
    while (radius <= 0.0) {
      radius = magnitude * std::sqrt(unit(rng));
    }
    const double angle = 2.0 * M_PI * unit(rng);
    out.trajectory.positions[t] = traj.positions[t] + Point2{radius * std::cos(angle), radius * std::sin(angle)};
  }
  out.trajectory.items_in_contact = planner::annotate_contacts(map, out.trajectory.positions);
  return out;
}

std::vector<DatasetRecord> apply_ablation(
  const std::vector<DatasetRecord> & records, const AblationMode & mode, std::mt19937_64 & rng,
  const std::vector<planner::AnnotatedTrajectory> & trajectories, const MapLookup & maps, double threshold)
{
  std::vector<DatasetRecord> out = records;
  if (mode.kind == AblationKind::none) {
    return out;
  }
  if (mode.kind == AblationKind::noise) {
    if (!maps) {
      throw PipelineError("missing_trajectories", "noise ablation needs the store maps");
    }
    std::unordered_map<std::string, const planner::AnnotatedTrajectory *> by_id;
    for (const auto & t : trajectories) {
      by_id.emplace(t.caption_id, &t);
    }
    for (auto & r : out) {
      const auto it = by_id.find(r.sample_id);
      if (it == by_id.end()) {
        throw PipelineError("missing_trajectories", "no trajectory for sample '" + r.sample_id + "'");
      }
      const StoreMap & map = maps(it->second->map_id);
      const auto noisy = apply_noise(*it->second, map, mode.fraction, mode.magnitude, rng);
      r.input_text = translation::build_record(noisy.trajectory, r.reference_caption, map, threshold).input_text;
    }
    return out;
  }

  std::vector<translation::ModelInput> parsed;
  parsed.reserve(records.size());
  for (const auto & r : records) {
    parsed.push_back(translation::parse_model_input(r.input_text));
  }
  std::vector<std::size_t> perm;
  if (mode.kind == AblationKind::shuffle_traj || mode.kind == AblationKind::shuffle_item) {
    perm = derangement(records.size(), rng);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    translation::ModelInput in = parsed[i];
    switch (mode.kind) {
      case AblationKind::drop_traj:
        in.tokens.clear();
        break;
      case AblationKind::drop_item:
        in.purchase_names.clear();
        break;
      case AblationKind::shuffle_traj:
        in.tokens = parsed[perm[i]].tokens;
        break;
      case AblationKind::shuffle_item:
        in.purchase_names = parsed[perm[i]].purchase_names;
        break;
      default:
        break;
    }
    out[i].input_text = translation::render_model_input(in.tokens, in.purchase_names);
  }
  return out;
}

}  // namespace shoptraj::evaluation
