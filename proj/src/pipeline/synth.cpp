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


#include "shoptraj/pipeline/synth.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"
#include "shoptraj/pipeline/prompts.hpp"
#include "shoptraj/planner/generator.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::pipeline
{

using nlohmann::json;
using translation::DatasetRecord;
using translation::Split;

namespace
{

std::filesystem::path resolve(const std::filesystem::path & base, const std::string & p)
{
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T get_or(const json & j, const char * key, T fallback)
{
  if (!j.contains(key)) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception & e) {
    throw ConfigError("config_error", std::string("config field '") + key + "': " + e.what());
  }
}

std::uint64_t mix(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

PipelineConfig config_from_json(const json & j, const std::filesystem::path & base_dir)
{
  if (!j.is_object()) {
    throw ConfigError("config_error", "config must be a JSON object");
  }
  PipelineConfig c;
  const auto map = get_or<std::string>(j, "map", "");
  if (map.empty()) {
    throw ConfigError("config_error", "config field 'map' is required");
  }
  c.map_path = resolve(base_dir, map);
  c.backend = llm::backend_config_from_json(j.value("backend", json::object()), base_dir);
  if (j.contains("paraphrase_backend")) {
    c.paraphrase_backend = llm::backend_config_from_json(j.at("paraphrase_backend"), base_dir);
  }
  c.n_samples = get_or(j, "n_samples", c.n_samples);
  if (c.n_samples < 1) {
    throw ConfigError("config_error", "n_samples must be at least 1");
  }
  const json split = j.value("split", json::object());
  if (split.contains("train_fraction")) {
    const double f = get_or(split, "train_fraction", 0.8);
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ConfigError("config_error", "split.train_fraction must be in [0, 1]");
    }
    c.split.train = static_cast<int>(std::lround(f * c.n_samples));
    c.split.val = c.n_samples - c.split.train;
    c.split.test = 0;
  } else {
    c.split.train = get_or(split, "train", c.n_samples);
    c.split.val = get_or(split, "val", 0);
    c.split.test = get_or(split, "test", 0);
  }
  if (c.split.train < 0 || c.split.val < 0 || c.split.test < 0 ||
      c.split.train + c.split.val + c.split.test != c.n_samples) {
    throw ConfigError(
      "config_error", fmt::format(
                        "split counts {}/{}/{} do not sum to n_samples {}", c.split.train, c.split.val,
                        c.split.test, c.n_samples));
  }
  c.paraphrases = get_or(j, "paraphrases", c.paraphrases);
  if (c.paraphrases < 0) {
    throw ConfigError("config_error", "paraphrases must be >= 0");
  }
  try {
    c.planner = planner::planner_params_from_json(j.value("planner", json::object()));
  } catch (const Error & e) {
    throw ConfigError("config_error", std::string("planner: ") + e.what());
  }
  c.stop_threshold = get_or(j, "stop_threshold", c.stop_threshold);
  if (!(c.stop_threshold > 0.0)) {
    throw ConfigError("config_error", "stop_threshold must be positive");
  }
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  const auto out = get_or<std::string>(j, "out_dir", "out");
  c.out_dir = resolve(base_dir, out);
  c.workers = get_or(j, "workers", 0);
  c.planning_attempts = std::max(1, get_or(j, "planning_attempts", c.planning_attempts));
  const json steps = j.value("steps", json::object());
  c.steps.caption_temperature = get_or(steps, "caption_temperature", c.steps.caption_temperature);
  c.steps.structure_temperature = get_or(steps, "structure_temperature", c.steps.structure_temperature);
  c.steps.caption_batch_size = get_or(steps, "caption_batch_size", c.steps.caption_batch_size);
  c.steps.max_tokens = get_or(steps, "max_tokens", c.steps.max_tokens);
  if (c.steps.caption_batch_size < 1) {
    throw ConfigError("config_error", "steps.caption_batch_size must be >= 1");
  }
  const json para = j.value("paraphrase", json::object());
  c.paraphrase.temperature = get_or(para, "temperature", c.paraphrase.temperature);
  c.paraphrase.max_tokens = get_or(para, "max_tokens", c.paraphrase.max_tokens);

  json hashed = j;
  hashed.erase("out_dir");
  hashed.erase("workers");
  c.config_sha256 = sha256_hex(hashed.dump());
  return c;
}

PipelineConfig load_config(const std::filesystem::path & path, const json & overrides)
{
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception & e) {
    throw ConfigError("config_error", path.string() + ": " + e.what());
  } catch (const Error & e) {
    throw ConfigError("config_error", e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config_error", path.string() + ": config must be a JSON object");
  }
  j.merge_patch(overrides);
  return config_from_json(j, path.parent_path());
}

std::vector<Split> assign_splits(const SplitCounts & counts, std::uint64_t seed)
{
  const int n = counts.train + counts.val + counts.test;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(mix(seed ^ 0x5b1175b1175ULL));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Split> out(static_cast<std::size_t>(n), Split::train);
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
    out[i] = k < counts.train ? Split::train : k < counts.train + counts.val ? Split::val : Split::test;
  }
  return out;
}

std::string sample_id(int index) { return fmt::format("s{:04d}", index); }

std::uint64_t sample_seed(std::uint64_t seed, int index, int attempt)
{
  return mix(mix(seed ^ static_cast<std::uint64_t>(index)) + static_cast<std::uint64_t>(attempt));
}

SynthResult synthesize(const PipelineConfig & config, llm::Gateway & gateway, llm::Gateway & paraphrase_gateway)
{
  const StoreMap map = load_map_file(config.map_path);
  SynthResult result;
  result.map_id = map.id();
  result.map_sha256 = sha256_hex(read_text_file(config.map_path));

  spdlog::info("[step1] requesting {} captions", config.n_samples);
  const auto profiles = generate_captions(gateway, config.n_samples, config.seed, config.steps);
  const auto splits = assign_splits(config.split, config.seed);

  spdlog::info("[step4] building roadmap for map '{}'", map.id());
  const planner::TrajectoryGenerator generator(map, config.planner, mix(config.seed ^ 0x70ad3a9ULL));
  const auto categories = map.categories();
  const double max_step = config.planner.v_max * config.planner.dt;

  const auto n = static_cast<std::size_t>(config.n_samples);
  result.samples.resize(n);
  result.status.resize(n);
  std::vector<std::optional<DatasetRecord>> originals(n);

  auto run_sample = [&](std::size_t i) {
    const int index = static_cast<int>(i);
    SynthSample & sample = result.samples[i];
    SampleStatus & st = result.status[i];
    st.index = index;
    st.sample_id = sample_id(index);
    st.split = splits[i];
    sample.profile = profiles[i];
    try {
      sample.plan = generate_action_plan(gateway, sample.profile, categories, config.steps);
      auto lists = generate_item_lists(gateway, sample.profile, sample.plan, map, config.steps);
      sample.lists = lists.lists;
      st.warnings = std::move(lists.warnings);

      std::string last_error;
      std::string last_code;
      for (int attempt = 0; attempt < config.planning_attempts && !sample.trajectory; ++attempt) {
        ++st.attempts;
        std::mt19937_64 rng(sample_seed(config.seed, index, attempt));
        try {
          auto gen = generator.generate(sample.lists, sample.profile.purchase_consideration, rng);
          gen.trajectory.caption_id = st.sample_id;
          const auto violations = planner::check_trajectory(map, gen.trajectory, max_step);
          if (!violations.empty()) {
            last_code = violations.front().code;
            last_error = violations.front().message;
            spdlog::debug("[step4] {} attempt {}: {}", st.sample_id, attempt, last_error);
            continue;
          }
          for (auto & w : gen.warnings) {
            st.warnings.push_back(std::move(w));
          }
          sample.trajectory = std::move(gen.trajectory);
        } catch (const PlanningError & e) {
          last_code = e.code();
          last_error = e.what();
          spdlog::debug("[step4] {} attempt {}: {}", st.sample_id, attempt, last_error);
        }
      }
      if (!sample.trajectory) {
        throw PlanningError(last_code, last_error);
      }
      DatasetRecord rec = translation::build_record(*sample.trajectory, sample.profile.caption, map, config.stop_threshold);
      rec.split = st.split;
      originals[i] = std::move(rec);
      st.ok = true;
    } catch (const Error & e) {
      st.ok = false;
      st.error_code = e.code();
      st.message = e.what();
      spdlog::error("[synth] sample {} failed ({}): {}", st.sample_id, e.code(), e.what());
    }
  };

  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(
    n, config.workers > 0 ? static_cast<std::size_t>(config.workers) : std::max<std::size_t>(hw, gateway.max_in_flight()));
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i = cursor++; i < n; i = cursor++) {
      run_sample(i);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) {
      pool.emplace_back(worker);
    }
    worker();
  }

  std::vector<DatasetRecord> ordered;
  for (const Split s : {Split::train, Split::val, Split::test}) {
    for (std::size_t i = 0; i < n; ++i) {
      if (originals[i] && originals[i]->split == s) {
        ordered.push_back(*originals[i]);
      }
    }
  }
  for (const auto & st : result.status) {
    result.failed += st.ok ? 0 : 1;
  }

  if (config.paraphrases > 0) {
    auto aug = augment_dataset(paraphrase_gateway, ordered, config.paraphrases, config.paraphrase);
    result.records = std::move(aug.records);
    result.augment_skipped = aug.skipped;
    result.paraphrase_duplicates = aug.duplicates;
  } else {
    result.records = std::move(ordered);
  }
  spdlog::info(
    "[synth] {} of {} samples ok, {} dataset records", config.n_samples - result.failed, config.n_samples,
    result.records.size());
  return result;
}

SynthResult synthesize(const PipelineConfig & config)
{
  auto gateway = llm::make_gateway(config.backend);
  if (config.paraphrase_backend) {
    auto para = llm::make_gateway(*config.paraphrase_backend);
    return synthesize(config, *gateway, *para);
  }
  return synthesize(config, *gateway, *gateway);
}

nlohmann::ordered_json make_manifest(const PipelineConfig & config, const SynthResult & result)
{
  nlohmann::ordered_json m;
  m["seed"] = config.seed;
  m["config_sha256"] = config.config_sha256;
  m["map_id"] = result.map_id;
  m["map_sha256"] = result.map_sha256;
  m["prompt_set_version"] = std::string(prompt_set_version());
  int records[3] = {0, 0, 0};
  int originals[3] = {0, 0, 0};
  for (const auto & r : result.records) {
    ++records[static_cast<int>(r.split)];
    originals[static_cast<int>(r.split)] += translation::is_original(r.lineage) ? 1 : 0;
  }
  nlohmann::ordered_json counts;
  counts["samples"] = config.n_samples;
  counts["ok"] = config.n_samples - result.failed;
  counts["failed"] = result.failed;
  counts["paraphrases_per_sample"] = config.paraphrases;
  counts["augment_skipped"] = result.augment_skipped;
  counts["paraphrase_duplicates"] = result.paraphrase_duplicates;
  counts["records"] = result.records.size();
  counts["train"] = records[0];
  counts["val"] = records[1];
  counts["test"] = records[2];
  counts["train_originals"] = originals[0];
  counts["val_originals"] = originals[1];
  counts["test_originals"] = originals[2];
  m["counts"] = counts;
  m["files"] = {
    {"dataset", "dataset.jsonl"}, {"trajectories", "trajectories.jsonl"}, {"samples", "samples.jsonl"}};
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (const auto & st : result.status) {
    nlohmann::ordered_json s;
    s["sample_id"] = st.sample_id;
    s["split"] = translation::to_string(st.split);
    s["status"] = st.ok ? "ok" : "failed";
    s["attempts"] = st.attempts;
    if (!st.ok) {
      s["error"] = st.error_code;
      s["message"] = st.message;
    }
    if (!st.warnings.empty()) {
      s["warnings"] = st.warnings;
    }
    samples.push_back(std::move(s));
  }
  m["samples"] = samples;
  return m;
}

void write_outputs(const std::filesystem::path & out_dir, const PipelineConfig & config, const SynthResult & result)
{
  translation::write_dataset(out_dir / "dataset.jsonl", result.records);
  std::string trajs;
  std::string samples;
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    const auto & s = result.samples[i];
    const auto & st = result.status[i];
    if (s.trajectory) {
      trajs += planner::to_json_line(*s.trajectory) + "\n";
    }
    nlohmann::ordered_json j;
    j["sample_id"] = st.sample_id;
    j["split"] = translation::to_string(st.split);
    j["status"] = st.ok ? "ok" : "failed";
    j["caption"] = s.profile.caption;
    j["num_items_to_buy"] = s.profile.num_items_to_buy;
    j["purchase_consideration"] = s.profile.purchase_consideration;
    j["action_plan"] = s.plan.allocation;
    j["purchase"] = s.lists.purchase;
    j["interest"] = s.lists.interest;
    samples += j.dump() + "\n";
  }
  write_text_file(out_dir / "trajectories.jsonl", trajs);
  write_text_file(out_dir / "samples.jsonl", samples);
  write_text_file(out_dir / "manifest.json", make_manifest(config, result).dump(2) + "\n");
}

}  // namespace shoptraj::pipeline
