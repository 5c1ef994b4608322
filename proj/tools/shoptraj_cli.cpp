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


// Command line entry point. Exit codes: 0 success, 1 partial failure or
// invariant violations, 2 configuration or usage error.

#include <csignal>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "shoptraj/collection/http_api.hpp"
#include "shoptraj/collection/session_store.hpp"
#include "shoptraj/errors.hpp"
#include "shoptraj/evaluation/ablation.hpp"
#include "shoptraj/evaluation/report.hpp"
#include "shoptraj/io.hpp"
#include "shoptraj/pipeline/augmentation.hpp"
#include "shoptraj/pipeline/synth.hpp"
#include "shoptraj/planner/trajectory.hpp"
#include "shoptraj/translation/translation.hpp"

namespace
{

using namespace shoptraj;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfig = 2;

struct MapSet
{
  std::vector<StoreMap> maps;

  const StoreMap & get(const std::string & id) const
  {
    for (const auto & m : maps) {
      if (m.id() == id) {
        return m;
      }
    }
    throw ConfigError("config_error", "no --map given for map id '" + id + "'");
  }
};

MapSet load_maps(const std::vector<std::string> & paths)
{
  MapSet set;
  for (const auto & p : paths) {
    set.maps.push_back(load_map_file(p));
  }
  return set;
}

// --- synth ---------------------------------------------------------------

struct SynthArgs
{
  std::string config;
  std::optional<int> n;
  std::optional<int> paraphrases;
  std::optional<std::uint64_t> seed;
  std::optional<int> train;
  std::optional<int> val;
  std::optional<int> test;
  std::optional<int> workers;
  std::string out;
};

int run_synth(const SynthArgs & a)
{
  json overrides = json::object();
  if (a.n) {
    overrides["n_samples"] = *a.n;
  }
  if (a.paraphrases) {
    overrides["paraphrases"] = *a.paraphrases;
  }
  if (a.seed) {
    overrides["seed"] = *a.seed;
  }
  if (a.workers) {
    overrides["workers"] = *a.workers;
  }
  if (a.train || a.val || a.test) {
    overrides["split"] = {{"train", a.train.value_or(0)}, {"val", a.val.value_or(0)}, {"test", a.test.value_or(0)}};
  }
  auto config = pipeline::load_config(a.config, overrides);
  const fs::path out = a.out.empty() ? config.out_dir : fs::path(a.out);
  const auto result = pipeline::synthesize(config);
  pipeline::write_outputs(out, config, result);
  const auto manifest = pipeline::make_manifest(config, result);
  std::cout << manifest["counts"].dump() << "\n";
  spdlog::info("[synth] wrote {}", out.string());
  return result.failed > 0 ? kPartial : kOk;
}

// --- augment -------------------------------------------------------------

int run_augment(const std::string & config_path, const std::string & in, const std::string & out, int k)
{
  const auto config = pipeline::load_config(config_path);
  auto gateway = llm::make_gateway(config.paraphrase_backend.value_or(config.backend));
  const auto records = translation::read_dataset(in);
  const auto result = pipeline::augment_dataset(*gateway, records, k, config.paraphrase);
  translation::write_dataset(out, result.records);
  std::cout << json{{"records", result.records.size()}, {"augmented", result.augmented}, {"skipped", result.skipped},
                    {"duplicates", result.duplicates}}
                 .dump()
            << "\n";
  return result.skipped > 0 ? kPartial : kOk;
}

// --- translate -----------------------------------------------------------

std::map<std::string, std::string> read_caption_map(const fs::path & path)
{
  std::map<std::string, std::string> out;
  for (const auto & line : read_lines(path)) {
    const json j = json::parse(line);
    if (j.contains("sample_id") && j.contains("caption")) {
      out[j.at("sample_id").get<std::string>()] = j.at("caption").get<std::string>();
    } else {
      out[j.at("caption_id").get<std::string>()] = j.at("text").get<std::string>();
    }
  }
  return out;
}

int run_translate(
  const std::vector<std::string> & map_paths, const std::string & trajectories, const std::string & captions,
  const std::string & split, double threshold, const std::string & out)
{
  const MapSet maps = load_maps(map_paths);
  const auto caption_of = read_caption_map(captions);
  const auto s = translation::split_from_string(split);
  std::vector<translation::DatasetRecord> records;
  int failed = 0;
  for (const auto & t : planner::read_trajectories(trajectories)) {
    const auto it = caption_of.find(t.caption_id);
    if (it == caption_of.end()) {
      spdlog::error("[translate] no caption for '{}'", t.caption_id);
      ++failed;
      continue;
    }
    auto r = translation::build_record(t, it->second, maps.get(t.map_id), threshold);
    r.split = s;
    records.push_back(std::move(r));
  }
  translation::write_dataset(out, records);
  std::cout << json{{"records", records.size()}, {"failed", failed}}.dump() << "\n";
  return failed > 0 ? kPartial : kOk;
}

// --- eval ----------------------------------------------------------------

struct EvalArgs
{
  std::string dataset;
  std::string hyps;
  std::string model_cmd;
  std::string scorer_cmd;
  std::string split = "val";
  std::vector<std::string> ablate;
  std::vector<std::string> maps;
  std::string trajectories;
  bool stem = false;
  std::uint64_t seed = 0;
  double threshold = translation::kDefaultStopThreshold;
  std::string out;
};

std::vector<std::string> run_model(const std::string & cmd, const std::vector<translation::DatasetRecord> & recs)
{
  std::string input;
  for (const auto & r : recs) {
    input += json(r.input_text).dump() + "\n";
  }
  std::vector<std::string> hyps;
  std::istringstream lines(evaluation::run_filter(cmd, input));
  std::string line;
  while (std::getline(lines, line)) {
    hyps.push_back(line);
  }
  if (hyps.size() != recs.size()) {
    throw Error(
      "model_failed", "model command returned " + std::to_string(hyps.size()) + " lines for " +
                        std::to_string(recs.size()) + " inputs");
  }
  return hyps;
}

int run_eval(const EvalArgs & a)
{
  std::vector<evaluation::AblationMode> modes;
  for (const auto & m : a.ablate) {
    modes.push_back(evaluation::parse_ablation(m));
  }
  if (a.hyps.empty() == a.model_cmd.empty()) {
    throw ConfigError("config_error", "give exactly one of --hyps or --model-cmd");
  }
  if (!modes.empty() && a.model_cmd.empty()) {
    throw ConfigError("config_error", "--ablate needs --model-cmd to caption the regenerated inputs");
  }
  const auto wanted = translation::split_from_string(a.split);
  std::vector<translation::DatasetRecord> recs;
  for (auto & r : translation::read_dataset(a.dataset)) {
    if (r.split == wanted && translation::is_original(r.lineage)) {
      recs.push_back(std::move(r));
    }
  }
  if (recs.empty()) {
    throw ConfigError("config_error", "dataset has no original records in split '" + a.split + "'");
  }
  std::vector<std::string> refs;
  for (const auto & r : recs) {
    refs.push_back(r.reference_caption);
  }
  evaluation::EvalOptions opts;
  opts.tokenize.stem = a.stem;
  if (!a.scorer_cmd.empty()) {
    opts.scorer = evaluation::external_scorer(a.scorer_cmd);
  }

  std::vector<evaluation::EvalReport> reports;
  std::vector<std::string> hyps;
  if (!a.hyps.empty()) {
    std::istringstream lines(read_text_file(a.hyps));
    std::string line;
    while (std::getline(lines, line)) {
      hyps.push_back(line);
    }
  } else {
    hyps = run_model(a.model_cmd, recs);
  }
  if (hyps.size() != refs.size()) {
    throw Error(
      "length_mismatch", std::to_string(hyps.size()) + " hypotheses for " + std::to_string(refs.size()) + " records");
  }
  reports.push_back(evaluation::evaluate(hyps, refs, opts, "Full"));

  const MapSet maps = load_maps(a.maps);
  std::vector<planner::AnnotatedTrajectory> trajs;
  if (!a.trajectories.empty()) {
    trajs = planner::read_trajectories(a.trajectories);
  }
  const fs::path out = a.out.empty() ? fs::path("eval_out") : fs::path(a.out);
  std::mt19937_64 rng(a.seed);
  for (const auto & mode : modes) {
    const auto ablated = evaluation::apply_ablation(
      recs, mode, rng, trajs, [&maps](const std::string & id) -> const StoreMap & { return maps.get(id); },
      a.threshold);
    std::string slug = mode.label();
    for (char & c : slug) {
      c = std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
    }
    translation::write_dataset(out / ("inputs_" + slug + ".jsonl"), ablated);
    reports.push_back(evaluation::evaluate(run_model(a.model_cmd, ablated), refs, opts, mode.label()));
  }

  json all = json::array();
  for (const auto & r : reports) {
    all.push_back(evaluation::to_json(r));
  }
  const std::string table = evaluation::render_table(reports);
  write_text_file(out / "report.json", all.dump(2) + "\n");
  write_text_file(out / "report.txt", table);
  std::cout << table;
  return kOk;
}

// --- validate ------------------------------------------------------------

int run_validate(const std::string & dataset, const std::string & trajectories, const std::vector<std::string> & map_paths,
                 double human_step)
{
  int checked = 0;
  int failed = 0;
  if (!dataset.empty()) {
    std::size_t line_no = 0;
    for (const auto & line : read_lines(dataset)) {
      ++line_no;
      ++checked;
      std::string id = "line " + std::to_string(line_no);
      try {
        const auto r = translation::record_from_json(json::parse(line));
        id = r.sample_id + "/" + r.lineage;
        translation::parse_model_input(r.input_text);
        std::cout << "PASS " << id << "\n";
      } catch (const std::exception & e) {
        ++failed;
        std::cout << "FAIL " << id << " grammar: " << e.what() << "\n";
      }
    }
  }
  if (!trajectories.empty()) {
    const MapSet maps = load_maps(map_paths);
    for (const auto & t : planner::read_trajectories(trajectories)) {
      ++checked;
      const double max_step = t.provenance == planner::Provenance::human
                                ? human_step
                                : planner::PlannerParams{}.v_max * t.dt;
      const auto violations = planner::check_trajectory(maps.get(t.map_id), t, max_step);
      if (violations.empty()) {
        std::cout << "PASS " << t.caption_id << "\n";
        continue;
      }
      ++failed;
      for (const auto & v : violations) {
        std::cout << "FAIL " << t.caption_id << " " << v.code << " at " << v.index << ": " << v.message << "\n";
      }
    }
  }
  std::cout << json{{"checked", checked}, {"failed", failed}}.dump() << "\n";
  return failed > 0 ? kPartial : kOk;
}

// --- serve ---------------------------------------------------------------

httplib::Server * g_server = nullptr;

void on_signal(int)
{
  if (g_server != nullptr) {
    g_server->stop();
  }
}

int run_serve(
  const std::vector<std::string> & maps, const std::string & captions, const std::string & data_dir,
  const std::string & static_dir, const std::string & host, int port, std::uint64_t seed, double step)
{
  std::vector<collection::StudyMap> study;
  for (const auto & spec : maps) {
    const auto colon = spec.rfind(':');
    if (colon == std::string::npos) {
      throw ConfigError("config_error", "--map expects <path>:<seen|unseen>, got '" + spec + "'");
    }
    study.push_back({load_map_file(spec.substr(0, colon)), spec.substr(colon + 1)});
  }
  collection::StoreOptions opts;
  opts.data_dir = data_dir;
  opts.assignment_seed = seed;
  opts.grid_step = step;
  collection::SessionStore store(std::move(study), collection::read_captions(captions), opts);
  httplib::Server server;
  collection::register_routes(server, store, static_dir);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  spdlog::info("[collect] listening on {}:{}", host, port);
  if (!server.listen(host, port)) {
    spdlog::error("[collect] cannot listen on {}:{}", host, port);
    return kPartial;
  }
  return kOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  spdlog::set_default_logger(spdlog::stderr_color_mt("shoptraj"));

  CLI::App app{"Caption/trajectory dataset synthesis, evaluation and collection"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  SynthArgs synth;
  auto * synth_cmd = app.add_subcommand("synth", "synthesize a dataset from a pipeline config");
  synth_cmd->add_option("-c,--config", synth.config, "pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("-n,--n-samples", synth.n, "number of samples");
  synth_cmd->add_option("-k,--paraphrases", synth.paraphrases, "paraphrases per train sample");
  synth_cmd->add_option("--seed", synth.seed, "master seed");
  synth_cmd->add_option("--train", synth.train, "train count");
  synth_cmd->add_option("--val", synth.val, "validation count");
  synth_cmd->add_option("--test", synth.test, "test count");
  synth_cmd->add_option("--workers", synth.workers, "worker threads");
  synth_cmd->add_option("-o,--out", synth.out, "output directory (default: config out_dir)");

  std::string aug_config;
  std::string aug_in;
  std::string aug_out;
  int aug_k = 2;
  auto * aug_cmd = app.add_subcommand("augment", "add paraphrase records to the train split");
  aug_cmd->add_option("-c,--config", aug_config, "pipeline config for the backend")->required()->check(CLI::ExistingFile);
  aug_cmd->add_option("-i,--dataset", aug_in, "input dataset")->required()->check(CLI::ExistingFile);
  aug_cmd->add_option("-o,--out", aug_out, "output dataset")->required();
  aug_cmd->add_option("-k,--paraphrases", aug_k, "paraphrases per record")->check(CLI::PositiveNumber);

  std::vector<std::string> tr_maps;
  std::string tr_trajs;
  std::string tr_captions;
  std::string tr_split = "test";
  double tr_threshold = translation::kDefaultStopThreshold;
  std::string tr_out;
  auto * tr_cmd = app.add_subcommand("translate", "render trajectories into model-input records");
  tr_cmd->add_option("-m,--map", tr_maps, "store map(s)")->required();
  tr_cmd->add_option("-t,--trajectories", tr_trajs, "trajectory file")->required()->check(CLI::ExistingFile);
  tr_cmd->add_option("--captions", tr_captions, "samples.jsonl or captions file")->required()->check(CLI::ExistingFile);
  tr_cmd->add_option("--split", tr_split, "split label for the records");
  tr_cmd->add_option("--threshold", tr_threshold, "stop threshold in meters");
  tr_cmd->add_option("-o,--out", tr_out, "output dataset")->required();

  EvalArgs ev;
  auto * ev_cmd = app.add_subcommand("eval", "score hypotheses with ROUGE, optionally under ablations");
  ev_cmd->add_option("-d,--dataset", ev.dataset, "dataset file")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--hyps", ev.hyps, "hypotheses, one per line")->check(CLI::ExistingFile);
  ev_cmd->add_option("--model-cmd", ev.model_cmd, "captioning command (JSON input per line in, caption per line out)");
  ev_cmd->add_option("--scorer-cmd", ev.scorer_cmd, "external similarity scorer");
  ev_cmd->add_option("--split", ev.split, "split to score");
  ev_cmd->add_option("--ablate", ev.ablate, "drop_traj, drop_item, shuffle_traj, shuffle_item, noise[:f[:m]]");
  ev_cmd->add_option("-m,--map", ev.maps, "store map(s), needed for noise");
  ev_cmd->add_option("-t,--trajectories", ev.trajectories, "trajectories, needed for noise");
  ev_cmd->add_flag("--stem", ev.stem, "Porter-stem tokens");
  ev_cmd->add_option("--seed", ev.seed, "ablation seed");
  ev_cmd->add_option("--threshold", ev.threshold, "stop threshold for noise re-translation");
  ev_cmd->add_option("-o,--out", ev.out, "report directory");

  std::string va_dataset;
  std::string va_trajs;
  std::vector<std::string> va_maps;
  double va_step = collection::kDefaultGridStep;
  auto * va_cmd = app.add_subcommand("validate", "check record grammar and trajectory invariants");
  va_cmd->add_option("-d,--dataset", va_dataset, "dataset file")->check(CLI::ExistingFile);
  va_cmd->add_option("-t,--trajectories", va_trajs, "trajectory file")->check(CLI::ExistingFile);
  va_cmd->add_option("-m,--map", va_maps, "store map(s)");
  va_cmd->add_option("--human-step", va_step, "step bound for human trajectories");

  std::vector<std::string> sv_maps;
  std::string sv_captions;
  std::string sv_data = "collection_data";
  std::string sv_static;
  std::string sv_host = "127.0.0.1";
  int sv_port = 8080;
  std::uint64_t sv_seed = 0;
  double sv_step = collection::kDefaultGridStep;
  auto * sv_cmd = app.add_subcommand("serve", "run the collection service");
  sv_cmd->add_option("-m,--map", sv_maps, "<map path>:<seen|unseen>")->required();
  sv_cmd->add_option("--captions", sv_captions, "study captions file")->required()->check(CLI::ExistingFile);
  sv_cmd->add_option("--data-dir", sv_data, "session log directory");
  sv_cmd->add_option("--static-dir", sv_static, "built UI served under /app");
  sv_cmd->add_option("--host", sv_host, "bind address");
  sv_cmd->add_option("-p,--port", sv_port, "port");
  sv_cmd->add_option("--seed", sv_seed, "assignment seed");
  sv_cmd->add_option("--grid-step", sv_step, "movement step in meters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*synth_cmd) {
      return run_synth(synth);
    }
    if (*aug_cmd) {
      return run_augment(aug_config, aug_in, aug_out, aug_k);
    }
    if (*tr_cmd) {
      return run_translate(tr_maps, tr_trajs, tr_captions, tr_split, tr_threshold, tr_out);
    }
    if (*ev_cmd) {
      return run_eval(ev);
    }
    if (*va_cmd) {
      if (va_dataset.empty() && va_trajs.empty()) {
        throw ConfigError("config_error", "give --dataset and/or --trajectories");
      }
      return run_validate(va_dataset, va_trajs, va_maps, va_step);
    }
    if (*sv_cmd) {
      return run_serve(sv_maps, sv_captions, sv_data, sv_static, sv_host, sv_port, sv_seed, sv_step);
    }
  } catch (const ConfigError & e) {
    spdlog::error("{}: {}", e.code(), e.what());
    return kConfig;
  } catch (const MapError & e) {
    spdlog::error("{}: {}", e.code(), e.what());
    return kConfig;
  } catch (const Error & e) {
    spdlog::error("{}: {}", e.code(), e.what());
    return kPartial;
  } catch (const std::exception & e) {
    spdlog::error("{}", e.what());
    return kPartial;
  }
  return kOk;
}
