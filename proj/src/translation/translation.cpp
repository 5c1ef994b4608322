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


#include "shoptraj/translation/translation.hpp"

#include <charconv>

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"

namespace shoptraj::translation
{

namespace
{

constexpr std::string_view kPrefix = "Trajectory is ";
constexpr std::string_view kSeparator = "</s>";
constexpr std::string_view kPurchase = "\n Customer purchase item list is [";
constexpr std::string_view kSuffix = "]\n Output:";
constexpr std::string_view kParaphrase = "paraphrase:";

[[noreturn]] void bad_input(const std::string & why)
{
  throw PipelineError("bad_input_text", "model input does not parse: " + why);
}

}  // namespace

StopSequence detect_stops(
  const StoreMap & map, const std::vector<Point2> & positions, const std::vector<std::string> & contacts,
  double threshold)
{
  if (!(threshold > 0.0)) {
    throw PipelineError("invalid_threshold", "stop threshold must be positive");
  }
  if (contacts.size() != positions.size()) {
    throw PipelineError("length_mismatch", "one contact per position is required");
  }
  StopSequence out;
  bool previous_stop = false;
  for (std::size_t t = 1; t < positions.size(); ++t) {
    if (!(distance(positions[t], positions[t - 1]) < threshold)) {
      previous_stop = false;
      continue;
    }
    if (!previous_stop || contacts[t] != out.run_items.back()) {
      const Item * item = map.find_item(contacts[t]);
      if (item == nullptr) {
        throw PipelineError("unknown_item", "item '" + contacts[t] + "' is not in the catalog");
      }
      out.tokens.push_back(item->category);
      out.run_items.push_back(item->id);
    }
    out.indices.push_back(t);
    previous_stop = true;
  }
  return out;
}

StopSequence detect_stops(const StoreMap & map, const std::vector<Point2> & positions, double threshold)
{
  std::vector<std::string> contacts;
  contacts.reserve(positions.size());
  for (const Point2 & p : positions) {
    contacts.push_back(map.nearest_item(p).id);
  }
  return detect_stops(map, positions, contacts, threshold);
}

std::string render_model_input(const std::vector<std::string> & tokens, const std::vector<std::string> & purchase_names)
{
  std::string out(kPrefix);
  for (const auto & tok : tokens) {
    out += tok;
    out += kSeparator;
  }
  out += kPurchase;
  for (std::size_t i = 0; i < purchase_names.size(); ++i) {
    out += i ? ", '" : "'";
    out += purchase_names[i];
    out += '\'';
  }
  out += kSuffix;
  return out;
}

ModelInput parse_model_input(std::string_view text)
{
  if (!text.starts_with(kPrefix)) {
    bad_input("missing 'Trajectory is ' prefix");
  }
  if (!text.ends_with(kSuffix)) {
    bad_input("missing closing \"]\\n Output:\"");
  }
  const std::size_t mid = text.find(kPurchase);
  if (mid == std::string_view::npos) {
    bad_input("missing purchase list");
  }
  ModelInput out;
  std::string_view traj = text.substr(kPrefix.size(), mid - kPrefix.size());
  while (!traj.empty()) {
    const std::size_t sep = traj.find(kSeparator);
    if (sep == std::string_view::npos) {
      bad_input("stop token without </s>");
    }
    out.tokens.emplace_back(traj.substr(0, sep));
    traj.remove_prefix(sep + kSeparator.size());
  }
  const std::size_t list_begin = mid + kPurchase.size();
  if (list_begin > text.size() - kSuffix.size()) {
    bad_input("truncated purchase list");
  }
  std::string_view list = text.substr(list_begin, text.size() - kSuffix.size() - list_begin);
  if (list.empty()) {
    return out;
  }
  if (list.size() < 2 || list.front() != '\'' || list.back() != '\'') {
    bad_input("purchase names must be single-quoted");
  }
  list = list.substr(1, list.size() - 2);
  constexpr std::string_view kNameSep = "', '";
  while (true) {
    const std::size_t sep = list.find(kNameSep);
    out.purchase_names.emplace_back(list.substr(0, sep));
    if (sep == std::string_view::npos) {
      break;
    }
    list.remove_prefix(sep + kNameSep.size());
  }
  return out;
}

std::string_view to_string(Split s)
{
  switch (s) {
    case Split::train:
      return "train";
    case Split::val:
      return "val";
    case Split::test:
      return "test";
  }
  return "train";
}

Split split_from_string(std::string_view s)
{
  if (s == "train") {
    return Split::train;
  }
  if (s == "val") {
    return Split::val;
  }
  if (s == "test") {
    return Split::test;
  }
  throw PipelineError("bad_record", "unknown split '" + std::string(s) + "'");
}

std::string lineage_original() { return "original"; }

std::string lineage_paraphrase(int i) { return std::string(kParaphrase) + std::to_string(i); }

bool is_original(std::string_view lineage) { return lineage == "original"; }

DatasetRecord build_record(
  const planner::AnnotatedTrajectory & traj, const std::string & caption, const StoreMap & map, double threshold)
{
  if (caption.empty()) {
    throw PipelineError("empty_caption", "sample '" + traj.caption_id + "' has an empty caption");
  }
  const StopSequence stops = traj.items_in_contact.size() == traj.positions.size()
                               ? detect_stops(map, traj.positions, traj.items_in_contact, threshold)
                               : detect_stops(map, traj.positions, threshold);
  std::vector<std::string> names;
  names.reserve(traj.purchased.size());
  for (const auto & id : traj.purchased) {
    const Item * item = map.find_item(id);
    if (item == nullptr) {
      throw PipelineError("unknown_item", "purchased item '" + id + "' is not in the catalog");
    }
    names.push_back(item->name);
  }
  DatasetRecord r;
  r.sample_id = traj.caption_id;
  r.lineage = lineage_original();
  r.input_text = render_model_input(stops.tokens, names);
  r.reference_caption = caption;
  r.map_id = traj.map_id;
  return r;
}

nlohmann::json to_json(const DatasetRecord & r)
{
  return nlohmann::json::parse(to_json_line(r));
}

std::string to_json_line(const DatasetRecord & r)
{
  nlohmann::ordered_json j;
  j["sample_id"] = r.sample_id;
  j["split"] = to_string(r.split);
  j["lineage"] = r.lineage;
  j["input_text"] = r.input_text;
  j["reference_caption"] = r.reference_caption;
  j["map_id"] = r.map_id;
  return j.dump();
}

DatasetRecord record_from_json(const nlohmann::json & j)
{
  DatasetRecord r;
  try {
    r.sample_id = j.at("sample_id").get<std::string>();
    r.split = split_from_string(j.at("split").get<std::string>());
    r.lineage = j.at("lineage").get<std::string>();
    r.input_text = j.at("input_text").get<std::string>();
    r.reference_caption = j.at("reference_caption").get<std::string>();
    r.map_id = j.value("map_id", std::string());
  } catch (const nlohmann::json::exception & e) {
    throw PipelineError("bad_record", std::string("dataset record: ") + e.what());
  }
  if (!is_original(r.lineage)) {
    const std::string_view rest = std::string_view(r.lineage).substr(
      r.lineage.starts_with(kParaphrase) ? kParaphrase.size() : 0);
    int k = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
    if (!r.lineage.starts_with(kParaphrase) || ec != std::errc() || ptr != rest.data() + rest.size() || k < 1) {
      throw PipelineError("bad_record", "unknown lineage '" + r.lineage + "'");
    }
  }
  if (!r.input_text.ends_with("Output:")) {
    throw PipelineError("bad_record", "input_text of '" + r.sample_id + "' does not end with \"Output:\"");
  }
  if (r.reference_caption.empty()) {
    throw PipelineError("bad_record", "record '" + r.sample_id + "' has an empty reference caption");
  }
  return r;
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path & path)
{
  std::vector<DatasetRecord> out;
  std::size_t line_no = 0;
  for (const auto & line : read_lines(path)) {
    ++line_no;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw PipelineError("bad_record", path.string() + ":" + std::to_string(line_no) + ": not JSON");
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

void write_dataset(const std::filesystem::path & path, const std::vector<DatasetRecord> & records)
{
  std::string body;
  for (const auto & r : records) {
    body += to_json_line(r);
    body += '\n';
  }
  write_text_file(path, body);
}

}  // namespace shoptraj::translation
