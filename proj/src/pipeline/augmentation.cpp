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


#include "shoptraj/pipeline/augmentation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "shoptraj/errors.hpp"
#include "shoptraj/pipeline/prompts.hpp"

namespace shoptraj::pipeline
{

using nlohmann::json;

namespace
{

std::string fold(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  s = s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
  std::string out(s);
  for (char & c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string> reply_list(const json & reply)
{
  std::vector<std::string> out;
  for (const auto & p : reply.at("paraphrases")) {
    out.push_back(p.get<std::string>());
  }
  return out;
}

json request_paraphrases(llm::Gateway & gateway, const llm::PromptRequest & req)
{
  return llm::complete_structured(gateway, req, paraphrase_schema(), [](const json & j) {
    for (const auto & p : j.at("paraphrases")) {
      if (fold(p.get<std::string>()).empty()) {
        throw StructuredOutputError("empty_paraphrase", "paraphrases", "a paraphrase is empty");
      }
    }
  });
}

}  // namespace

llm::Schema paraphrase_schema()
{
  return llm::Schema::object({{"paraphrases", llm::Schema::list_of(llm::Schema::string())}});
}

llm::PromptRequest paraphrase_request(const std::string & caption, int k, const ParaphraseOptions & options)
{
  llm::PromptRequest req;
  req.tag = "paraphrase";
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.system = std::string(prompt_asset("paraphrase_system"));
  req.user = render_template(
    prompt_asset("paraphrase_user"),
    {{"k", std::to_string(k)},
     {"caption", caption},
     {"format_instructions", llm::format_instructions(paraphrase_schema())}});
  return req;
}

ParaphraseResult paraphrase(
  llm::Gateway & gateway, const std::string & caption, int k, const ParaphraseOptions & options)
{
  if (k < 1) {
    throw PipelineError("invalid_k", "paraphrase count must be at least 1");
  }
  const std::string original = fold(caption);
  const llm::PromptRequest req = paraphrase_request(caption, k, options);

  std::vector<std::string> kept;
  bool copied = false;
  for (const auto & p : reply_list(request_paraphrases(gateway, req))) {
    if (fold(p) == original) {
      copied = true;
    } else if (static_cast<int>(kept.size()) < k) {
      kept.push_back(p);
    }
  }
  if (copied || static_cast<int>(kept.size()) < k) {
    const auto retry = llm::reprompt_request(
      req, "some rewrites were identical to the original description or missing; give " + std::to_string(k) +
             " rewrites that differ from it");
    for (const auto & p : reply_list(request_paraphrases(gateway, retry))) {
      if (static_cast<int>(kept.size()) < k && fold(p) != original) {
        kept.push_back(p);
      }
    }
    if (static_cast<int>(kept.size()) < k) {
      throw PipelineError(
        "paraphrase_equals_original", "only " + std::to_string(kept.size()) + " of " + std::to_string(k) +
                                        " paraphrases differ from the original caption");
    }
  }

  ParaphraseResult result;
  auto duplicate_slots = [&] {
    std::vector<std::size_t> slots;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (!seen.insert(fold(kept[i])).second) {
        slots.push_back(i);
      }
    }
    return slots;
  };
  std::vector<std::size_t> dups = duplicate_slots();
  if (!dups.empty()) {
    const auto retry = llm::reprompt_request(
      req, std::to_string(dups.size()) + " of the rewrites repeated another one; give " + std::to_string(k) +
             " rewrites that all differ from each other");
    std::set<std::string> taken;
    for (const auto & p : kept) {
      taken.insert(fold(p));
    }
    std::size_t next = 0;
    for (const auto & p : reply_list(request_paraphrases(gateway, retry))) {
      const std::string f = fold(p);
      if (next < dups.size() && f != original && taken.insert(f).second) {
        kept[dups[next++]] = p;
      }
    }
    dups = duplicate_slots();
    if (!dups.empty()) {
      result.duplicates = static_cast<int>(dups.size());
      const std::string w = std::to_string(dups.size()) + " duplicate paraphrase(s) kept after re-request";
      spdlog::warn("[paraphrase] {}", w);
      result.warnings.push_back(w);
    }
  }
  result.paraphrases = std::move(kept);
  return result;
}

AugmentResult augment_dataset(
  llm::Gateway & gateway, const std::vector<translation::DatasetRecord> & records, int k,
  const ParaphraseOptions & options)
{
  if (k < 1) {
    throw PipelineError("invalid_k", "paraphrase count must be at least 1");
  }
  std::vector<std::size_t> train;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].split == translation::Split::train && translation::is_original(records[i].lineage)) {
      train.push_back(i);
    }
  }

  struct Slot
  {
    std::vector<std::string> paraphrases;
    int duplicates = 0;
    std::vector<std::string> warnings;
    std::string error;
  };
  std::vector<Slot> slots(train.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t s = cursor++; s < train.size(); s = cursor++) {
      const auto & rec = records[train[s]];
      try {
        auto r = paraphrase(gateway, rec.reference_caption, k, options);
        slots[s].paraphrases = std::move(r.paraphrases);
        slots[s].duplicates = r.duplicates;
        slots[s].warnings = std::move(r.warnings);
      } catch (const Error & e) {
        slots[s].error = e.what();
      }
    }
  };
  const std::size_t n_threads =
    std::min<std::size_t>(train.size(), static_cast<std::size_t>(std::max(1, gateway.max_in_flight())));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) {
    pool.emplace_back(worker);
  }
  if (n_threads > 0) {
    worker();
  }
  for (auto & th : pool) {
    th.join();
  }

  // Paraphrases already in the input are replaced for every sample that got
  // new ones, and kept for samples that failed.
  std::set<std::string> replaced;
  for (std::size_t j = 0; j < train.size(); ++j) {
    if (slots[j].error.empty()) {
      replaced.insert(records[train[j]].sample_id);
    }
  }
  AugmentResult out;
  std::size_t s = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].split == translation::Split::train && !translation::is_original(records[i].lineage) &&
        replaced.contains(records[i].sample_id)) {
      continue;
    }
    out.records.push_back(records[i]);
    if (s >= train.size() || train[s] != i) {
      continue;
    }
    Slot & slot = slots[s++];
    const auto & rec = records[i];
    if (!slot.error.empty()) {
      ++out.skipped;
      const std::string w = "sample '" + rec.sample_id + "' not augmented: " + slot.error;
      spdlog::warn("[augment] {}", w);
      out.warnings.push_back(w);
      continue;
    }
    ++out.augmented;
    out.duplicates += slot.duplicates;
    for (auto & w : slot.warnings) {
      out.warnings.push_back("sample '" + rec.sample_id + "': " + w);
    }
    for (std::size_t p = 0; p < slot.paraphrases.size(); ++p) {
      translation::DatasetRecord r = rec;
      r.lineage = translation::lineage_paraphrase(static_cast<int>(p) + 1);
      r.reference_caption = slot.paraphrases[p];
      out.records.push_back(std::move(r));
    }
  }
  spdlog::info(
    "[augment] k={} augmented {} train samples, skipped {}, {} duplicate paraphrases", k, out.augmented,
    out.skipped, out.duplicates);
  return out;
}

}  // namespace shoptraj::pipeline
