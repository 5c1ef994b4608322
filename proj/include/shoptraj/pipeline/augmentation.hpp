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


#ifndef SHOPTRAJ_PIPELINE_AUGMENTATION_HPP_
#define SHOPTRAJ_PIPELINE_AUGMENTATION_HPP_

#include <string>
#include <vector>

#include "shoptraj/llm/gateway.hpp"
#include "shoptraj/llm/structured.hpp"
#include "shoptraj/translation/translation.hpp"

namespace shoptraj::pipeline
{

struct ParaphraseOptions
{
  double temperature = 0.9;
  int max_tokens = 2048;
};

struct ParaphraseResult
{
  std::vector<std::string> paraphrases;
  int duplicates = 0;  // accepted after the one re-request
  std::vector<std::string> warnings;
};

llm::Schema paraphrase_schema();
llm::PromptRequest paraphrase_request(const std::string & caption, int k, const ParaphraseOptions & options);

/**
 * @brief k rewrites of `caption`.
 *
 * Replies equal to the caption (trimmed, ASCII case-insensitive) are
 * re-requested once; PipelineError("paraphrase_equals_original") if that
 * still leaves fewer than k. Duplicates among the k are re-requested once
 * and then kept with a warning.
 */
ParaphraseResult paraphrase(
  llm::Gateway & gateway, const std::string & caption, int k, const ParaphraseOptions & options = {});

struct AugmentResult
{
  std::vector<translation::DatasetRecord> records;
  int augmented = 0;  // train records that received k paraphrases
  int skipped = 0;    // train records kept without paraphrases
  int duplicates = 0;
  std::vector<std::string> warnings;
};

/// Each original train record is followed by its k paraphrase records.
/// Val and test records pass through untouched, in place. Existing
/// paraphrases of a re-augmented sample are replaced.
AugmentResult augment_dataset(
  llm::Gateway & gateway, const std::vector<translation::DatasetRecord> & records, int k,
  const ParaphraseOptions & options = {});

}  // namespace shoptraj::pipeline

#endif  // SHOPTRAJ_PIPELINE_AUGMENTATION_HPP_
