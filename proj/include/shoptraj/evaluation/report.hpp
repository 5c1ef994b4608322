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


#ifndef SHOPTRAJ_EVALUATION_REPORT_HPP_
#define SHOPTRAJ_EVALUATION_REPORT_HPP_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shoptraj/evaluation/rouge.hpp"

namespace shoptraj::evaluation
{

using TextPair = std::pair<std::string, std::string>;  // (hypothesis, reference)

/// Semantic similarity hook: one score per pair, same order.
using SimilarityScorer = std::function<std::vector<RougeScore>(const std::vector<TextPair> &)>;

/**
 * @brief Scorer backed by a subprocess.
 *
 * stdin: one "hyp<TAB>ref" line per pair, with tabs and newlines inside the
 * texts replaced by spaces. stdout: one "p r f1" line per pair (whitespace
 * separated). A non-zero exit or a short reply throws Error("scorer_failed").
 */
SimilarityScorer external_scorer(std::string command);

/// Runs `command` through the shell with `input` on stdin; returns stdout.
/// Throws Error("subprocess_failed") on a non-zero exit.
std::string run_filter(const std::string & command, const std::string & input);

struct PairScores
{
  RougeScore r1;
  RougeScore r2;
  RougeScore rl;
  std::optional<RougeScore> similarity;
};

struct EvalReport
{
  std::string label;
  std::vector<PairScores> pairs;
  RougeScore mean_r1;
  RougeScore mean_r2;
  RougeScore mean_rl;
  std::optional<RougeScore> mean_similarity;
};

struct EvalOptions
{
  TokenizeOptions tokenize;
  SimilarityScorer scorer;  // empty: similarity column absent
};

/// Throws Error("length_mismatch") unless |hyps| == |refs| >= 1.
EvalReport evaluate(
  const std::vector<std::string> & hyps, const std::vector<std::string> & refs, const EvalOptions & options = {},
  std::string label = "Full");

nlohmann::json to_json(const EvalReport & report);

/// Aligned plain-text table, one row per report: label, R-1, R-2, R-L and
/// the similarity F1 when any report has it. F1 values, 4 decimals.
std::string render_table(const std::vector<EvalReport> & reports);

}  // namespace shoptraj::evaluation

#endif  // SHOPTRAJ_EVALUATION_REPORT_HPP_
