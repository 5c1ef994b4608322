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


#include "shoptraj/evaluation/report.hpp"

#include <sys/wait.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <unistd.h>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"

namespace shoptraj::evaluation
{

namespace
{

std::string one_line(std::string s)
{
  for (char & c : s) {
    if (c == '\t' || c == '\n' || c == '\r') {
      c = ' ';
    }
  }
  return s;
}

RougeScore mean_of(const std::vector<RougeScore> & scores)
{
  RougeScore m;
  for (const auto & s : scores) {
    m.precision += s.precision;
    m.recall += s.recall;
    m.f1 += s.f1;
  }
  const auto n = static_cast<double>(scores.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

nlohmann::json score_json(const RougeScore & s)
{
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace

std::string run_filter(const std::string & command, const std::string & input)
{
  static std::atomic<unsigned> counter{0};
  const auto tmp = std::filesystem::temp_directory_path() /
                   fmt::format("shoptraj-{}-{}.in", static_cast<long>(::getpid()), counter++);
  write_text_file(tmp, input);
  // Grouped so that every part of a compound command reads the input.
  const std::string full = "{ " + command + "\n} < '" + tmp.string() + "'";
  FILE * pipe = ::popen(full.c_str(), "r");
  if (pipe == nullptr) {
    std::filesystem::remove(tmp);
    throw Error("subprocess_failed", "cannot start '" + command + "'");
  }
  std::string out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    out.append(buf, got);
  }
  const int status = ::pclose(pipe);
  std::filesystem::remove(tmp);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error("subprocess_failed", "'" + command + "' exited with status " + std::to_string(status));
  }
  return out;
}

SimilarityScorer external_scorer(std::string command)
{
  return [command = std::move(command)](const std::vector<TextPair> & pairs) {
    std::string input;
    for (const auto & [hyp, ref] : pairs) {
      input += one_line(hyp) + "\t" + one_line(ref) + "\n";
    }
    std::string output;
    try {
      output = run_filter(command, input);
    } catch (const Error & e) {
      throw Error("scorer_failed", e.what());
    }
    std::vector<RougeScore> scores;
    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) {
        continue;
      }
      std::istringstream fields(line);
      RougeScore s;
      if (!(fields >> s.precision >> s.recall >> s.f1)) {
        throw Error("scorer_failed", "scorer line is not 'p r f1': " + line);
      }
      scores.push_back(s);
    }
    if (scores.size() != pairs.size()) {
      throw Error(
        "scorer_failed", fmt::format("scorer returned {} scores for {} pairs", scores.size(), pairs.size()));
    }
    return scores;
  };
}

EvalReport evaluate(
  const std::vector<std::string> & hyps, const std::vector<std::string> & refs, const EvalOptions & options,
  std::string label)
{
  if (hyps.size() != refs.size() || hyps.empty()) {
    throw Error(
      "length_mismatch", fmt::format("need equally many hypotheses and references, got {} and {}", hyps.size(),
                                     refs.size()));
  }
  EvalReport report;
  report.label = std::move(label);
  std::vector<RougeScore> r1;
  std::vector<RougeScore> r2;
  std::vector<RougeScore> rl;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto h = tokenize(hyps[i], options.tokenize);
    const auto r = tokenize(refs[i], options.tokenize);
    PairScores p{rouge_n(h, r, 1), rouge_n(h, r, 2), rouge_l(h, r), std::nullopt};
    r1.push_back(p.r1);
    r2.push_back(p.r2);
    rl.push_back(p.rl);
    report.pairs.push_back(p);
  }
  report.mean_r1 = mean_of(r1);
  report.mean_r2 = mean_of(r2);
  report.mean_rl = mean_of(rl);
  if (options.scorer) {
    std::vector<TextPair> pairs;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      pairs.emplace_back(hyps[i], refs[i]);
    }
    const auto sims = options.scorer(pairs);
    if (sims.size() != pairs.size()) {
      throw Error("scorer_failed", "similarity scorer returned the wrong number of scores");
    }
    for (std::size_t i = 0; i < sims.size(); ++i) {
      report.pairs[i].similarity = sims[i];
    }
    report.mean_similarity = mean_of(sims);
  }
  return report;
}

nlohmann::json to_json(const EvalReport & report)
{
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto & p : report.pairs) {
    nlohmann::json j = {{"rouge1", score_json(p.r1)}, {"rouge2", score_json(p.r2)}, {"rougeL", score_json(p.rl)}};
    j["similarity"] = p.similarity ? score_json(*p.similarity) : nlohmann::json(nullptr);
    pairs.push_back(std::move(j));
  }
  return {
    {"label", report.label},
    {"count", report.pairs.size()},
    {"mean",
     {{"rouge1", score_json(report.mean_r1)},
      {"rouge2", score_json(report.mean_r2)},
      {"rougeL", score_json(report.mean_rl)},
      {"similarity", report.mean_similarity ? score_json(*report.mean_similarity) : nlohmann::json(nullptr)}}},
    {"pairs", pairs},
  };
}

std::string render_table(const std::vector<EvalReport> & reports)
{
  bool with_sim = false;
  std::size_t width = 5;
  for (const auto & r : reports) {
    with_sim = with_sim || r.mean_similarity.has_value();
    width = std::max(width, r.label.size());
  }
  std::string out = fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}", "Input", width, "R-1", "R-2", "R-L");
  if (with_sim) {
    out += fmt::format("  {:>6}", "Sim");
  }
  out += "\n";
  for (const auto & r : reports) {
    out += fmt::format(
      "{:<{}}  {:>6.4f}  {:>6.4f}  {:>6.4f}", r.label, width, r.mean_r1.f1, r.mean_r2.f1, r.mean_rl.f1);
    if (with_sim) {
      out += r.mean_similarity ? fmt::format("  {:>6.4f}", r.mean_similarity->f1) : fmt::format("  {:>6}", "-");
    }
    out += "\n";
  }
  return out;
}

}  // namespace shoptraj::evaluation
