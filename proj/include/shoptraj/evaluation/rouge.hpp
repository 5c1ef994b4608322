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


#ifndef SHOPTRAJ_EVALUATION_ROUGE_HPP_
#define SHOPTRAJ_EVALUATION_ROUGE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace shoptraj::evaluation
{

struct RougeScore
{
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// f1 = 2pr / (p + r), or 0 when p + r == 0.
RougeScore make_score(double precision, double recall);

struct TokenizeOptions
{
  bool stem = false;
};

/// Lowercase, delete ASCII punctuation, split on whitespace.
std::vector<std::string> tokenize(std::string_view text, const TokenizeOptions & options = {});

/// Porter's 1980 suffix-stripping algorithm on a lowercase ASCII word.
std::string porter_stem(std::string_view word);

RougeScore rouge_n(const std::vector<std::string> & hyp, const std::vector<std::string> & ref, int n);
RougeScore rouge_l(const std::vector<std::string> & hyp, const std::vector<std::string> & ref);

RougeScore rouge_n(std::string_view hyp, std::string_view ref, int n, const TokenizeOptions & options = {});
RougeScore rouge_l(std::string_view hyp, std::string_view ref, const TokenizeOptions & options = {});

std::size_t lcs_length(const std::vector<std::string> & a, const std::vector<std::string> & b);

}  // namespace shoptraj::evaluation

#endif  // SHOPTRAJ_EVALUATION_ROUGE_HPP_
