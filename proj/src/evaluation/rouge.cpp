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


#include "shoptraj/evaluation/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "shoptraj/errors.hpp"

namespace shoptraj::evaluation
{

RougeScore make_score(double precision, double recall)
{
  RougeScore s{precision, recall, 0.0};
  if (precision + recall > 0.0) {
    s.f1 = 2.0 * precision * recall / (precision + recall);
  }
  return s;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizeOptions & options)
{
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(options.stem ? porter_stem(cur) : cur);
      cur.clear();
    }
  };
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      continue;
    } else {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return out;
}

namespace
{

std::map<std::vector<std::string>, int> ngram_counts(const std::vector<std::string> & tokens, int n)
{
  std::map<std::vector<std::string>, int> counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i), tokens.begin() + static_cast<long>(i + len))];
  }
  return counts;
}

double ratio(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

RougeScore rouge_n(const std::vector<std::string> & hyp, const std::vector<std::string> & ref, int n)
{
  if (n < 1) {
    throw Error("invalid_n", "ROUGE-N needs n >= 1");
  }
  const auto h = ngram_counts(hyp, n);
  const auto r = ngram_counts(ref, n);
  std::size_t overlap = 0;
  std::size_t h_total = 0;
  std::size_t r_total = 0;
  for (const auto & [gram, c] : h) {
    h_total += static_cast<std::size_t>(c);
    const auto it = r.find(gram);
    if (it != r.end()) {
      overlap += static_cast<std::size_t>(std::min(c, it->second));
    }
  }
  for (const auto & [gram, c] : r) {
    r_total += static_cast<std::size_t>(c);
  }
  return make_score(ratio(overlap, h_total), ratio(overlap, r_total));
}

std::size_t lcs_length(const std::vector<std::string> & a, const std::vector<std::string> & b)
{
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto & x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

RougeScore rouge_l(const std::vector<std::string> & hyp, const std::vector<std::string> & ref)
{
  const std::size_t lcs = lcs_length(hyp, ref);
  return make_score(ratio(lcs, hyp.size()), ratio(lcs, ref.size()));
}

RougeScore rouge_n(std::string_view hyp, std::string_view ref, int n, const TokenizeOptions & options)
{
  return rouge_n(tokenize(hyp, options), tokenize(ref, options), n);
}

RougeScore rouge_l(std::string_view hyp, std::string_view ref, const TokenizeOptions & options)
{
  return rouge_l(tokenize(hyp, options), tokenize(ref, options));
}

}  // namespace shoptraj::evaluation
