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


#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "shoptraj/evaluation/rouge.hpp"

namespace shoptraj::evaluation
{

namespace
{

// Follows the published rules exactly, without the later departures of the
// reference C implementation ("bli", "logi").

bool is_consonant(const std::string & w, std::size_t i)
{
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 || !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// m in [C](VC)^m[V] over w[0, len).
int measure(const std::string & w, std::size_t len)
{
  std::size_t i = 0;
  while (i < len && is_consonant(w, i)) {
    ++i;
  }
  int m = 0;
  while (i < len) {
    while (i < len && !is_consonant(w, i)) {
      ++i;
    }
    if (i >= len) {
      break;
    }
    while (i < len && is_consonant(w, i)) {
      ++i;
    }
    ++m;
  }
  return m;
}

bool has_vowel(const std::string & w, std::size_t len)
{
  for (std::size_t i = 0; i < len; ++i) {
    if (!is_consonant(w, i)) {
      return true;
    }
  }
  return false;
}

bool double_consonant(const std::string & w, std::size_t len)
{
  return len >= 2 && w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
}

// *o: stem ends consonant-vowel-consonant, last not w, x or y.
bool cvc(const std::string & w, std::size_t len)
{
  if (len < 3 || !is_consonant(w, len - 1) || is_consonant(w, len - 2) || !is_consonant(w, len - 3)) {
    return false;
  }
  const char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string & w, std::string_view s) { return w.size() >= s.size() && w.ends_with(s); }

using Rule = std::pair<std::string_view, std::string_view>;

// Longest matching suffix wins; replaced only if the stem measure exceeds
// `min_m`. Returns true when some suffix matched, replaced or not.
template <std::size_t N>
bool apply_rules(std::string & w, const std::array<Rule, N> & rules, int min_m)
{
  const Rule * best = nullptr;
  for (const auto & r : rules) {
    if (ends_with(w, r.first) && (best == nullptr || r.first.size() > best->first.size())) {
      best = &r;
    }
  }
  if (best == nullptr) {
    return false;
  }
  const std::size_t stem = w.size() - best->first.size();
  if (measure(w, stem) > min_m) {
    w.replace(stem, std::string::npos, best->second);
  }
  return true;
}

void step1a(std::string & w)
{
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
  } else if (ends_with(w, "s")) {
    w.pop_back();
  }
}

void step1b(std::string & w)
{
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) {
      w.pop_back();
    }
    return;
  }
  std::size_t cut = 0;
  if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
    cut = 2;
  } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
    cut = 3;
  }
  if (cut == 0) {
    return;
  }
  w.resize(w.size() - cut);
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (double_consonant(w, w.size())) {
    const char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') {
      w.pop_back();
    }
  } else if (measure(w, w.size()) == 1 && cvc(w, w.size())) {
    w.push_back('e');
  }
}

void step1c(std::string & w)
{
  if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) {
    w.back() = 'i';
  }
}

constexpr std::array<Rule, 20> kStep2 = {{
  {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},  {"izer", "ize"},
  {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},      {"ousli", "ous"},
  {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},    {"alism", "al"},   {"iveness", "ive"},
  {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
}};

constexpr std::array<Rule, 7> kStep3 = {{
  {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"}, {"ical", "ic"}, {"ful", ""}, {"ness", ""},
}};

constexpr std::array<std::string_view, 19> kStep4 = {
  "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
  "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize"};

void step4(std::string & w)
{
  std::string_view best;
  for (const auto s : kStep4) {
    if (ends_with(w, s) && s.size() > best.size()) {
      best = s;
    }
  }
  if (best.empty()) {
    return;
  }
  const std::size_t stem = w.size() - best.size();
  if (measure(w, stem) <= 1) {
    return;
  }
  if (best == "ion" && (stem == 0 || (w[stem - 1] != 's' && w[stem - 1] != 't'))) {
    return;
  }
  w.resize(stem);
}

void step5(std::string & w)
{
  if (ends_with(w, "e")) {
    const int m = measure(w, w.size() - 1);
    if (m > 1 || (m == 1 && !cvc(w, w.size() - 1))) {
      w.pop_back();
    }
  }
  if (measure(w, w.size()) > 1 && double_consonant(w, w.size()) && w.back() == 'l') {
    w.pop_back();
  }
}

}  // namespace

std::string porter_stem(std::string_view word)
{
  std::string w(word);
  if (w.size() <= 2) {
    return w;
  }
  step1a(w);
  step1b(w);
  step1c(w);
  apply_rules(w, kStep2, 0);
  apply_rules(w, kStep3, 0);
  step4(w);
  step5(w);
  return w;
}

}  // namespace shoptraj::evaluation
