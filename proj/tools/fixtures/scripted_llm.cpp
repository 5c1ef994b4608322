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


#include "scripted_llm.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"

namespace shoptraj::tools
{

namespace
{

using nlohmann::ordered_json;

std::mt19937_64 rng_for(const std::string & text)
{
  return std::mt19937_64(std::stoull(sha256_hex(text).substr(0, 16), nullptr, 16));
}

template <typename T>
const T & pick(const std::vector<T> & v, std::mt19937_64 & rng)
{
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

int int_between(int lo, int hi, std::mt19937_64 & rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string fenced(const ordered_json & j)
{
  return "Here is the result.\n```json\n" + j.dump(2) + "\n```\n";
}

// Text between the line after `header` and the next blank line.
std::string section(const std::string & text, const std::string & header)
{
  const auto at = text.find(header);
  if (at == std::string::npos) {
    throw GatewayError("scripted_parse", "prompt has no '" + header + "' section");
  }
  const auto begin = text.find('\n', at) + 1;
  const auto end = text.find("\n\n", begin);
  return text.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
}

int number_after(const std::string & text, const std::string & pattern)
{
  std::smatch m;
  if (!std::regex_search(text, m, std::regex(pattern + R"((\d+))"))) {
    throw GatewayError("scripted_parse", "prompt has no number after '" + pattern + "'");
  }
  return std::stoi(m[1].str());
}

struct Household
{
  const char * who;
  int lo;
  int hi;
};

const std::vector<Household> kHouseholds = {
  {"A single office worker living alone", 2, 4},
  {"A university student sharing a flat", 2, 5},
  {"A young couple without children", 3, 6},
  {"A retired couple", 3, 6},
  {"A parent of two small children", 5, 9},
  {"A family of five", 7, 12},
  {"A single parent with a teenager", 4, 7},
  {"A pair of roommates", 3, 6},
};

const std::vector<std::string> kFoods = {
  "fresh fruit",    "vegetables",      "meat",          "fish",        "dairy products", "bread and pastries",
  "frozen meals",   "snacks",          "coffee",        "wine and beer", "canned goods", "rice and pasta",
  "sweets",         "deli food",       "eggs",          "spices"};

const std::vector<std::string> kPrice = {
  "They look for discounted goods and compare prices carefully.",
  "They prefer affordable everyday products over premium brands.",
  "They are willing to pay more for high quality and organic products.",
  "They choose mid-priced items and avoid the most expensive options.",
};

const std::vector<std::string> kState = {
  "They like pre-cut and ready-to-cook products to save time.",
  "They prefer whole fresh products and do the preparation at home.",
  "They often pick seasoned or marinated items.",
  "They do not care much about how the products are packed.",
};

const std::vector<std::string> kDish = {
  "They plan to cook a beef stew tonight.",
  "They want to make a fresh salad for dinner.",
  "They intend to grill fish for the weekend.",
  "They would like to bake a fruit cake.",
  "They plan to make pasta with tomato sauce.",
  "They do not have a specific dish in mind.",
  "They do not plan to cook a particular dish.",
};

const std::array<const char *, 5> kDecision = {
  "They arrive with a fixed shopping list and go straight to the items they need.",
  "They mostly follow a short list but may pick up one or two extra things.",
  "They have a rough idea of what to buy and decide some items in the store.",
  "They like to walk around and compare several products before deciding.",
  "They have no list at all and explore many aisles looking for inspiration.",
};

std::string step1(const std::string & user)
{
  const int n = number_after(user, "Kindly generate ");
  auto rng = rng_for(user);
  ordered_json customers = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    const Household & h = pick(kHouseholds, rng);
    const int consideration = int_between(1, 5, rng);
    const int items = int_between(h.lo, h.hi, rng);
    std::string like = pick(kFoods, rng);
    std::string avoid = pick(kFoods, rng);
    while (avoid == like) {
      avoid = pick(kFoods, rng);
    }
    const std::string text = fmt::format(
      "{} who mainly buys {} and rarely buys {}. {} {} {} {}", h.who, like, avoid,
      kDecision[static_cast<std::size_t>(consideration - 1)], pick(kPrice, rng), pick(kState, rng),
      pick(kDish, rng));
    ordered_json c;
    c["intention"] = text;
    c["num_item_to_buy"] = items;
    c["purchase_consideration"] = consideration;
    customers.push_back(c);
  }
  ordered_json reply;
  reply["customers"] = customers;
  return fenced(reply);
}

const std::map<std::string, std::vector<std::string>> kCategoryWords = {
  {"fresh fruit", {"fruit"}},
  {"vegetables", {"vegetable"}},
  {"meat", {"meat"}},
  {"fish", {"fish"}},
  {"dairy products", {"dairy"}},
  {"bread and pastries", {"bakery"}},
  {"frozen meals", {"frozen"}},
  {"snacks", {"snacks"}},
  {"coffee", {"coffee"}},
  {"wine and beer", {"alcohol"}},
  {"canned goods", {"canned"}},
  {"rice and pasta", {"grains"}},
  {"sweets", {"sweets"}},
  {"deli food", {"deli"}},
  {"eggs", {"eggs"}},
  {"spices", {"seasoning"}},
};

std::string step2(const std::string & user)
{
  const int total = number_after(user, "approximately ");
  const std::string intention = section(user, "# Customer's intention");
  std::vector<std::string> categories;
  {
    std::stringstream ss(section(user, "# category List"));
    std::string c;
    while (std::getline(ss, c, ',')) {
      c.erase(0, c.find_first_not_of(' '));
      categories.push_back(c);
    }
  }
  auto rng = rng_for(user);
  std::vector<std::string> order;
  const auto mainly = intention.find("mainly buys ");
  if (mainly != std::string::npos) {
    for (const auto & [words, cats] : kCategoryWords) {
      if (intention.compare(mainly + 12, words.size(), words) == 0) {
        for (const auto & c : cats) {
          if (std::find(categories.begin(), categories.end(), c) != categories.end()) {
            order.push_back(c);
          }
        }
      }
    }
  }
  std::vector<std::string> rest;
  for (const auto & c : categories) {
    if (std::find(order.begin(), order.end(), c) == order.end() && intention.find(c) == std::string::npos) {
      rest.push_back(c);
    }
  }
  std::shuffle(rest.begin(), rest.end(), rng);
  order.insert(order.end(), rest.begin(), rest.end());

  // At most 3 per category so that step 3 can always fill the list.
  std::map<std::string, int> alloc;
  int left = total;
  std::size_t k = 0;
  while (left > 0 && k < order.size()) {
    const int q = std::min({left, 3, int_between(1, 2, rng) + (k == 0 ? 1 : 0)});
    alloc[order[k++]] = q;
    left -= q;
  }
  ordered_json reply = ordered_json::object();
  for (const auto & c : categories) {
    reply[c] = alloc.count(c) ? alloc[c] : 0;
  }
  return fenced(reply);
}

std::string step3(const std::string & user)
{
  const int wanted = number_after(user, "is approximately ");
  const int consideration = number_after(user, R"(\(1-5\)\n)");
  std::vector<std::string> names;
  {
    std::stringstream ss(section(user, "### Item description"));
    std::string line;
    while (std::getline(ss, line)) {
      const auto paren = line.find(" (");
      if (paren != std::string::npos) {
        names.push_back(line.substr(0, paren));
      }
    }
  }
  auto rng = rng_for(user);
  std::shuffle(names.begin(), names.end(), rng);
  const auto n_buy = std::min<std::size_t>(names.size(), static_cast<std::size_t>(wanted));
  std::size_t n_interest = static_cast<std::size_t>(((consideration - 1) * wanted + 3) / 4);
  if (wanted > 1) {
    n_interest = std::min<std::size_t>(n_interest, static_cast<std::size_t>(wanted - 1));
  }
  n_interest = std::min(n_interest, names.size() - n_buy);
  ordered_json reply;
  reply["inclined_to_purchase"] = std::vector<std::string>(names.begin(), names.begin() + static_cast<long>(n_buy));
  reply["show_interest"] = std::vector<std::string>(
    names.begin() + static_cast<long>(n_buy), names.begin() + static_cast<long>(n_buy + n_interest));
  return fenced(reply);
}

const std::vector<std::pair<std::string, std::string>> kSynonyms = {
  {"mainly buys", "mostly purchases"},  {"rarely buys", "seldom picks up"},
  {"prefer", "favor"},                  {"They ", "This shopper "},
  {"plan to", "intend to"},             {"items", "products"},
  {"look for", "search for"},           {"compare", "weigh"},
  {"fresh", "freshly stocked"},         {"do not", "don't"},
};

const std::vector<std::string> kFrames = {
  "{}",
  "Put differently: {}",
  "In short, {}",
  "To describe this customer: {}",
  "Profile of the shopper: {}",
  "This is a customer like this: {}",
  "Summary of the visit: {}",
  "Shopper description: {}",
};

std::string lower_first(std::string s)
{
  if (!s.empty()) {
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  }
  return s;
}

std::string step_paraphrase(const std::string & user)
{
  const int k = number_after(user, "Produce ");
  const std::string caption = section(user, "# Customer description");
  auto rng = rng_for(user);
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) {
    std::string text = caption;
    for (std::size_t s = 0; s < kSynonyms.size(); ++s) {
      if (((static_cast<std::size_t>(i) + s) % 2 == 0 || rng() % 3 == 0)) {
        std::size_t at = 0;
        while ((at = text.find(kSynonyms[s].first, at)) != std::string::npos) {
          text.replace(at, kSynonyms[s].first.size(), kSynonyms[s].second);
          at += kSynonyms[s].second.size();
        }
      }
    }
    const std::string & frame = kFrames[static_cast<std::size_t>(i) % kFrames.size()];
    text = fmt::format(fmt::runtime(frame), i == 0 ? text : lower_first(text));
    if (i >= static_cast<int>(kFrames.size())) {
      text += fmt::format(" (version {})", i + 1);
    }
    out.push_back(text);
  }
  ordered_json reply;
  reply["paraphrases"] = out;
  return fenced(reply);
}

}  // namespace

std::string ScriptedBackend::complete(const llm::PromptRequest & req)
{
  if (req.tag == "step1") {
    return step1(req.user);
  }
  if (req.tag == "step2") {
    return step2(req.user);
  }
  if (req.tag == "step3") {
    return step3(req.user);
  }
  if (req.tag == "paraphrase") {
    return step_paraphrase(req.user);
  }
  throw GatewayError("scripted_parse", "no script for tag '" + req.tag + "'");
}

}  // namespace shoptraj::tools
