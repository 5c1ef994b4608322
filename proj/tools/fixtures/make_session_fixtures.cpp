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


// Writes scripted participant sessions used by the collection replay tests.
// Each file holds the event batch plus what the client expects to see.

#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "shoptraj/collection/script.hpp"
#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"

int main(int argc, char ** argv)
{
  using namespace shoptraj;
  using nlohmann::ordered_json;
  CLI::App app{"Generate scripted collection sessions"};
  std::string seen_path;
  std::string unseen_path;
  std::string captions_path;
  std::string out_dir;
  int count = 10;
  std::uint64_t seed = 7;
  app.add_option("--seen", seen_path)->required()->check(CLI::ExistingFile);
  app.add_option("--unseen", unseen_path)->required()->check(CLI::ExistingFile);
  app.add_option("--captions", captions_path)->required()->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_dir)->required();
  app.add_option("-n,--count", count);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  try {
    const StoreMap seen = load_map_file(seen_path);
    const StoreMap unseen = load_map_file(unseen_path);
    const auto captions = collection::read_captions(captions_path);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) {
      const StoreMap & map = i % 2 == 0 ? seen : unseen;
      const collection::MoveGrid grid(map);
      const auto & caption = captions[static_cast<std::size_t>(i) % captions.size()];
      std::vector<std::string> ids;
      for (const auto & item : map.items()) {
        ids.push_back(item.id);
      }
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(static_cast<std::size_t>(1 + i % 4));
      auto script = collection::script_session(map, grid, ids);
      // Every third session changes its mind about the first item.
      if (i % 3 == 0) {
        auto at = std::find_if(script.events.begin(), script.events.end(), [](const collection::SessionEvent & e) {
          return e.kind == collection::EventKind::cart_add;
        });
        const auto k = static_cast<std::size_t>(at - script.events.begin()) + 1;
        script.events.insert(at + 1, {collection::EventKind::cart_remove, {}, at->item_id, at->t});
        script.positions.insert(script.positions.begin() + static_cast<long>(k) + 1, script.positions[k]);
        script.cart.erase(script.cart.begin());
      }
      ordered_json events = ordered_json::array();
      for (const auto & e : script.events) {
        events.push_back(ordered_json::parse(collection::to_json(e).dump()));
      }
      ordered_json positions = ordered_json::array();
      for (const auto & p : script.positions) {
        positions.push_back({p.x, p.y});
      }
      ordered_json doc;
      doc["participant_id"] = fmt::format("p{:02d}", i / 2 + 1);
      doc["map_id"] = map.id();
      doc["caption_id"] = caption.id;
      doc["round_kind"] = "main";
      doc["events"] = events;
      doc["expected_positions"] = positions;
      doc["expected_cart"] = script.cart;
      write_text_file(std::filesystem::path(out_dir) / fmt::format("session_{:02d}.json", i + 1), doc.dump(1) + "\n");
    }
  } catch (const Error & e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
