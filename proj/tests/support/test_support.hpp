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

#ifndef SHOPTRAJ_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define SHOPTRAJ_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <system_error>

#include <unistd.h>

#include "shoptraj/store_map.hpp"

namespace shoptraj::testing
{

inline std::filesystem::path source_root() { return SHOPTRAJ_SOURCE_ROOT; }

inline std::filesystem::path data_path(const std::string & rel) { return source_root() / "data" / rel; }

inline const StoreMap & seen_map()
{
  static const StoreMap m = load_map_file(data_path("maps/seen.json"));
  return m;
}

inline const StoreMap & unseen_map()
{
  static const StoreMap m = load_map_file(data_path("maps/unseen.json"));
  return m;
}

// Removed with its contents on destruction.
class TempDir
{
public:
  TempDir()
  {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
      ("shoptraj-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
       std::to_string(rd() % 100000));
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }
  std::filesystem::path operator/(const std::string & rel) const { return path_ / rel; }

private:
  std::filesystem::path path_;
};

}  // namespace shoptraj::testing

#endif  // SHOPTRAJ_TESTS_SUPPORT_TEST_SUPPORT_HPP_
