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

#ifndef SHOPTRAJ_IO_HPP_
#define SHOPTRAJ_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace shoptraj
{

std::string read_text_file(const std::filesystem::path & path);

// Writes with LF line endings exactly as given; creates parent directories.
void write_text_file(const std::filesystem::path & path, std::string_view content);
void append_text_file(const std::filesystem::path & path, std::string_view content);

// Non-empty lines of a newline-delimited file.
std::vector<std::string> read_lines(const std::filesystem::path & path);

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace shoptraj

#endif  // SHOPTRAJ_IO_HPP_
