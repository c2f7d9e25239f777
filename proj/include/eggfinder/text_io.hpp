/*
 * Copyright 2026 The eggfinder Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eggfinder {

/// Shortest decimal that parses back to exactly `x`.
std::string format_double(double x);

/// Full-string decimal parse (leading/trailing blanks allowed); nullopt on any junk.
std::optional<double> parse_double(std::string_view text);

std::optional<unsigned long long> parse_unsigned(std::string_view text);

/// Writes through a sibling temp file and renames it into place, so readers never see a
/// partial file. Throws IoError naming the path.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

/// Throws IoError naming the path.
std::string read_file(const std::filesystem::path& path);

std::vector<std::string_view> split(std::string_view text, char delimiter);
std::string_view trim(std::string_view text);

}  // namespace eggfinder
