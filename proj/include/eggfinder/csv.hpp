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

#include <string>
#include <string_view>
#include <vector>

#include "eggfinder/data_matrix.hpp"

namespace eggfinder {

/// Numeric CSV. Default layout: header of unique variable names, one observation per row.
/// Transposed layout: header row (first cell ignored, then one label per observation), then one
/// variable per row as `name,value,...`. Any empty or non-numeric cell throws ParseError with
/// its 1-based file row and column.
DataMatrix parse_data_csv(std::string_view text, bool transposed = false);

/// Default layout, shortest round-trip decimals.
std::string data_to_csv(const DataMatrix& data);

/// One label per non-blank line.
std::vector<std::string> parse_labels(std::string_view text);

}  // namespace eggfinder
