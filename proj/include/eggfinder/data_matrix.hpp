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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eggfinder {

using VariableIndex = std::size_t;
using IndexSet = std::vector<VariableIndex>;

/// n observations (rows) by p named variables (columns). Storage is column-major,
/// so each variable is a contiguous span.
class DataMatrix {
public:
    DataMatrix() = default;

    /// Names default to x1..xp when empty. Throws InvalidArgument on size mismatch or duplicate names.
    explicit DataMatrix(Eigen::MatrixXd values, std::vector<std::string> names = {});

    std::size_t observation_count() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t variable_count() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(VariableIndex j) const { return names_.at(j); }

    std::span<const double> column(VariableIndex j) const;

    /// Keeps the listed columns, in the listed order.
    DataMatrix select_columns(const IndexSet& columns) const;

    /// Rows gathered by index; repeats allowed (bootstrap resampling).
    DataMatrix select_rows(std::span<const std::size_t> rows) const;

    bool operator==(const DataMatrix& other) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> names_;
};

std::vector<std::string> default_variable_names(std::size_t p);

}  // namespace eggfinder
