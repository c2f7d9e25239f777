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

#include "eggfinder/data_matrix.hpp"

#include <unordered_set>

#include "eggfinder/errors.hpp"

namespace eggfinder {

std::vector<std::string> default_variable_names(std::size_t p) {
    std::vector<std::string> names;
    names.reserve(p);
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
    return names;
}

DataMatrix::DataMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
    if (names_.empty()) names_ = default_variable_names(variable_count());
    if (names_.size() != variable_count())
        throw InvalidArgument("DataMatrix: " + std::to_string(names_.size()) + " names for " +
                              std::to_string(variable_count()) + " columns");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_)
        if (!seen.insert(n).second) throw InvalidArgument("DataMatrix: duplicate variable name '" + n + "'");
}

std::span<const double> DataMatrix::column(VariableIndex j) const {
    if (j >= variable_count()) throw InvalidArgument("DataMatrix: column index out of range");
    return {values_.col(static_cast<Eigen::Index>(j)).data(), observation_count()};
}

DataMatrix DataMatrix::select_columns(const IndexSet& columns) const {
    Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(columns.size()));
    std::vector<std::string> names;
    names.reserve(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] >= variable_count()) throw InvalidArgument("DataMatrix: column index out of range");
        out.col(static_cast<Eigen::Index>(k)) = values_.col(static_cast<Eigen::Index>(columns[k]));
        names.push_back(names_[columns[k]]);
    }
    return DataMatrix(std::move(out), std::move(names));
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> rows) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), values_.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= observation_count()) throw InvalidArgument("DataMatrix: row index out of range");
        out.row(static_cast<Eigen::Index>(i)) = values_.row(static_cast<Eigen::Index>(rows[i]));
    }
    return DataMatrix(std::move(out), names_);
}

bool DataMatrix::operator==(const DataMatrix& other) const {
    return names_ == other.names_ && values_.rows() == other.values_.rows() &&
           values_.cols() == other.values_.cols() && values_ == other.values_;
}

}  // namespace eggfinder
