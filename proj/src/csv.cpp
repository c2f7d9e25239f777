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

#include "eggfinder/csv.hpp"

#include <sstream>
#include <unordered_set>

#include "eggfinder/errors.hpp"
#include "eggfinder/text_io.hpp"

namespace eggfinder {

namespace {

std::string unquote(std::string_view field) {
    field = trim(field);
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
    return std::string(field);
}

std::vector<std::string_view> data_lines(std::string_view text) {
    auto lines = split(text, '\n');
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

double cell(std::string_view field, std::size_t row, std::size_t col) {
    auto v = parse_double(field);
    if (!v) {
        const std::string shown(trim(field));
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                             (shown.empty() ? ": missing value" : ": not a number '" + shown + "'"),
                         row, col);
    }
    return *v;
}

void check_unique(const std::vector<std::string>& names, std::size_t row, bool names_in_column) {
    std::unordered_set<std::string> seen;
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k].empty())
            throw ParseError("empty variable name", names_in_column ? row + k : row, names_in_column ? 1 : k + 1);
        if (!seen.insert(names[k]).second)
            throw ParseError("duplicate variable name '" + names[k] + "'", names_in_column ? row + k : row,
                             names_in_column ? 1 : k + 1);
    }
}

}  // namespace

DataMatrix parse_data_csv(std::string_view text, bool transposed) {
    const auto lines = data_lines(text);
    if (lines.empty()) throw ParseError("empty CSV input", 1);

    if (!transposed) {
        std::vector<std::string> names;
        for (auto f : split(lines[0], ',')) names.push_back(unquote(f));
        check_unique(names, 1, false);
        const std::size_t p = names.size();
        const std::size_t n = lines.size() - 1;
        Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
        for (std::size_t i = 0; i < n; ++i) {
            const auto fields = split(lines[i + 1], ',');
            if (fields.size() != p)
                throw ParseError("row " + std::to_string(i + 2) + ": expected " + std::to_string(p) + " fields, found " +
                                     std::to_string(fields.size()),
                                 i + 2, std::min(fields.size(), p) + 1);
            for (std::size_t j = 0; j < p; ++j)
                values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cell(fields[j], i + 2, j + 1);
        }
        return DataMatrix(std::move(values), std::move(names));
    }

    const std::size_t n = split(lines[0], ',').size() - 1;
    const std::size_t p = lines.size() - 1;
    std::vector<std::string> names;
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
        const auto fields = split(lines[j + 1], ',');
        if (fields.size() != n + 1)
            throw ParseError("row " + std::to_string(j + 2) + ": expected " + std::to_string(n + 1) + " fields, found " +
                                 std::to_string(fields.size()),
                             j + 2, std::min(fields.size(), n + 1) + 1);
        names.push_back(unquote(fields[0]));
        for (std::size_t i = 0; i < n; ++i)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cell(fields[i + 1], j + 2, i + 2);
    }
    check_unique(names, 2, true);
    return DataMatrix(std::move(values), std::move(names));
}

std::string data_to_csv(const DataMatrix& data) {
    std::ostringstream out;
    for (std::size_t j = 0; j < data.variable_count(); ++j) out << (j ? "," : "") << data.name(j);
    out << '\n';
    for (Eigen::Index i = 0; i < data.values().rows(); ++i) {
        for (Eigen::Index j = 0; j < data.values().cols(); ++j)
            out << (j ? "," : "") << format_double(data.values()(i, j));
        out << '\n';
    }
    return out.str();
}

std::vector<std::string> parse_labels(std::string_view text) {
    std::vector<std::string> labels;
    for (auto line : split(text, '\n')) {
        const auto t = trim(line);
        if (!t.empty()) labels.emplace_back(t);
    }
    return labels;
}

}  // namespace eggfinder
