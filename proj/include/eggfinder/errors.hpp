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
#include <stdexcept>
#include <string>

namespace eggfinder {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A series with fewer than two observations or zero sample variance.
/// Carries the offending column when the series came from a DataMatrix.
class DegenerateSeries : public Error {
public:
    static constexpr std::size_t kNoColumn = static_cast<std::size_t>(-1);

    explicit DegenerateSeries(const std::string& what, std::size_t column = kNoColumn,
                              std::string column_name = {})
        : Error(what), column_(column), column_name_(std::move(column_name)) {}

    std::size_t column() const noexcept { return column_; }
    const std::string& column_name() const noexcept { return column_name_; }

private:
    std::size_t column_;
    std::string column_name_;
};

class TooFewObservations : public Error {
public:
    using Error::Error;
};

class InvalidPValue : public Error {
public:
    using Error::Error;
};

class LabelLengthMismatch : public Error {
public:
    using Error::Error;
};

class TooManyEdges : public Error {
public:
    using Error::Error;
};

class SingularParentContribution : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Row and column are 1-based positions in the file (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
        : Error(what), row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace eggfinder
