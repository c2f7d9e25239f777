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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eggfinder/data_matrix.hpp"

/// Gaussian-theory tests used by the search and by preprocessing.
namespace eggfinder::hyptest {

struct CorrelationTestResult {
    VariableIndex variable_a = 0;
    VariableIndex variable_b = 0;
    double r = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
};

/// Benjamini-Hochberg step-up decision. `rejected` is aligned with `p_values` in input order;
/// `threshold_index` is k*, the 1-based rank of the largest sorted p-value under the line.
struct FdrDecision {
    std::vector<double> p_values;
    double q_level = 0.05;
    std::vector<bool> rejected;
    std::optional<std::size_t> threshold_index;

    std::size_t rejected_count() const noexcept { return threshold_index.value_or(0); }
};

struct WelchTestResult {
    double t_statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

/// Two-sided Student-t tail probability P(|T| >= |t|) with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// Pearson r with the exact Student-t test of zero correlation, dof = n - 2.
/// Throws TooFewObservations (n < 3) or DegenerateSeries (zero variance).
CorrelationTestResult correlation_test(std::span<const double> x, std::span<const double> y,
                                       VariableIndex variable_a = 0, VariableIndex variable_b = 1);

/// Throws InvalidPValue for entries outside [0, 1] (or NaN) and InvalidArgument for q outside (0, 1).
FdrDecision bh_fdr(std::span<const double> p_values, double q_level);

/// Unequal-variance two-sample t-test, Welch-Satterthwaite dof.
WelchTestResult welch_t_test(std::span<const double> group_a, std::span<const double> group_b);

/// Subtracts each group's column means within that group. One label per observation.
DataMatrix group_mean_center(const DataMatrix& data, std::span<const std::string> group_labels);

struct FeatureTest {
    VariableIndex index = 0;
    double p_value = 1.0;
    bool degenerate = false;
};

/// Welch test of every column between observations labelled `group_a` and `group_b`, sorted by
/// ascending p-value (ties by index). Columns that cannot be tested sort last, flagged degenerate.
std::vector<FeatureTest> rank_features_by_welch(const DataMatrix& data,
                                                std::span<const std::string> group_labels,
                                                const std::string& group_a, const std::string& group_b);

}  // namespace eggfinder::hyptest
