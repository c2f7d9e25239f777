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

#include <span>
#include <string_view>
#include <vector>

#include "eggfinder/data_matrix.hpp"

/// Per-variable non-Gaussianity J(x) = [mean G(x) - E G(z)]^2 on standardized columns.
namespace eggfinder::ngmeasure {

/// Nonlinear contrast G. robust_exp is G(s) = -exp(-s^2/2); kurtosis is G(s) = s^4,
/// which is outlier-sensitive and kept only as an alternate.
enum class Contrast { robust_exp, kurtosis };

std::string_view to_string(Contrast c) noexcept;
/// Accepts "robust" / "robust_exp" / "kurtosis"; throws InvalidArgument otherwise.
Contrast contrast_from_string(std::string_view text);

/// Zero sample mean, unit unbiased standard deviation.
struct StandardizedSeries {
    std::vector<double> values;
    double source_mean = 0.0;
    double source_std = 1.0;
};

struct NonGaussianityScore {
    double j_value = 0.0;
    double g_mean = 0.0;
    double gaussian_reference = 0.0;

    bool operator==(const NonGaussianityScore&) const = default;
};

struct ScoredVariable {
    VariableIndex index = 0;
    NonGaussianityScore score;

    bool operator==(const ScoredVariable&) const = default;
};

/// Subtracts the sample mean and divides by the unbiased (n-1) standard deviation.
/// Throws DegenerateSeries when n < 2 or the standard deviation is zero up to rounding.
StandardizedSeries standardize(std::span<const double> series);

double contrast(Contrast g, double x) noexcept;

/// E{G(z)} for standard normal z. Exactly -1/sqrt(2) for robust_exp; for other contrasts
/// it is integrated once on first use.
double gaussian_reference_constant(Contrast g = Contrast::robust_exp);

NonGaussianityScore nongaussianity(const StandardizedSeries& series, Contrast g = Contrast::robust_exp);

/// standardize + nongaussianity for one matrix column; DegenerateSeries names the column.
NonGaussianityScore score_column(const DataMatrix& data, VariableIndex column,
                                 Contrast g = Contrast::robust_exp);

/// Scores of `subset` sorted by J descending, ties by ascending index. Columns may be scored
/// on `threads` workers; the result does not depend on the thread count.
std::vector<ScoredVariable> rank_by_nongaussianity(const DataMatrix& data, const IndexSet& subset,
                                                   Contrast g = Contrast::robust_exp,
                                                   unsigned threads = 1);

/// Strict ordering used for argmax selection: larger J first, then smaller index.
inline bool ranks_before(const ScoredVariable& a, const ScoredVariable& b) noexcept {
    if (a.score.j_value != b.score.j_value) return a.score.j_value > b.score.j_value;
    return a.index < b.index;
}

}  // namespace eggfinder::ngmeasure
