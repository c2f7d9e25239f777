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

#include "eggfinder/ngmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "eggfinder/errors.hpp"
#include "eggfinder/parallel.hpp"
#include "eggfinder/summation.hpp"

namespace eggfinder::ngmeasure {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210484903928;

double integrate_against_normal(Contrast g) {
    auto integrand = [g](double z) {
        constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438186848;
        return contrast(g, z) * kInvSqrt2Pi * std::exp(-0.5 * z * z);
    };
    const double inf = std::numeric_limits<double>::infinity();
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -inf, inf, 15, 1e-14);
}

}  // namespace

std::string_view to_string(Contrast c) noexcept {
    switch (c) {
        case Contrast::robust_exp: return "robust";
        case Contrast::kurtosis: return "kurtosis";
    }
    return "robust";
}

Contrast contrast_from_string(std::string_view text) {
    if (text == "robust" || text == "robust_exp") return Contrast::robust_exp;
    if (text == "kurtosis") return Contrast::kurtosis;
    throw InvalidArgument("unknown contrast '" + std::string(text) + "' (expected robust or kurtosis)");
}

StandardizedSeries standardize(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) throw DegenerateSeries("standardize: need at least 2 observations, got " + std::to_string(n));

    const double mean = compensated_mean(series);
    CompensatedSum squares;
    double max_abs = 0.0;
    for (double x : series) {
        const double d = x - mean;
        squares.add(d * d);
        max_abs = std::max(max_abs, std::abs(x));
    }
    const double sd = std::sqrt(squares.value() / static_cast<double>(n - 1));
    // A constant column can leave a few ulps of spread after subtracting a rounded mean.
    if (!(sd > 64.0 * std::numeric_limits<double>::epsilon() * max_abs) || !std::isfinite(sd))
        throw DegenerateSeries("standardize: series has zero variance");

    StandardizedSeries out;
    out.source_mean = mean;
    out.source_std = sd;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = (series[i] - mean) / sd;
    return out;
}

double contrast(Contrast g, double x) noexcept {
    switch (g) {
        case Contrast::robust_exp: return -std::exp(-0.5 * x * x);
        case Contrast::kurtosis: {
            const double x2 = x * x;
            return x2 * x2;
        }
    }
    return 0.0;
}

double gaussian_reference_constant(Contrast g) {
    if (g == Contrast::robust_exp) return -kInvSqrt2;
    static const double kurtosis_reference = integrate_against_normal(Contrast::kurtosis);
    return kurtosis_reference;
}

NonGaussianityScore nongaussianity(const StandardizedSeries& series, Contrast g) {
    CompensatedSum acc;
    for (double v : series.values) acc.add(contrast(g, v));
    NonGaussianityScore s;
    s.g_mean = acc.value() / static_cast<double>(series.values.size());
    s.gaussian_reference = gaussian_reference_constant(g);
    const double gap = s.g_mean - s.gaussian_reference;
    s.j_value = gap * gap;
    return s;
}

NonGaussianityScore score_column(const DataMatrix& data, VariableIndex column, Contrast g) {
    try {
        return nongaussianity(standardize(data.column(column)), g);
    } catch (const DegenerateSeries& e) {
        throw DegenerateSeries(std::string(e.what()) + " (column " + std::to_string(column + 1) + " '" +
                                   data.name(column) + "')",
                               column, data.name(column));
    }
}

std::vector<ScoredVariable> rank_by_nongaussianity(const DataMatrix& data, const IndexSet& subset,
                                                   Contrast g, unsigned threads) {
    if (subset.empty()) throw InvalidArgument("rank_by_nongaussianity: empty subset");
    std::vector<ScoredVariable> ranked(subset.size());
    parallel_for(subset.size(), threads, [&](std::size_t k) {
        ranked[k] = {subset[k], score_column(data, subset[k], g)};
    });
    std::sort(ranked.begin(), ranked.end(), ranks_before);
    return ranked;
}

}  // namespace eggfinder::ngmeasure
