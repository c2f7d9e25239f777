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

#include "eggfinder/hyptest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "eggfinder/errors.hpp"
#include "eggfinder/summation.hpp"

namespace eggfinder::hyptest {

namespace {

struct Moments {
    double mean;
    double centered_ss;
};

Moments centered_moments(std::span<const double> xs, const char* who) {
    const double mean = compensated_mean(xs);
    CompensatedSum ss;
    double max_abs = 0.0;
    for (double x : xs) {
        ss.add((x - mean) * (x - mean));
        max_abs = std::max(max_abs, std::abs(x));
    }
    const double value = ss.value();
    const double sd = std::sqrt(value / static_cast<double>(xs.size() - 1));
    if (!(sd > 64.0 * std::numeric_limits<double>::epsilon() * max_abs) || !std::isfinite(sd))
        throw DegenerateSeries(std::string(who) + ": series has zero variance");
    return {mean, value};
}

}  // namespace

double student_t_two_sided_p(double t, double dof) {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t_distribution<double> dist(dof);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return std::clamp(p, 0.0, 1.0);
}

CorrelationTestResult correlation_test(std::span<const double> x, std::span<const double> y,
                                       VariableIndex variable_a, VariableIndex variable_b) {
    if (x.size() != y.size()) throw InvalidArgument("correlation_test: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw TooFewObservations("correlation_test: need n >= 3, got " + std::to_string(n));

    const Moments mx = centered_moments(x, "correlation_test");
    const Moments my = centered_moments(y, "correlation_test");
    CompensatedSum sxy;
    for (std::size_t i = 0; i < n; ++i) sxy.add((x[i] - mx.mean) * (y[i] - my.mean));

    CorrelationTestResult res;
    res.variable_a = variable_a;
    res.variable_b = variable_b;
    res.dof = n - 2;
    res.r = std::clamp(sxy.value() / std::sqrt(mx.centered_ss * my.centered_ss), -1.0, 1.0);
    const double dof = static_cast<double>(res.dof);
    if (std::abs(res.r) >= 1.0) {
        res.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), res.r);
        res.p_value = 0.0;
    } else {
        res.t_statistic = res.r * std::sqrt(dof / ((1.0 - res.r) * (1.0 + res.r)));
        res.p_value = student_t_two_sided_p(res.t_statistic, dof);
    }
    return res;
}

FdrDecision bh_fdr(std::span<const double> p_values, double q_level) {
    if (!(q_level > 0.0 && q_level < 1.0)) throw InvalidArgument("bh_fdr: q_level must lie in (0, 1)");
    for (std::size_t i = 0; i < p_values.size(); ++i)
        if (!(p_values[i] >= 0.0 && p_values[i] <= 1.0))
            throw InvalidPValue("bh_fdr: p-value at position " + std::to_string(i) + " outside [0, 1]");

    FdrDecision d;
    d.p_values.assign(p_values.begin(), p_values.end());
    d.q_level = q_level;
    const std::size_t m = p_values.size();
    d.rejected.assign(m, false);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    const double md = static_cast<double>(m);
    for (std::size_t k = m; k >= 1; --k) {
        if (p_values[order[k - 1]] <= static_cast<double>(k) / md * q_level) {
            d.threshold_index = k;
            break;
        }
    }
    for (std::size_t k = 0; k < d.rejected_count(); ++k) d.rejected[order[k]] = true;
    return d;
}

WelchTestResult welch_t_test(std::span<const double> group_a, std::span<const double> group_b) {
    if (group_a.size() < 2 || group_b.size() < 2)
        throw TooFewObservations("welch_t_test: each group needs at least 2 observations");
    const Moments a = centered_moments(group_a, "welch_t_test");
    const Moments b = centered_moments(group_b, "welch_t_test");
    const double na = static_cast<double>(group_a.size());
    const double nb = static_cast<double>(group_b.size());
    const double va = a.centered_ss / (na - 1.0) / na;
    const double vb = b.centered_ss / (nb - 1.0) / nb;

    WelchTestResult res;
    res.t_statistic = (a.mean - b.mean) / std::sqrt(va + vb);
    res.dof = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    res.p_value = student_t_two_sided_p(res.t_statistic, res.dof);
    return res;
}

DataMatrix group_mean_center(const DataMatrix& data, std::span<const std::string> group_labels) {
    const std::size_t n = data.observation_count();
    if (group_labels.size() != n)
        throw LabelLengthMismatch("group_mean_center: " + std::to_string(group_labels.size()) +
                                  " labels for " + std::to_string(n) + " observations");

    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[group_labels[i]].push_back(i);

    Eigen::MatrixXd out = data.values();
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        for (const auto& [label, rows] : groups) {
            CompensatedSum s;
            for (std::size_t i : rows) s.add(out(static_cast<Eigen::Index>(i), j));
            const double mean = s.value() / static_cast<double>(rows.size());
            for (std::size_t i : rows) out(static_cast<Eigen::Index>(i), j) -= mean;
        }
    }
    return DataMatrix(std::move(out), data.names());
}

std::vector<FeatureTest> rank_features_by_welch(const DataMatrix& data,
                                                std::span<const std::string> group_labels,
                                                const std::string& group_a, const std::string& group_b) {
    const std::size_t n = data.observation_count();
    if (group_labels.size() != n)
        throw LabelLengthMismatch("rank_features_by_welch: " + std::to_string(group_labels.size()) +
                                  " labels for " + std::to_string(n) + " observations");
    std::vector<std::size_t> rows_a, rows_b;
    for (std::size_t i = 0; i < n; ++i) {
        if (group_labels[i] == group_a) rows_a.push_back(i);
        if (group_labels[i] == group_b) rows_b.push_back(i);
    }
    if (rows_a.empty()) throw InvalidArgument("contrast group '" + group_a + "' has no observations");
    if (rows_b.empty()) throw InvalidArgument("contrast group '" + group_b + "' has no observations");

    std::vector<FeatureTest> tests;
    tests.reserve(data.variable_count());
    std::vector<double> a(rows_a.size()), b(rows_b.size());
    for (VariableIndex j = 0; j < data.variable_count(); ++j) {
        const auto col = data.column(j);
        for (std::size_t k = 0; k < rows_a.size(); ++k) a[k] = col[rows_a[k]];
        for (std::size_t k = 0; k < rows_b.size(); ++k) b[k] = col[rows_b[k]];
        FeatureTest ft{j, 1.0, false};
        try {
            ft.p_value = welch_t_test(a, b).p_value;
        } catch (const DegenerateSeries&) {
            ft.degenerate = true;
        } catch (const TooFewObservations&) {
            ft.degenerate = true;
        }
        tests.push_back(ft);
    }
    std::stable_sort(tests.begin(), tests.end(), [](const FeatureTest& x, const FeatureTest& y) {
        if (x.degenerate != y.degenerate) return !x.degenerate;
        return x.p_value < y.p_value;
    });
    return tests;
}

}  // namespace eggfinder::hyptest
