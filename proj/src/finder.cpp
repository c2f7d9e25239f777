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

#include "eggfinder/finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "eggfinder/errors.hpp"
#include "eggfinder/hyptest.hpp"
#include "eggfinder/parallel.hpp"
#include "eggfinder/seeding.hpp"

namespace eggfinder::finder {

void EggFinderConfig::validate() const {
    if (!(fdr_level > 0.0 && fdr_level < 1.0)) throw InvalidArgument("fdr level must lie in (0, 1)");
    if (max_candidates && *max_candidates < 1) throw InvalidArgument("max_candidates must be at least 1");
}

IndexSet IterationTrace::surviving_after() const {
    IndexSet out;
    for (VariableIndex v : surviving_before) {
        if (v == selected) continue;
        if (std::binary_search(removed_by_correlation.begin(), removed_by_correlation.end(), v)) continue;
        out.push_back(v);
    }
    return out;
}

EggFinderResult run(const DataMatrix& data, const EggFinderConfig& config) {
    config.validate();
    const std::size_t n = data.observation_count();
    const std::size_t p = data.variable_count();
    if (n < 3) throw TooFewObservations("eggfinder: need at least 3 observations, got " + std::to_string(n));
    if (p < 1) throw InvalidArgument("eggfinder: data has no variables");

    EggFinderResult result;
    result.config_echo = config;

    // J depends only on its own column, so every score is computed once.
    std::vector<std::optional<ngmeasure::NonGaussianityScore>> scores(p);
    std::vector<std::string> failure(p);
    parallel_for(p, config.threads, [&](std::size_t j) {
        try {
            scores[j] = ngmeasure::score_column(data, j, config.contrast);
        } catch (const DegenerateSeries& e) {
            if (config.strict) throw;
            failure[j] = e.what();
        }
    });

    IndexSet surviving;
    for (VariableIndex j = 0; j < p; ++j) {
        if (scores[j])
            surviving.push_back(j);
        else
            result.excluded.push_back({j, failure[j]});
    }

    // p_against[k][v]: p-value of zero correlation between v and the k-th candidate.
    std::vector<std::vector<double>> p_against;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    while (!surviving.empty()) {
        if (config.max_candidates && result.candidates.size() >= *config.max_candidates) break;

        auto best = surviving.front();
        for (VariableIndex v : surviving) {
            const ngmeasure::ScoredVariable a{v, *scores[v]}, b{best, *scores[best]};
            if (ngmeasure::ranks_before(a, b)) best = v;
        }
        result.candidates.push_back(best);

        IterationTrace trace;
        trace.iteration = result.candidates.size();
        trace.selected = best;
        trace.selected_score = *scores[best];
        trace.surviving_before = surviving;

        IndexSet remaining;
        remaining.reserve(surviving.size() - 1);
        for (VariableIndex v : surviving)
            if (v != best) remaining.push_back(v);

        auto& fresh = p_against.emplace_back(p, nan);
        const auto best_column = data.column(best);
        parallel_for(remaining.size(), config.threads, [&](std::size_t k) {
            const VariableIndex v = remaining[k];
            fresh[v] = hyptest::correlation_test(data.column(v), best_column, v, best).p_value;
        });

        // One BH batch per iteration over every (remaining variable, candidate) pair.
        const std::size_t e_count = p_against.size();
        std::vector<double> batch;
        batch.reserve(remaining.size() * e_count);
        for (VariableIndex v : remaining)
            for (std::size_t k = 0; k < e_count; ++k) batch.push_back(p_against[k][v]);
        const auto decision = hyptest::bh_fdr(batch, config.fdr_level);
        trace.tests_run = batch.size();
        trace.tests_rejected = decision.rejected_count();

        IndexSet next;
        for (std::size_t r = 0; r < remaining.size(); ++r) {
            bool correlated = false;
            std::size_t strongest = 0;
            for (std::size_t k = 0; k < e_count; ++k) {
                if (!decision.rejected[r * e_count + k]) continue;
                if (!correlated || batch[r * e_count + k] < batch[r * e_count + strongest]) strongest = k;
                correlated = true;
            }
            if (!correlated) {
                next.push_back(remaining[r]);
                continue;
            }
            trace.removed_by_correlation.push_back(remaining[r]);
            if (config.keep_test_evidence)
                trace.evidence.push_back(
                    {remaining[r], result.candidates[strongest], batch[r * e_count + strongest]});
        }
        result.iterations.push_back(std::move(trace));
        surviving = std::move(next);
    }
    return result;
}

BootstrapReport bootstrap(const DataMatrix& data, const EggFinderConfig& config, std::size_t resamples,
                          std::uint64_t seed) {
    if (resamples < 1) throw InvalidArgument("bootstrap: resamples must be at least 1");
    config.validate();
    const std::size_t n = data.observation_count();
    const std::size_t p = data.variable_count();

    BootstrapReport report;
    report.resamples = resamples;
    report.seed = seed;
    report.variable_count = p;
    report.full_data_candidate_count = run(data, config).candidates.size();

    EggFinderConfig round_config = config;
    round_config.threads = 1;
    round_config.strict = false;
    round_config.keep_test_evidence = false;

    std::vector<IndexSet> picked(resamples);
    std::vector<std::size_t> excluded(resamples, 0);
    parallel_for(resamples, config.threads, [&](std::size_t b) {
        Rng rng = make_rng(seed, "bootstrap", b);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> rows(n);
        for (auto& r : rows) r = pick(rng);
        const auto res = run(data.select_rows(rows), round_config);
        picked[b] = res.candidates;
        excluded[b] = res.excluded.size();
    });

    report.counts.assign(p, 0);
    for (std::size_t b = 0; b < resamples; ++b) {
        for (VariableIndex v : picked[b]) ++report.counts[v];
        report.excluded_events += excluded[b];
    }
    report.per_variable_proportion.resize(p);
    for (std::size_t j = 0; j < p; ++j)
        report.per_variable_proportion[j] =
            static_cast<double>(report.counts[j]) / static_cast<double>(resamples);
    return report;
}

double binomial_upper_tail(std::size_t k, std::size_t trials, double probability) {
    if (k == 0) return 1.0;
    if (k > trials) return 0.0;
    if (probability <= 0.0) return 0.0;
    if (probability >= 1.0) return 1.0;
    // P(X >= k) = I_p(k, trials - k + 1)
    return boost::math::ibeta(static_cast<double>(k), static_cast<double>(trials - k + 1), probability);
}

IndexSet flag_significant(const BootstrapReport& report, double level, double null_proportion) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("flag_significant: level must lie in (0, 1)");
    IndexSet flagged;
    for (VariableIndex j = 0; j < report.counts.size(); ++j) {
        if (report.counts[j] == 0) continue;
        if (binomial_upper_tail(report.counts[j], report.resamples, null_proportion) < level)
            flagged.push_back(j);
    }
    return flagged;
}

IndexSet flag_significant(const BootstrapReport& report, double level) {
    const double null_proportion =
        report.variable_count == 0 ? 0.0
                                   : static_cast<double>(report.full_data_candidate_count) /
                                         static_cast<double>(report.variable_count);
    return flag_significant(report, level, null_proportion);
}

}  // namespace eggfinder::finder
