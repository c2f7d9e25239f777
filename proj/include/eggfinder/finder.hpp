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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eggfinder/data_matrix.hpp"
#include "eggfinder/ngmeasure.hpp"

/// Iterative search for exogenous variables: repeatedly take the most non-Gaussian variable
/// among those still uncorrelated with every variable chosen so far.
namespace eggfinder::finder {

struct EggFinderConfig {
    double fdr_level = 0.05;
    ngmeasure::Contrast contrast = ngmeasure::Contrast::robust_exp;
    std::optional<std::size_t> max_candidates;
    /// Throw on constant columns instead of excluding them up front.
    bool strict = false;
    /// Record the p-value that removed each pruned variable.
    bool keep_test_evidence = false;
    /// Worker threads for scoring and correlation batches (0 = hardware). Never changes results.
    unsigned threads = 1;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

struct PruneEvidence {
    VariableIndex variable = 0;
    VariableIndex against = 0;
    double p_value = 0.0;

    bool operator==(const PruneEvidence&) const = default;
};

struct IterationTrace {
    std::size_t iteration = 0;  // 1-based
    VariableIndex selected = 0;
    ngmeasure::NonGaussianityScore selected_score;
    IndexSet surviving_before;
    IndexSet removed_by_correlation;
    std::size_t tests_run = 0;
    std::size_t tests_rejected = 0;
    /// Only filled with EggFinderConfig::keep_test_evidence; smallest p-value per removed variable.
    std::vector<PruneEvidence> evidence;

    /// surviving_before minus the selected and removed variables.
    IndexSet surviving_after() const;

    bool operator==(const IterationTrace&) const = default;
};

struct ExcludedColumn {
    VariableIndex index = 0;
    std::string reason;

    bool operator==(const ExcludedColumn&) const = default;
};

struct EggFinderResult {
    IndexSet candidates;
    std::vector<IterationTrace> iterations;
    EggFinderConfig config_echo;
    std::vector<ExcludedColumn> excluded;
};

/// Throws TooFewObservations for n < 3, DegenerateSeries for a constant column in strict mode.
EggFinderResult run(const DataMatrix& data, const EggFinderConfig& config = {});

struct BootstrapReport {
    std::size_t resamples = 0;
    std::uint64_t seed = 0;
    std::size_t variable_count = 0;
    std::vector<std::size_t> counts;
    /// counts[j] / resamples.
    std::vector<double> per_variable_proportion;
    /// Constant columns excluded inside resamples, summed over rounds.
    std::size_t excluded_events = 0;
    /// Candidate count on the full data; sets the null proportion of flag_significant.
    std::size_t full_data_candidate_count = 0;
    std::optional<double> significant_at;
};

/// Nonparametric row bootstrap. Round b resamples with a stream derived from (seed, b), so
/// the report is identical for any thread count.
BootstrapReport bootstrap(const DataMatrix& data, const EggFinderConfig& config, std::size_t resamples,
                          std::uint64_t seed);

/// P(X >= k) for X ~ Binomial(trials, probability).
double binomial_upper_tail(std::size_t k, std::size_t trials, double probability);

/// Variables whose bootstrap count is significantly above the null proportion
/// full_data_candidate_count / variable_count (exact one-sided binomial test at `level`).
IndexSet flag_significant(const BootstrapReport& report, double level);
IndexSet flag_significant(const BootstrapReport& report, double level, double null_proportion);

}  // namespace eggfinder::finder
