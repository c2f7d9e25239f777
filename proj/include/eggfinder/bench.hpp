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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eggfinder/data_matrix.hpp"

/// Simulation protocols: top-m accuracy curves and precision/recall/time tables.
namespace eggfinder::bench {

enum class ModelPolicy {
    /// One graph + coefficient model per cell; only the influence draws change per dataset.
    shared_per_cell,
    /// A new graph + coefficient model for every dataset.
    fresh_per_dataset,
};

const char* to_string(ModelPolicy policy) noexcept;

struct Experiment1Config {
    std::size_t p = 50;
    std::size_t edges = 50;
    std::vector<std::size_t> n_grid{30, 60, 100, 200};
    std::vector<std::size_t> h_grid{1, 3, 5, 50};
    std::size_t datasets = 100;
    std::uint64_t seed = 1;
    std::size_t max_m = 20;
    ModelPolicy policy = ModelPolicy::shared_per_cell;
    double fdr_level = 0.05;
    unsigned threads = 0;
};

struct TopMCurve {
    std::size_t p = 0;
    std::size_t n = 0;
    std::size_t h = 0;
    std::size_t edges = 0;
    std::size_t datasets = 0;
    /// percentages[m - 1]: fraction of datasets whose first m candidates are all exogenous.
    std::vector<double> percentages;

    bool operator==(const TopMCurve&) const = default;
};

/// Number of leading candidates that belong to `truth` (sorted).
std::size_t correct_prefix_length(const IndexSet& candidates, const IndexSet& truth);

/// Aggregates per-dataset correct-prefix lengths into a curve over m = 1..max_m.
std::vector<double> top_m_percentages(const std::vector<std::size_t>& prefix_lengths, std::size_t max_m);

/// One curve per (n, h) cell, n-major. Throws InvalidArgument on empty or zero grids.
std::vector<TopMCurve> experiment1(const Experiment1Config& config);

struct Experiment2Config {
    std::vector<std::size_t> p_grid{50, 100, 150};
    /// Edge count per p; when empty, edges are chosen so the expected exogenous count is
    /// target_exogenous[k] (or p when that is empty too).
    std::vector<std::size_t> edges;
    std::vector<double> target_exogenous{14, 30, 41};
    std::size_t n = 500;
    std::size_t h = 3;
    std::size_t datasets = 50;
    std::uint64_t seed = 1;
    ModelPolicy policy = ModelPolicy::fresh_per_dataset;
    double fdr_level = 0.05;
    /// Datasets run one after another by default so wall times are not inflated by contention.
    unsigned threads = 1;
};

struct PrecisionRecallRecord {
    std::size_t p = 0;
    std::size_t edges = 0;
    std::size_t dataset_id = 0;
    std::size_t exogenous_count = 0;
    std::size_t candidate_count = 0;
    /// Missing when there are no candidates.
    std::optional<double> precision;
    double recall = 0.0;
    double elapsed_seconds = 0.0;
};

/// Precision and recall of `candidates` against sorted `truth`.
PrecisionRecallRecord score_candidates(const IndexSet& candidates, const IndexSet& truth);

struct Experiment2Summary {
    std::size_t p = 0;
    std::size_t edges = 0;
    std::size_t n = 0;
    std::size_t h = 0;
    std::size_t datasets = 0;
    double median_exogenous = 0.0;
    std::optional<double> median_precision;
    double median_recall = 0.0;
    double median_elapsed_seconds = 0.0;
    std::size_t missing_precision = 0;
    std::vector<PrecisionRecallRecord> records;
};

/// Lower middle element for even counts. Throws InvalidArgument on empty input.
double lower_median(std::vector<double> values);

std::vector<Experiment2Summary> experiment2(const Experiment2Config& config);

inline constexpr const char* kCurveCsvHeader = "p,n,h,edges,datasets,m,percentage";
inline constexpr const char* kRecordCsvHeader =
    "p,edges,dataset_id,exogenous,candidates,precision,recall,elapsed_seconds";
inline constexpr const char* kSummaryCsvHeader =
    "p,edges,n,h,datasets,median_exogenous,median_precision,median_recall,median_elapsed_seconds,missing_precision";
inline constexpr const char* kMedianConvention = "lower-middle for even counts";
inline constexpr const char* kMissingPrecisionConvention =
    "precision undefined for empty candidate sets: written empty and excluded from the median";

std::string curves_to_csv(const std::vector<TopMCurve>& curves);
/// Throws ParseError naming the row.
std::vector<TopMCurve> curves_from_csv(std::string_view text);
std::string records_to_csv(const std::vector<Experiment2Summary>& summaries);
std::string summaries_to_csv(const std::vector<Experiment2Summary>& summaries);

/// Writes via atomic_write_file; IoError carries the path.
void emit_plot_data(const std::vector<TopMCurve>& curves, const std::filesystem::path& path);
void emit_plot_data(const std::vector<Experiment2Summary>& summaries, const std::filesystem::path& records_path,
                    const std::filesystem::path& summary_path);

using ManifestFields = std::vector<std::pair<std::string, std::string>>;

/// "eggfinder-manifest v1" followed by one `key = value` line per field.
std::string render_manifest(const ManifestFields& fields);
ManifestFields parse_manifest(std::string_view text);

ManifestFields describe(const Experiment1Config& config);
ManifestFields describe(const Experiment2Config& config);

}  // namespace eggfinder::bench
