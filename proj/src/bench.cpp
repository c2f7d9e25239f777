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

#include "eggfinder/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "eggfinder/errors.hpp"
#include "eggfinder/finder.hpp"
#include "eggfinder/parallel.hpp"
#include "eggfinder/seeding.hpp"
#include "eggfinder/synth.hpp"
#include "eggfinder/text_io.hpp"
#include "eggfinder/version.hpp"

namespace eggfinder::bench {

namespace {

bool contains(const IndexSet& sorted, VariableIndex v) { return std::binary_search(sorted.begin(), sorted.end(), v); }

void require_positive(const std::vector<std::size_t>& grid, const char* name) {
    if (grid.empty()) throw InvalidArgument(std::string(name) + " grid is empty");
    for (auto v : grid)
        if (v == 0) throw InvalidArgument(std::string(name) + " grid values must be positive");
}

std::string join(const std::vector<std::size_t>& xs) {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? " " : "") + std::to_string(xs[k]);
    return out;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? " " : "") + format_double(xs[k]);
    return out;
}

}  // namespace

const char* to_string(ModelPolicy policy) noexcept {
    return policy == ModelPolicy::shared_per_cell ? "shared_per_cell" : "fresh_per_dataset";
}

std::size_t correct_prefix_length(const IndexSet& candidates, const IndexSet& truth) {
    std::size_t k = 0;
    while (k < candidates.size() && contains(truth, candidates[k])) ++k;
    return k;
}

std::vector<double> top_m_percentages(const std::vector<std::size_t>& prefix_lengths, std::size_t max_m) {
    std::vector<double> out(max_m, 0.0);
    if (prefix_lengths.empty()) return out;
    for (std::size_t m = 1; m <= max_m; ++m) {
        const auto hits = std::count_if(prefix_lengths.begin(), prefix_lengths.end(),
                                        [m](std::size_t len) { return len >= m; });
        out[m - 1] = static_cast<double>(hits) / static_cast<double>(prefix_lengths.size());
    }
    return out;
}

std::vector<TopMCurve> experiment1(const Experiment1Config& config) {
    require_positive(config.n_grid, "n");
    require_positive(config.h_grid, "h");
    if (config.p == 0 || config.datasets == 0 || config.max_m == 0)
        throw InvalidArgument("experiment1: p, datasets and max_m must be positive");

    finder::EggFinderConfig fc;
    fc.fdr_level = config.fdr_level;

    std::vector<TopMCurve> curves;
    std::size_t cell = 0;
    for (std::size_t n : config.n_grid) {
        for (std::size_t h : config.h_grid) {
            // The shared model's seed ignores n and h, so every cell uses the same graph,
            // coefficients and exponents; h only changes how many terms each error sums.
            std::optional<synth::CausalModel> shared;
            if (config.policy == ModelPolicy::shared_per_cell)
                shared = synth::generate_model(config.p, config.edges, h, derive_seed(config.seed, "model"));

            const std::uint64_t cell_seed = derive_seed(config.seed, "cell", cell);
            std::vector<std::size_t> prefix(config.datasets);
            parallel_for(config.datasets, config.threads, [&](std::size_t d) {
                const synth::CausalModel model =
                    shared ? *shared
                           : synth::generate_model(config.p, config.edges, h, derive_seed(cell_seed, "model", d));
                const auto sample = synth::sample_dataset(model, n, derive_seed(cell_seed, "data", d));
                const auto result = finder::run(sample.data, fc);
                prefix[d] = correct_prefix_length(result.candidates, sample.exogenous_set);
            });
            curves.push_back({config.p, n, h, config.edges, config.datasets, top_m_percentages(prefix, config.max_m)});
            ++cell;
        }
    }
    return curves;
}

PrecisionRecallRecord score_candidates(const IndexSet& candidates, const IndexSet& truth) {
    PrecisionRecallRecord r;
    r.exogenous_count = truth.size();
    r.candidate_count = candidates.size();
    const auto hits = static_cast<double>(
        std::count_if(candidates.begin(), candidates.end(), [&](VariableIndex v) { return contains(truth, v); }));
    if (!candidates.empty()) r.precision = hits / static_cast<double>(candidates.size());
    r.recall = truth.empty() ? 0.0 : hits / static_cast<double>(truth.size());
    return r;
}

double lower_median(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("lower_median: no values");
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

std::vector<Experiment2Summary> experiment2(const Experiment2Config& config) {
    require_positive(config.p_grid, "p");
    if (config.datasets == 0 || config.n == 0 || config.h == 0)
        throw InvalidArgument("experiment2: n, h and datasets must be positive");
    if (!config.edges.empty() && config.edges.size() != config.p_grid.size())
        throw InvalidArgument("experiment2: need one edge count per p");
    if (config.edges.empty() && !config.target_exogenous.empty() &&
        config.target_exogenous.size() != config.p_grid.size())
        throw InvalidArgument("experiment2: need one exogenous target per p");

    finder::EggFinderConfig fc;
    fc.fdr_level = config.fdr_level;

    std::vector<Experiment2Summary> out;
    for (std::size_t k = 0; k < config.p_grid.size(); ++k) {
        const std::size_t p = config.p_grid[k];
        std::size_t edges = p;
        if (!config.edges.empty())
            edges = config.edges[k];
        else if (!config.target_exogenous.empty())
            edges = synth::edges_for_expected_exogenous(p, config.target_exogenous[k]);

        const std::uint64_t cell_seed = derive_seed(config.seed, "p", p);
        std::optional<synth::CausalModel> shared;
        if (config.policy == ModelPolicy::shared_per_cell)
            shared = synth::generate_model(p, edges, config.h, derive_seed(cell_seed, "model"));

        Experiment2Summary s;
        s.p = p;
        s.edges = edges;
        s.n = config.n;
        s.h = config.h;
        s.datasets = config.datasets;
        s.records.resize(config.datasets);
        parallel_for(config.datasets, config.threads, [&](std::size_t d) {
            const synth::CausalModel model =
                shared ? *shared : synth::generate_model(p, edges, config.h, derive_seed(cell_seed, "model", d));
            const auto sample = synth::sample_dataset(model, config.n, derive_seed(cell_seed, "data", d));
            const auto start = std::chrono::steady_clock::now();
            const auto result = finder::run(sample.data, fc);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            auto rec = score_candidates(result.candidates, sample.exogenous_set);
            rec.p = p;
            rec.edges = edges;
            rec.dataset_id = d;
            rec.elapsed_seconds = elapsed.count();
            s.records[d] = rec;
        });

        std::vector<double> ell, precision, recall, elapsed;
        for (const auto& r : s.records) {
            ell.push_back(static_cast<double>(r.exogenous_count));
            recall.push_back(r.recall);
            elapsed.push_back(r.elapsed_seconds);
            if (r.precision)
                precision.push_back(*r.precision);
            else
                ++s.missing_precision;
        }
        s.median_exogenous = lower_median(ell);
        s.median_recall = lower_median(recall);
        s.median_elapsed_seconds = lower_median(elapsed);
        if (!precision.empty()) s.median_precision = lower_median(precision);
        out.push_back(std::move(s));
    }
    return out;
}

std::string curves_to_csv(const std::vector<TopMCurve>& curves) {
    std::ostringstream out;
    out << kCurveCsvHeader << '\n';
    for (const auto& c : curves)
        for (std::size_t m = 1; m <= c.percentages.size(); ++m)
            out << c.p << ',' << c.n << ',' << c.h << ',' << c.edges << ',' << c.datasets << ',' << m << ','
                << format_double(c.percentages[m - 1]) << '\n';
    return out.str();
}

std::vector<TopMCurve> curves_from_csv(std::string_view text) {
    auto lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty() || trim(lines[0]) != kCurveCsvHeader) throw ParseError("curve CSV: missing header", 1);
    std::vector<TopMCurve> curves;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto fields = split(trim(lines[row]), ',');
        if (fields.size() != 7) throw ParseError("curve CSV: expected 7 fields", row + 1);
        std::size_t ints[6];
        for (std::size_t f = 0; f < 6; ++f) {
            auto v = parse_unsigned(fields[f]);
            if (!v) throw ParseError("curve CSV: bad integer", row + 1, f + 1);
            ints[f] = *v;
        }
        auto pct = parse_double(fields[6]);
        if (!pct) throw ParseError("curve CSV: bad percentage", row + 1, 7);
        const TopMCurve key{ints[0], ints[1], ints[2], ints[3], ints[4], {}};
        if (curves.empty() || curves.back().p != key.p || curves.back().n != key.n || curves.back().h != key.h ||
            curves.back().edges != key.edges || curves.back().datasets != key.datasets || ints[5] == 1)
            curves.push_back(key);
        if (ints[5] != curves.back().percentages.size() + 1) throw ParseError("curve CSV: m out of sequence", row + 1, 6);
        curves.back().percentages.push_back(*pct);
    }
    return curves;
}

std::string records_to_csv(const std::vector<Experiment2Summary>& summaries) {
    std::ostringstream out;
    out << kRecordCsvHeader << '\n';
    for (const auto& s : summaries)
        for (const auto& r : s.records)
            out << r.p << ',' << r.edges << ',' << r.dataset_id << ',' << r.exogenous_count << ','
                << r.candidate_count << ',' << (r.precision ? format_double(*r.precision) : "") << ','
                << format_double(r.recall) << ',' << format_double(r.elapsed_seconds) << '\n';
    return out.str();
}

std::string summaries_to_csv(const std::vector<Experiment2Summary>& summaries) {
    std::ostringstream out;
    out << kSummaryCsvHeader << '\n';
    for (const auto& s : summaries)
        out << s.p << ',' << s.edges << ',' << s.n << ',' << s.h << ',' << s.datasets << ','
            << format_double(s.median_exogenous) << ','
            << (s.median_precision ? format_double(*s.median_precision) : "") << ','
            << format_double(s.median_recall) << ',' << format_double(s.median_elapsed_seconds) << ','
            << s.missing_precision << '\n';
    return out.str();
}

void emit_plot_data(const std::vector<TopMCurve>& curves, const std::filesystem::path& path) {
    atomic_write_file(path, curves_to_csv(curves));
}

void emit_plot_data(const std::vector<Experiment2Summary>& summaries, const std::filesystem::path& records_path,
                    const std::filesystem::path& summary_path) {
    atomic_write_file(records_path, records_to_csv(summaries));
    atomic_write_file(summary_path, summaries_to_csv(summaries));
}

std::string render_manifest(const ManifestFields& fields) {
    std::ostringstream out;
    out << "eggfinder-manifest v1\n";
    for (const auto& [k, v] : fields) out << k << " = " << v << '\n';
    return out.str();
}

ManifestFields parse_manifest(std::string_view text) {
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "eggfinder-manifest v1") throw ParseError("manifest: bad header", 1);
    ManifestFields fields;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto eq = line.find(" = ");
        if (eq == std::string_view::npos) throw ParseError("manifest: expected 'key = value'", i + 1);
        fields.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 3)));
    }
    return fields;
}

ManifestFields describe(const Experiment1Config& c) {
    return {{"software", std::string("eggfinder ") + kVersion},
            {"experiment", "exp1"},
            {"p", std::to_string(c.p)},
            {"edges", std::to_string(c.edges)},
            {"n", join(c.n_grid)},
            {"h", join(c.h_grid)},
            {"datasets", std::to_string(c.datasets)},
            {"seed", std::to_string(c.seed)},
            {"max_m", std::to_string(c.max_m)},
            {"model_policy", to_string(c.policy)},
            {"fdr", format_double(c.fdr_level)},
            {"coefficient_rule", synth::kDefaultCoefficientRule}};
}

ManifestFields describe(const Experiment2Config& c) {
    return {{"software", std::string("eggfinder ") + kVersion},
            {"experiment", "exp2"},
            {"p", join(c.p_grid)},
            {"edges", join(c.edges)},
            {"target_exogenous", join(c.target_exogenous)},
            {"n", std::to_string(c.n)},
            {"h", std::to_string(c.h)},
            {"datasets", std::to_string(c.datasets)},
            {"seed", std::to_string(c.seed)},
            {"model_policy", to_string(c.policy)},
            {"fdr", format_double(c.fdr_level)},
            {"median_convention", kMedianConvention},
            {"missing_precision", kMissingPrecisionConvention},
            {"timing", "wall clock around the search only"},
            {"coefficient_rule", synth::kDefaultCoefficientRule}};
}

}  // namespace eggfinder::bench
