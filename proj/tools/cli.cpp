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

#include "eggfinder_cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "eggfinder/bench.hpp"
#include "eggfinder/csv.hpp"
#include "eggfinder/errors.hpp"
#include "eggfinder/finder.hpp"
#include "eggfinder/hyptest.hpp"
#include "eggfinder/seeding.hpp"
#include "eggfinder/synth.hpp"
#include "eggfinder/text_io.hpp"
#include "eggfinder/version.hpp"
#include "eggfinder_cli/report.hpp"

namespace eggfinder::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Flag problems detected after parsing; reported like CLI11 parse errors.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Unreadable input is an input problem (exit 2); output failures stay IoError (exit 1).
std::string read_input(const std::string& path) {
    try {
        return read_file(path);
    } catch (const IoError& e) {
        throw UsageError(e.what());
    }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv(kSeedEnvVar)) {
        auto v = parse_unsigned(env);
        if (!v) throw UsageError(std::string(kSeedEnvVar) + " is not an unsigned integer");
        return *v;
    }
    return 1;
}

struct FindOptions {
    std::string input;
    double fdr = 0.05;
    std::string g = "robust";
    std::size_t bootstrap = 0;
    std::optional<std::uint64_t> seed;
    std::string groups;
    std::optional<std::size_t> select_top;
    std::vector<std::string> contrast;
    std::optional<std::size_t> max_candidates;
    std::string trace = "summary";
    bool transpose = false;
    bool strict = false;
    std::string report_path;
    double significance = 0.05;
    bool timings = false;
    unsigned threads = 0;
};

struct GenerateOptions {
    std::size_t p = 0;
    std::size_t edges = 0;
    std::size_t n = 0;
    std::size_t h = 1;
    std::optional<std::uint64_t> seed;
    std::string out_data;
    std::string out_model;
};

struct Exp1Options {
    bench::Experiment1Config config;
    std::optional<std::uint64_t> seed;
    std::string policy = "shared_per_cell";
    std::string out_dir;
};

struct Exp2Options {
    bench::Experiment2Config config;
    std::optional<std::uint64_t> seed;
    std::string policy = "fresh_per_dataset";
    std::string out_dir;
};

bench::ModelPolicy policy_from(const std::string& s) {
    return s == "shared_per_cell" ? bench::ModelPolicy::shared_per_cell : bench::ModelPolicy::fresh_per_dataset;
}

void write_summary(std::ostream& os, const RunReport& r, const std::optional<Timings>& timings) {
    os << "eggfinder " << r.software << ": " << r.input.observations << " observations x " << r.input.variables
       << " variables";
    if (!r.preprocessing.selected.empty()) os << ", " << r.preprocessing.selected.size() << " kept by t-test screen";
    os << "\n";
    if (!r.preprocessing.excluded.empty())
        os << "excluded " << r.preprocessing.excluded.size() << " constant column(s)\n";
    os << r.candidates.size() << " exogenous candidate(s) at FDR " << r.config.fdr << ":\n";
    for (const auto& c : r.candidates)
        os << "  " << std::setw(4) << c.rank << "  " << c.name << "  J=" << std::setprecision(6) << c.j_value << "\n";
    if (r.bootstrap) {
        std::size_t flagged = 0;
        for (const auto& v : r.bootstrap->variables) flagged += v.significant ? 1 : 0;
        os << "bootstrap: " << r.bootstrap->resamples << " resamples, " << flagged << " variable(s) flagged at level "
           << r.bootstrap->level << "\n";
    }
    if (timings)
        os << "time: preprocessing " << timings->preprocessing << " s, search " << timings->search << " s, bootstrap "
           << timings->bootstrap << " s\n";
}

int cmd_find(const FindOptions& o, std::ostream& out, std::ostream& err) {
    if (!(o.fdr > 0.0 && o.fdr < 1.0)) throw UsageError("--fdr must lie in (0, 1)");
    if (!(o.significance > 0.0 && o.significance < 1.0)) throw UsageError("--significance must lie in (0, 1)");
    if (o.select_top && (o.contrast.empty() || o.groups.empty()))
        throw UsageError("--select-top needs --contrast <a> <b> and --groups <file>");
    if (!o.contrast.empty() && !o.select_top) throw UsageError("--contrast is only used with --select-top");
    if (o.max_candidates && *o.max_candidates == 0) throw UsageError("--max-candidates must be at least 1");

    const auto t_pre = Clock::now();
    const std::string bytes = read_input(o.input);
    DataMatrix data = parse_data_csv(bytes, o.transpose);

    RunReport report;
    report.software = kVersion;
    report.input = {sha256_hex(bytes), data.observation_count(), data.variable_count()};
    auto& echo = report.config;
    echo.fdr = o.fdr;
    echo.g = std::string(ngmeasure::to_string(ngmeasure::contrast_from_string(o.g)));
    echo.max_candidates = o.max_candidates;
    echo.strict = o.strict;
    echo.trace = o.trace;
    echo.transpose = o.transpose;
    echo.select_top = o.select_top;
    if (!o.contrast.empty()) echo.contrast = std::pair{o.contrast[0], o.contrast[1]};
    echo.bootstrap = o.bootstrap;
    echo.seed = resolve_seed(o.seed);
    echo.significance = o.significance;

    std::vector<std::string> labels;
    if (!o.groups.empty()) {
        const std::string label_bytes = read_input(o.groups);
        echo.groups_sha256 = sha256_hex(label_bytes);
        labels = parse_labels(label_bytes);
        if (labels.size() != data.observation_count())
            throw LabelLengthMismatch("--groups: " + std::to_string(labels.size()) + " labels for " +
                                      std::to_string(data.observation_count()) + " observations");
    }

    // analysed column k -> input column
    IndexSet column_map(data.variable_count());
    for (std::size_t j = 0; j < column_map.size(); ++j) column_map[j] = j;

    if (o.select_top) {
        const auto ranked = hyptest::rank_features_by_welch(data, labels, o.contrast[0], o.contrast[1]);
        IndexSet keep;
        for (std::size_t k = 0; k < ranked.size() && k < *o.select_top; ++k) keep.push_back(ranked[k].index);
        std::sort(keep.begin(), keep.end());
        data = data.select_columns(keep);
        column_map = keep;
        report.preprocessing.selected = data.names();
    }
    if (!labels.empty()) {
        data = hyptest::group_mean_center(data, labels);
        report.preprocessing.group_centered = true;
    }
    Timings timings;
    timings.preprocessing = seconds_since(t_pre);

    finder::EggFinderConfig config;
    config.fdr_level = o.fdr;
    config.contrast = ngmeasure::contrast_from_string(o.g);
    config.max_candidates = o.max_candidates;
    config.strict = o.strict;
    config.keep_test_evidence = o.trace == "full";
    config.threads = o.threads;

    const auto t_search = Clock::now();
    const auto result = finder::run(data, config);
    timings.search = seconds_since(t_search);

    for (const auto& e : result.excluded)
        report.preprocessing.excluded.push_back({column_map[e.index], data.name(e.index), e.reason});
    for (std::size_t k = 0; k < result.candidates.size(); ++k) {
        const auto v = result.candidates[k];
        report.candidates.push_back({k + 1, column_map[v], data.name(v), result.iterations[k].selected_score.j_value});
    }
    if (o.trace != "none") {
        for (const auto& it : result.iterations) {
            IterationEntry e;
            e.iteration = it.iteration;
            e.selected = data.name(it.selected);
            e.j_value = it.selected_score.j_value;
            e.surviving_before = it.surviving_before.size();
            e.removed = it.removed_by_correlation.size();
            e.tests_run = it.tests_run;
            e.tests_rejected = it.tests_rejected;
            if (o.trace == "full") {
                for (auto v : it.removed_by_correlation) e.removed_names.push_back(data.name(v));
                for (const auto& ev : it.evidence)
                    e.evidence.push_back({data.name(ev.variable), data.name(ev.against), ev.p_value});
            }
            report.iterations.push_back(std::move(e));
        }
    }

    if (o.bootstrap > 0) {
        const auto t_boot = Clock::now();
        auto boot = finder::bootstrap(data, config, o.bootstrap, echo.seed);
        boot.significant_at = o.significance;
        const auto flagged = finder::flag_significant(boot, o.significance);
        timings.bootstrap = seconds_since(t_boot);

        BootstrapSection s;
        s.resamples = boot.resamples;
        s.seed = boot.seed;
        s.full_data_candidate_count = boot.full_data_candidate_count;
        s.null_proportion = boot.variable_count == 0 ? 0.0
                                                     : static_cast<double>(boot.full_data_candidate_count) /
                                                           static_cast<double>(boot.variable_count);
        s.level = o.significance;
        s.rule = "exact one-sided binomial test of count against resamples x null_proportion";
        s.excluded_events = boot.excluded_events;
        for (std::size_t j = 0; j < boot.variable_count; ++j) {
            const bool sig = std::binary_search(flagged.begin(), flagged.end(), j);
            s.variables.push_back({column_map[j], data.name(j), boot.counts[j], boot.per_variable_proportion[j], sig});
        }
        report.bootstrap = std::move(s);
    }
    if (o.timings) report.timings = timings;

    const std::string body = serialize_report(report);
    if (o.report_path.empty()) {
        out << body;
        write_summary(err, report, timings);
    } else {
        atomic_write_file(o.report_path, body);
        write_summary(out, report, timings);
    }
    return kSuccess;
}

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
    if (o.n == 0) throw UsageError("--n must be positive");
    if (o.p == 0) throw UsageError("--p must be positive");
    if (o.h == 0) throw UsageError("--h must be positive");
    const std::uint64_t seed = resolve_seed(o.seed);
    const auto model = synth::generate_model(o.p, o.edges, o.h, seed);
    const auto sample = synth::sample_dataset(model, o.n, derive_seed(seed, "dataset"));
    const std::string csv = data_to_csv(sample.data);
    const std::string model_text = synth::serialize_model(model);
    atomic_write_file(o.out_data, csv);
    atomic_write_file(o.out_model, model_text);
    out << "generated " << o.n << " x " << o.p << " dataset with " << model.exogenous_set.size()
        << " exogenous variables (seed " << seed << ")\n";
    return kSuccess;
}

int cmd_exp1(Exp1Options o, std::ostream& out) {
    o.config.seed = resolve_seed(o.seed);
    o.config.policy = policy_from(o.policy);
    const auto curves = bench::experiment1(o.config);
    const fs::path dir(o.out_dir);
    auto fields = bench::describe(o.config);
    fields.emplace_back("threads", std::to_string(o.config.threads));
    fields.emplace_back("out_dir", o.out_dir);
    bench::emit_plot_data(curves, dir / "curves.csv");
    atomic_write_file(dir / "manifest.txt", bench::render_manifest(fields));
    for (const auto& c : curves)
        out << "n=" << c.n << " h=" << c.h << " top-1 " << c.percentages.front() << "\n";
    return kSuccess;
}

int cmd_exp2(Exp2Options o, std::ostream& out) {
    o.config.seed = resolve_seed(o.seed);
    o.config.policy = policy_from(o.policy);
    if (!o.config.edges.empty()) o.config.target_exogenous.clear();
    const auto summaries = bench::experiment2(o.config);
    const fs::path dir(o.out_dir);
    auto fields = bench::describe(o.config);
    fields.emplace_back("threads", std::to_string(o.config.threads));
    fields.emplace_back("out_dir", o.out_dir);
    bench::emit_plot_data(summaries, dir / "records.csv", dir / "summary.csv");
    atomic_write_file(dir / "manifest.txt", bench::render_manifest(fields));
    for (const auto& s : summaries)
        out << "p=" << s.p << " edges=" << s.edges << " median ell=" << s.median_exogenous << " time "
            << s.median_elapsed_seconds << " s precision "
            << (s.median_precision ? format_double(*s.median_precision) : std::string("n/a")) << " recall "
            << s.median_recall << "\n";
    return kSuccess;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"eggfinder: find exogenous variables in linear non-Gaussian acyclic models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    // --h is the error-term count, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");

    FindOptions fo;
    auto* find = app.add_subcommand("find", "Run the search (and optional bootstrap) on a CSV file");
    find->add_option("input", fo.input, "Data CSV: header of variable names, one observation per row")->required();
    find->add_option("--fdr", fo.fdr, "False discovery rate for the correlation tests")->capture_default_str();
    find->add_option("--g", fo.g, "Contrast function")->check(CLI::IsMember({"robust", "kurtosis"}))->capture_default_str();
    find->add_option("--bootstrap", fo.bootstrap, "Bootstrap resamples (0 = off)")->capture_default_str();
    find->add_option("--seed", fo.seed, std::string("Bootstrap seed (default: $") + kSeedEnvVar + " or 1)");
    find->add_option("--groups", fo.groups, "One group label per observation, one per line");
    find->add_option("--select-top", fo.select_top, "Keep the k variables with the smallest Welch t-test p-values");
    find->add_option("--contrast", fo.contrast, "Two group labels compared by --select-top")->expected(2);
    find->add_option("--max-candidates", fo.max_candidates, "Stop after this many candidates");
    find->add_option("--trace", fo.trace, "Iteration detail in the report")
        ->check(CLI::IsMember({"none", "summary", "full"}))
        ->capture_default_str();
    find->add_flag("--transpose", fo.transpose, "Input has one variable per row (name first)");
    find->add_flag("--strict", fo.strict, "Fail on constant columns instead of excluding them");
    find->add_option("--report", fo.report_path, "Write the JSON report here instead of stdout");
    find->add_option("--significance", fo.significance, "Level for flagging bootstrap proportions")->capture_default_str();
    find->add_flag("--timings", fo.timings, "Include wall-clock timings in the report");
    find->add_option("--threads", fo.threads, "Worker threads (0 = all cores)")->capture_default_str();

    GenerateOptions go;
    auto* gen = app.add_subcommand("generate", "Sample a random model and dataset");
    gen->add_option("--p", go.p, "Number of variables")->required();
    gen->add_option("--edges", go.edges, "Number of edges")->required();
    gen->add_option("--n", go.n, "Number of observations")->required();
    gen->add_option("--h", go.h, "Terms summed per error")->capture_default_str();
    gen->add_option("--seed", go.seed, "Master seed");
    gen->add_option("--out-data", go.out_data, "Dataset CSV path")->required();
    gen->add_option("--out-model", go.out_model, "Model file path")->required();

    auto* benchcmd = app.add_subcommand("bench", "Simulation benchmarks");
    benchcmd->require_subcommand(1);

    Exp1Options e1;
    auto* exp1 = benchcmd->add_subcommand("exp1", "Top-m accuracy curves");
    exp1->add_option("--p", e1.config.p)->capture_default_str();
    exp1->add_option("--edges", e1.config.edges)->capture_default_str();
    exp1->add_option("--n", e1.config.n_grid, "Sample sizes")->capture_default_str();
    exp1->add_option("--h", e1.config.h_grid, "Error term counts")->capture_default_str();
    exp1->add_option("--datasets", e1.config.datasets, "Datasets per cell")->capture_default_str();
    exp1->add_option("--max-m", e1.config.max_m)->capture_default_str();
    exp1->add_option("--fdr", e1.config.fdr_level)->capture_default_str();
    exp1->add_option("--seed", e1.seed);
    exp1->add_option("--policy", e1.policy)
        ->check(CLI::IsMember({"shared_per_cell", "fresh_per_dataset"}))
        ->capture_default_str();
    exp1->add_option("--threads", e1.config.threads)->capture_default_str();
    exp1->add_option("--out-dir", e1.out_dir)->required();

    Exp2Options e2;
    auto* exp2 = benchcmd->add_subcommand("exp2", "Precision, recall and time");
    exp2->add_option("--p", e2.config.p_grid)->capture_default_str();
    exp2->add_option("--edges", e2.config.edges, "Edge count per p (overrides --target-ell)");
    exp2->add_option("--target-ell", e2.config.target_exogenous, "Expected exogenous count per p")->capture_default_str();
    exp2->add_option("--n", e2.config.n)->capture_default_str();
    exp2->add_option("--h", e2.config.h)->capture_default_str();
    exp2->add_option("--datasets", e2.config.datasets)->capture_default_str();
    exp2->add_option("--fdr", e2.config.fdr_level)->capture_default_str();
    exp2->add_option("--seed", e2.seed);
    exp2->add_option("--policy", e2.policy)
        ->check(CLI::IsMember({"shared_per_cell", "fresh_per_dataset"}))
        ->capture_default_str();
    exp2->add_option("--threads", e2.config.threads)->capture_default_str();
    exp2->add_option("--out-dir", e2.out_dir)->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kMalformedInput;
    }

    try {
        if (find->parsed()) return cmd_find(fo, out, err);
        if (gen->parsed()) return cmd_generate(go, out);
        if (exp1->parsed()) return cmd_exp1(e1, out);
        if (exp2->parsed()) return cmd_exp2(e2, out);
        return kFailure;
    } catch (const DegenerateSeries& e) {
        err << "error: degenerate data: " << e.what() << "\n";
        return kDegenerateData;
    } catch (const ParseError& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return kMalformedInput;
    } catch (const LabelLengthMismatch& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return kMalformedInput;
    } catch (const TooFewObservations& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return kMalformedInput;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kMalformedInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace eggfinder::cli
