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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eggfinder::cli {

inline constexpr const char* kReportSchema = "eggfinder.report/1";

struct InputInfo {
    std::string sha256;
    std::size_t observations = 0;
    std::size_t variables = 0;

    bool operator==(const InputInfo&) const = default;
};

/// Every option that influences the machine-readable body.
struct ConfigEcho {
    double fdr = 0.05;
    std::string g = "robust";
    std::optional<std::size_t> max_candidates;
    bool strict = false;
    std::string trace = "summary";
    bool transpose = false;
    std::optional<std::string> groups_sha256;
    std::optional<std::size_t> select_top;
    std::optional<std::pair<std::string, std::string>> contrast;
    std::size_t bootstrap = 0;
    std::uint64_t seed = 0;
    double significance = 0.05;

    bool operator==(const ConfigEcho&) const = default;
};

struct ExcludedEntry {
    std::size_t column = 0;
    std::string name;
    std::string reason;

    bool operator==(const ExcludedEntry&) const = default;
};

struct Preprocessing {
    bool group_centered = false;
    /// Names kept by the t-test screen, in input order; empty when no screen ran.
    std::vector<std::string> selected;
    std::vector<ExcludedEntry> excluded;

    bool operator==(const Preprocessing&) const = default;
};

/// `column` is the 0-based column in the input file.
struct CandidateEntry {
    std::size_t rank = 0;
    std::size_t column = 0;
    std::string name;
    double j_value = 0.0;

    bool operator==(const CandidateEntry&) const = default;
};

struct EvidenceEntry {
    std::string variable;
    std::string against;
    double p_value = 0.0;

    bool operator==(const EvidenceEntry&) const = default;
};

struct IterationEntry {
    std::size_t iteration = 0;
    std::string selected;
    double j_value = 0.0;
    std::size_t surviving_before = 0;
    std::size_t removed = 0;
    std::size_t tests_run = 0;
    std::size_t tests_rejected = 0;
    /// Filled at trace level "full".
    std::vector<std::string> removed_names;
    std::vector<EvidenceEntry> evidence;

    bool operator==(const IterationEntry&) const = default;
};

struct BootstrapEntry {
    std::size_t column = 0;
    std::string name;
    std::size_t count = 0;
    double proportion = 0.0;
    bool significant = false;

    bool operator==(const BootstrapEntry&) const = default;
};

struct BootstrapSection {
    std::size_t resamples = 0;
    std::uint64_t seed = 0;
    std::size_t full_data_candidate_count = 0;
    double null_proportion = 0.0;
    double level = 0.05;
    std::string rule;
    std::size_t excluded_events = 0;
    std::vector<BootstrapEntry> variables;

    bool operator==(const BootstrapSection&) const = default;
};

/// Seconds; not covered by the byte-stability guarantee, so only written on request.
struct Timings {
    double preprocessing = 0.0;
    double search = 0.0;
    double bootstrap = 0.0;

    bool operator==(const Timings&) const = default;
};

struct RunReport {
    std::string schema = kReportSchema;
    std::string software;
    InputInfo input;
    ConfigEcho config;
    Preprocessing preprocessing;
    std::vector<CandidateEntry> candidates;
    std::vector<IterationEntry> iterations;
    std::optional<BootstrapSection> bootstrap;
    std::optional<Timings> timings;

    bool operator==(const RunReport&) const = default;
};

/// Pretty-printed JSON with a fixed key order.
std::string serialize_report(const RunReport& report);
/// Throws ParseError on malformed or mismatched-schema input.
RunReport parse_report(const std::string& text);

}  // namespace eggfinder::cli
