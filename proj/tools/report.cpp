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

#include "eggfinder_cli/report.hpp"

#include <json.hpp>

#include "eggfinder/errors.hpp"

namespace eggfinder::cli {

using json = nlohmann::ordered_json;

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

}  // namespace

std::string serialize_report(const RunReport& r) {
    json j;
    j["schema"] = r.schema;
    j["software"] = r.software;
    j["input"] = {{"sha256", r.input.sha256},
                  {"observations", r.input.observations},
                  {"variables", r.input.variables}};

    const auto& c = r.config;
    j["config"] = {{"fdr", c.fdr},
                   {"g", c.g},
                   {"max_candidates", optional_json(c.max_candidates)},
                   {"strict", c.strict},
                   {"trace", c.trace},
                   {"transpose", c.transpose},
                   {"groups_sha256", optional_json(c.groups_sha256)},
                   {"select_top", optional_json(c.select_top)},
                   {"contrast", c.contrast ? json::array({c.contrast->first, c.contrast->second}) : json(nullptr)},
                   {"bootstrap", c.bootstrap},
                   {"seed", c.seed},
                   {"significance", c.significance}};

    json excluded = json::array();
    for (const auto& e : r.preprocessing.excluded)
        excluded.push_back({{"column", e.column}, {"name", e.name}, {"reason", e.reason}});
    j["preprocessing"] = {{"group_centered", r.preprocessing.group_centered},
                          {"selected", r.preprocessing.selected},
                          {"excluded", excluded}};

    json candidates = json::array();
    for (const auto& e : r.candidates)
        candidates.push_back({{"rank", e.rank}, {"column", e.column}, {"name", e.name}, {"j", e.j_value}});
    j["candidates"] = candidates;

    json iterations = json::array();
    for (const auto& it : r.iterations) {
        json evidence = json::array();
        for (const auto& e : it.evidence)
            evidence.push_back({{"variable", e.variable}, {"against", e.against}, {"p_value", e.p_value}});
        iterations.push_back({{"iteration", it.iteration},
                              {"selected", it.selected},
                              {"j", it.j_value},
                              {"surviving_before", it.surviving_before},
                              {"removed", it.removed},
                              {"tests_run", it.tests_run},
                              {"tests_rejected", it.tests_rejected},
                              {"removed_names", it.removed_names},
                              {"evidence", evidence}});
    }
    j["iterations"] = iterations;

    if (r.bootstrap) {
        const auto& b = *r.bootstrap;
        json vars = json::array();
        for (const auto& v : b.variables)
            vars.push_back({{"column", v.column},
                            {"name", v.name},
                            {"count", v.count},
                            {"proportion", v.proportion},
                            {"significant", v.significant}});
        j["bootstrap"] = {{"resamples", b.resamples},
                          {"seed", b.seed},
                          {"full_data_candidate_count", b.full_data_candidate_count},
                          {"null_proportion", b.null_proportion},
                          {"level", b.level},
                          {"rule", b.rule},
                          {"excluded_events", b.excluded_events},
                          {"variables", vars}};
    } else {
        j["bootstrap"] = nullptr;
    }
    if (r.timings)
        j["timings"] = {{"preprocessing_seconds", r.timings->preprocessing},
                        {"search_seconds", r.timings->search},
                        {"bootstrap_seconds", r.timings->bootstrap}};
    return j.dump(2) + "\n";
}

RunReport parse_report(const std::string& text) {
    try {
        const json j = json::parse(text);
        RunReport r;
        r.schema = j.at("schema").get<std::string>();
        if (r.schema != kReportSchema) throw ParseError("report: unsupported schema '" + r.schema + "'");
        r.software = j.at("software").get<std::string>();
        const auto& in = j.at("input");
        r.input = {in.at("sha256").get<std::string>(), in.at("observations").get<std::size_t>(),
                   in.at("variables").get<std::size_t>()};

        const auto& c = j.at("config");
        r.config.fdr = c.at("fdr").get<double>();
        r.config.g = c.at("g").get<std::string>();
        r.config.max_candidates = optional_from<std::size_t>(c.at("max_candidates"));
        r.config.strict = c.at("strict").get<bool>();
        r.config.trace = c.at("trace").get<std::string>();
        r.config.transpose = c.at("transpose").get<bool>();
        r.config.groups_sha256 = optional_from<std::string>(c.at("groups_sha256"));
        r.config.select_top = optional_from<std::size_t>(c.at("select_top"));
        if (!c.at("contrast").is_null())
            r.config.contrast = std::pair{c.at("contrast").at(0).get<std::string>(), c.at("contrast").at(1).get<std::string>()};
        r.config.bootstrap = c.at("bootstrap").get<std::size_t>();
        r.config.seed = c.at("seed").get<std::uint64_t>();
        r.config.significance = c.at("significance").get<double>();

        const auto& pre = j.at("preprocessing");
        r.preprocessing.group_centered = pre.at("group_centered").get<bool>();
        r.preprocessing.selected = pre.at("selected").get<std::vector<std::string>>();
        for (const auto& e : pre.at("excluded"))
            r.preprocessing.excluded.push_back(
                {e.at("column").get<std::size_t>(), e.at("name").get<std::string>(), e.at("reason").get<std::string>()});

        for (const auto& e : j.at("candidates"))
            r.candidates.push_back({e.at("rank").get<std::size_t>(), e.at("column").get<std::size_t>(),
                                    e.at("name").get<std::string>(), e.at("j").get<double>()});

        for (const auto& e : j.at("iterations")) {
            IterationEntry it;
            it.iteration = e.at("iteration").get<std::size_t>();
            it.selected = e.at("selected").get<std::string>();
            it.j_value = e.at("j").get<double>();
            it.surviving_before = e.at("surviving_before").get<std::size_t>();
            it.removed = e.at("removed").get<std::size_t>();
            it.tests_run = e.at("tests_run").get<std::size_t>();
            it.tests_rejected = e.at("tests_rejected").get<std::size_t>();
            it.removed_names = e.at("removed_names").get<std::vector<std::string>>();
            for (const auto& ev : e.at("evidence"))
                it.evidence.push_back({ev.at("variable").get<std::string>(), ev.at("against").get<std::string>(),
                                       ev.at("p_value").get<double>()});
            r.iterations.push_back(std::move(it));
        }

        if (!j.at("bootstrap").is_null()) {
            const auto& b = j.at("bootstrap");
            BootstrapSection s;
            s.resamples = b.at("resamples").get<std::size_t>();
            s.seed = b.at("seed").get<std::uint64_t>();
            s.full_data_candidate_count = b.at("full_data_candidate_count").get<std::size_t>();
            s.null_proportion = b.at("null_proportion").get<double>();
            s.level = b.at("level").get<double>();
            s.rule = b.at("rule").get<std::string>();
            s.excluded_events = b.at("excluded_events").get<std::size_t>();
            for (const auto& v : b.at("variables"))
                s.variables.push_back({v.at("column").get<std::size_t>(), v.at("name").get<std::string>(),
                                       v.at("count").get<std::size_t>(), v.at("proportion").get<double>(),
                                       v.at("significant").get<bool>()});
            r.bootstrap = std::move(s);
        }
        if (j.contains("timings")) {
            const auto& t = j.at("timings");
            r.timings = Timings{t.at("preprocessing_seconds").get<double>(), t.at("search_seconds").get<double>(),
                                t.at("bootstrap_seconds").get<double>()};
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

}  // namespace eggfinder::cli
