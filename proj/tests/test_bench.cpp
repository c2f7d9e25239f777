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

#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "eggfinder/bench.hpp"
#include "eggfinder/errors.hpp"
#include "eggfinder/text_io.hpp"

using namespace eggfinder;
using namespace eggfinder::bench;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("eggfinder_test_bench_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

Experiment1Config small_exp1() {
    Experiment1Config cfg;
    cfg.p = 12;
    cfg.edges = 12;
    cfg.n_grid = {40, 120};
    cfg.h_grid = {1, 20};
    cfg.datasets = 12;
    cfg.max_m = 6;
    cfg.seed = 5;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST_CASE("correct prefix length and top-m percentages") {
    CHECK(correct_prefix_length({3, 1, 7, 2}, {1, 2, 3}) == 2);
    CHECK(correct_prefix_length({7, 1}, {1, 2, 3}) == 0);
    CHECK(correct_prefix_length({}, {1}) == 0);

    // one dataset whose first pick is wrong: zero everywhere
    CHECK(top_m_percentages({0}, 4) == std::vector<double>{0, 0, 0, 0});
    CHECK(top_m_percentages({3, 1, 0, 5}, 4) == std::vector<double>{0.75, 0.5, 0.5, 0.25});
}

TEST_CASE("score_candidates") {
    const auto exact = score_candidates({4, 1, 9}, {1, 4, 9});
    CHECK(exact.precision == 1.0);
    CHECK(exact.recall == 1.0);
    const auto empty = score_candidates({}, {1, 2});
    CHECK(!empty.precision);
    CHECK(empty.recall == 0.0);
    const auto half = score_candidates({1, 5, 6, 2}, {1, 2, 3});
    CHECK(half.precision == 0.5);
    CHECK(half.recall == doctest::Approx(2.0 / 3.0));
    CHECK(half.candidate_count == 4);
    CHECK(half.exogenous_count == 3);
}

TEST_CASE("lower median") {
    CHECK(lower_median({3.0}) == 3.0);
    CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == 2.0);
    CHECK(lower_median({5.0, 1.0, 3.0}) == 3.0);
    CHECK_THROWS_AS(lower_median({}), InvalidArgument);
}

TEST_CASE("experiment1 curves are monotone and reproducible") {
    const auto cfg = small_exp1();
    const auto curves = experiment1(cfg);
    REQUIRE(curves.size() == 4);
    CHECK(curves[0].n == 40);
    CHECK(curves[0].h == 1);
    CHECK(curves[1].h == 20);
    CHECK(curves[2].n == 120);
    for (const auto& c : curves) {
        CHECK(c.percentages.size() == cfg.max_m);
        CHECK(c.datasets == cfg.datasets);
        for (std::size_t m = 1; m < c.percentages.size(); ++m) CHECK(c.percentages[m] <= c.percentages[m - 1]);
        for (double v : c.percentages) CHECK((v >= 0.0 && v <= 1.0));
    }
    auto threaded = cfg;
    threaded.threads = 3;
    CHECK(experiment1(threaded) == curves);
    auto other = cfg;
    other.seed = 6;
    CHECK(experiment1(other) != curves);
}

TEST_CASE("experiment1 with a single dataset") {
    auto cfg = small_exp1();
    cfg.datasets = 1;
    cfg.n_grid = {50};
    cfg.h_grid = {3};
    const auto curves = experiment1(cfg);
    REQUIRE(curves.size() == 1);
    for (double v : curves[0].percentages) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("experiment1 rejects empty grids") {
    auto cfg = small_exp1();
    cfg.n_grid.clear();
    CHECK_THROWS_AS(experiment1(cfg), InvalidArgument);
    cfg = small_exp1();
    cfg.datasets = 0;
    CHECK_THROWS_AS(experiment1(cfg), InvalidArgument);
    cfg = small_exp1();
    cfg.h_grid = {0};
    CHECK_THROWS_AS(experiment1(cfg), InvalidArgument);
}

TEST_CASE("high-h desk cell picks an exogenous variable first") {
    Experiment1Config cfg;
    cfg.n_grid = {200};
    cfg.h_grid = {50};
    cfg.datasets = 100;
    cfg.max_m = 3;
    cfg.threads = 1;
    const auto curves = experiment1(cfg);
    CHECK(curves.at(0).percentages.at(0) >= 0.9);
}

TEST_CASE("experiment2 records and summaries") {
    Experiment2Config cfg;
    cfg.p_grid = {20, 30};
    cfg.target_exogenous = {6, 9};
    cfg.n = 200;
    cfg.datasets = 7;
    cfg.seed = 3;
    const auto summaries = experiment2(cfg);
    REQUIRE(summaries.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        const auto& s = summaries[k];
        CHECK(s.p == cfg.p_grid[k]);
        CHECK(s.datasets == 7);
        CHECK(s.records.size() == 7);
        std::vector<double> recalls;
        for (const auto& r : s.records) {
            recalls.push_back(r.recall);
            CHECK(r.elapsed_seconds >= 0.0);
            if (r.precision) CHECK((*r.precision >= 0.0 && *r.precision <= 1.0));
        }
        CHECK(s.median_recall == lower_median(recalls));
    }
    auto threaded = cfg;
    threaded.threads = 2;
    const auto again = experiment2(threaded);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t d = 0; d < 7; ++d) {
            CHECK(again[k].records[d].precision == summaries[k].records[d].precision);
            CHECK(again[k].records[d].recall == summaries[k].records[d].recall);
            CHECK(again[k].records[d].candidate_count == summaries[k].records[d].candidate_count);
        }
}

TEST_CASE("experiment2 explicit edges override the calibration") {
    Experiment2Config cfg;
    cfg.p_grid = {15};
    cfg.edges = {0};
    cfg.n = 100;
    cfg.datasets = 3;
    const auto s = experiment2(cfg);
    CHECK(s.at(0).edges == 0);
    for (const auto& r : s.at(0).records) CHECK(r.exogenous_count == 15);
}

TEST_CASE("curve CSV has a fixed header and round trips") {
    CHECK(curves_to_csv({}) == std::string(kCurveCsvHeader) + "\n");
    CHECK(curves_from_csv(curves_to_csv({})).empty());
    const auto curves = experiment1(small_exp1());
    const std::string text = curves_to_csv(curves);
    CHECK(text.rfind(std::string(kCurveCsvHeader) + "\n", 0) == 0);
    CHECK(curves_from_csv(text) == curves);
    CHECK(curves_to_csv(curves) == text);
    CHECK_THROWS_AS(curves_from_csv("p,n\n1,2\n"), ParseError);
    CHECK_THROWS_AS(curves_from_csv(std::string(kCurveCsvHeader) + "\n1,2,3\n"), ParseError);
}

TEST_CASE("emit_plot_data writes files atomically and reports bad paths") {
    const auto dir = scratch_dir("emit");
    const auto curves = experiment1(small_exp1());
    emit_plot_data(curves, dir / "curves.csv");
    CHECK(read_file(dir / "curves.csv") == curves_to_csv(curves));

    Experiment2Config cfg;
    cfg.p_grid = {10};
    cfg.target_exogenous = {4};
    cfg.n = 80;
    cfg.datasets = 2;
    const auto summaries = experiment2(cfg);
    emit_plot_data(summaries, dir / "records.csv", dir / "summary.csv");
    const auto records = read_file(dir / "records.csv");
    CHECK(records.rfind(std::string(kRecordCsvHeader) + "\n", 0) == 0);
    CHECK(std::count(records.begin(), records.end(), '\n') == 3);
    CHECK(read_file(dir / "summary.csv").rfind(kSummaryCsvHeader, 0) == 0);

    std::filesystem::create_directories(dir / "blocked");
    try {
        emit_plot_data(curves, dir / "blocked");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("blocked") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("manifest round trips and describes every field") {
    const ManifestFields fields{{"command", "bench exp1"}, {"seed", "42"}, {"n_grid", "30 60"}};
    const std::string text = render_manifest(fields);
    CHECK(text.rfind("eggfinder-manifest v1\n", 0) == 0);
    CHECK(parse_manifest(text) == fields);
    CHECK_THROWS_AS(parse_manifest("not a manifest\n"), ParseError);

    const auto d1 = describe(small_exp1());
    const auto has = [&](const ManifestFields& f, const std::string& key) {
        return std::any_of(f.begin(), f.end(), [&](const auto& kv) { return kv.first == key; });
    };
    for (const char* key : {"software", "p", "edges", "n", "h", "datasets", "seed", "max_m", "model_policy", "fdr"})
        CHECK(has(d1, key));
    const auto d2 = describe(Experiment2Config{});
    for (const char* key : {"p", "edges", "target_exogenous", "n", "h", "datasets", "seed", "model_policy", "median_convention"})
        CHECK(has(d2, key));
}
