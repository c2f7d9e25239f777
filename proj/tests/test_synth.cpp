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
#include <cmath>
#include <numeric>
#include <set>

#include "eggfinder/errors.hpp"
#include "eggfinder/seeding.hpp"
#include "eggfinder/synth.hpp"
#include "support/oracles.hpp"

using namespace eggfinder;
using namespace eggfinder::synth;

namespace {

std::size_t source_count(const Dag& dag) { return dag.sources().size(); }

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    return centered.transpose() * centered / static_cast<double>(x.rows() - 1);
}

double term_excess_kurtosis(double q) {
    return transform_second_moment(2.0 * q) / std::pow(transform_second_moment(q), 2) - 3.0;
}

}  // namespace

TEST_CASE("random_dag small cases") {
    const auto empty = random_dag(3, 0, 1);
    CHECK(empty.edges.empty());
    CHECK(source_count(empty) == 3);

    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto full = random_dag(3, 3, s);
        CHECK(full.edges.size() == 3);
        CHECK(source_count(full) == 1);
    }
    CHECK_THROWS_AS(random_dag(3, 4, 1), TooManyEdges);
    CHECK(random_dag(1, 0, 5).sources() == IndexSet{0});
}

TEST_CASE("random_dag respects its order and is deterministic") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto dag = random_dag(25, 40, s);
        CHECK(dag.edges.size() == 40);
        std::vector<std::size_t> position(25);
        for (std::size_t k = 0; k < 25; ++k) position[dag.topo_order[k]] = k;
        std::set<Edge> distinct(dag.edges.begin(), dag.edges.end());
        CHECK(distinct.size() == 40);
        CHECK(std::is_sorted(dag.edges.begin(), dag.edges.end()));
        for (const auto& e : dag.edges) CHECK(position[e.parent] < position[e.child]);
        const auto again = random_dag(25, 40, s);
        CHECK(again.edges == dag.edges);
        CHECK(again.topo_order == dag.topo_order);
    }
}

TEST_CASE("expected exogenous count matches exhaustive enumeration") {
    // with a fixed order, every edge subset of the forward pairs is equally likely
    const std::size_t p = 5;
    std::vector<Edge> pairs;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) pairs.push_back({i, j});
    for (std::size_t e = 0; e <= pairs.size(); ++e) {
        double total = 0.0, subsets = 0.0;
        for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != e) continue;
            std::vector<bool> has_parent(p, false);
            for (std::size_t k = 0; k < pairs.size(); ++k)
                if (mask & (1u << k)) has_parent[pairs[k].child] = true;
            total += static_cast<double>(std::count(has_parent.begin(), has_parent.end(), false));
            subsets += 1.0;
        }
        CHECK(expected_exogenous_count(p, e) == doctest::Approx(total / subsets).epsilon(1e-12));
    }
}

TEST_CASE("random_dag source counts average to the expectation") {
    double sum = 0.0;
    const int reps = 400;
    for (int s = 0; s < reps; ++s) sum += static_cast<double>(source_count(random_dag(1000, 1000, s)));
    const double expected = expected_exogenous_count(1000, 1000);
    CHECK(std::abs(sum / reps - expected) < 2.0);
}

TEST_CASE("edge count calibrated to the reference instance lands in the band") {
    const std::size_t edges = edges_for_expected_exogenous(1000, 171.0);
    CHECK(std::abs(expected_exogenous_count(1000, edges) - 171.0) < 0.5);
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto l = source_count(random_dag(1000, edges, s));
        CHECK(l >= 120);
        CHECK(l <= 230);
    }
    CHECK(edges_for_expected_exogenous(10, 10.0) == 0);
}

TEST_CASE("transform second moment matches quadrature") {
    const std::vector<std::pair<double, double>> frozen{
        {0.5, 0.797884560802865}, {0.8, 0.881595444430945}, {1.2, 1.17774780672787}, {2.0, 3.0}};
    for (const auto& [q, value] : frozen) {
        const double quad = 2.0 * oracle::integrate_panels(
                                      [q = q](double z) { return std::pow(z, 2.0 * q) * oracle::normal_pdf(z); }, 0.0,
                                      40.0, 80, 1e-16);
        CHECK(std::abs(transform_second_moment(q) - quad) < 1e-10);
        CHECK(transform_second_moment(q) == doctest::Approx(value).epsilon(1e-13));
    }
    CHECK(transform_second_moment(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("identity transform gives a Gaussian with the target std") {
    const ExternalInfluenceSpec spec{InfluenceKind::exogenous, 1, {1.0}, 1.3};
    const auto draws = sample_external_influence(spec, 200'000, 5);
    CHECK(std::sqrt(oracle::sample_variance(draws)) == doctest::Approx(1.3).epsilon(0.01));
    CHECK(std::abs(oracle::excess_kurtosis(draws)) < 0.05);
}

TEST_CASE("q = 2 term has the Gaussian-moment kurtosis") {
    CHECK(term_excess_kurtosis(2.0) == doctest::Approx(105.0 / 9.0 - 3.0).epsilon(1e-12));
    const ExternalInfluenceSpec spec{InfluenceKind::exogenous, 1, {2.0}, 1.0};
    const auto draws = sample_external_influence(spec, 1'000'000, 6);
    CHECK(std::abs(oracle::excess_kurtosis(draws) - 8.6667) < 0.5);
    CHECK(std::abs(oracle::sample_variance(draws) - 1.0) < 0.02);
}

TEST_CASE("summing h terms attenuates kurtosis by 1/h") {
    ExternalInfluenceSpec spec{InfluenceKind::error, 50, {}, 0.9};
    double avg = 0.0;
    for (int k = 0; k < 50; ++k) {
        spec.exponents.push_back(k % 2 ? 1.2 + 0.8 * k / 50.0 : 0.5 + 0.3 * k / 50.0);
        avg += term_excess_kurtosis(spec.exponents.back()) / 50.0;
    }
    const auto draws = sample_external_influence(spec, 1'000'000, 7);
    CHECK(std::abs(oracle::excess_kurtosis(draws) - avg / 50.0) < 0.15);
    CHECK(std::sqrt(oracle::sample_variance(draws)) == doctest::Approx(0.9).epsilon(0.01));
}

TEST_CASE("influence spec ranges are enforced") {
    CHECK_NOTHROW(ExternalInfluenceSpec{InfluenceKind::error, 2, {0.5, 2.0}, 1.5}.validate());
    CHECK_THROWS_AS((ExternalInfluenceSpec{InfluenceKind::error, 1, {1.0}, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((ExternalInfluenceSpec{InfluenceKind::error, 1, {0.6}, 1.6}.validate()), InvalidArgument);
    CHECK_THROWS_AS((ExternalInfluenceSpec{InfluenceKind::exogenous, 2, {0.6, 0.6}, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((ExternalInfluenceSpec{InfluenceKind::error, 2, {0.6}, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((ExternalInfluenceSpec{InfluenceKind::error, 0, {}, 1.0}.validate()), InvalidArgument);
}

TEST_CASE("generated models satisfy the structural invariants") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto model = generate_model(15, 20 + s % 10, 1 + s % 7, s);
        CHECK_NOTHROW(model.validate());
        CHECK(!model.exogenous_set.empty());
        Eigen::MatrixXd permuted(15, 15);
        for (Eigen::Index a = 0; a < 15; ++a)
            for (Eigen::Index b = 0; b < 15; ++b)
                permuted(a, b) = model.b_matrix(static_cast<Eigen::Index>(model.topo_order[a]),
                                                static_cast<Eigen::Index>(model.topo_order[b]));
        CHECK(permuted.triangularView<Eigen::Upper>().toDenseMatrix().isZero(0.0));
        IndexSet zero_rows;
        for (Eigen::Index i = 0; i < 15; ++i)
            if (model.b_matrix.row(i).isZero(0.0)) zero_rows.push_back(static_cast<std::size_t>(i));
        CHECK(zero_rows == model.exogenous_set);
        for (std::size_t i = 0; i < 15; ++i) {
            const auto& spec = model.influence_specs[i];
            CHECK_NOTHROW(spec.validate());
            const bool exo = std::binary_search(zero_rows.begin(), zero_rows.end(), i);
            CHECK((spec.kind == InfluenceKind::exogenous) == exo);
            CHECK(spec.h == (exo ? 1 : model.h));
        }
    }
}

TEST_CASE("rescaled rows reproduce the drawn parent-contribution std") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto model = generate_model(20, 30, 3, 100 + s);
        const Eigen::MatrixXd sigma = oracle::dense_covariance(model);
        for (Eigen::Index i = 0; i < 20; ++i) {
            const Eigen::VectorXd b = model.b_matrix.row(i).transpose();
            const double s_par = std::sqrt(b.dot(sigma * b));
            CHECK(std::abs(s_par - model.parent_std[static_cast<std::size_t>(i)]) < 1e-9);
            if (!b.isZero(0.0)) {
                CHECK(model.parent_std[static_cast<std::size_t>(i)] >= 0.5);
                CHECK(model.parent_std[static_cast<std::size_t>(i)] <= 1.5);
            }
        }
    }
}

TEST_CASE("single-parent chain scales by the parent's std") {
    Dag dag;
    dag.p = 2;
    dag.topo_order = {0, 1};
    dag.edges = {{0, 1}};
    const auto model = assign_coefficients(dag, 4, 12);
    const double parent_sd = model.influence_specs[0].target_std;
    CHECK(std::abs(std::abs(model.b_matrix(1, 0)) * parent_sd - model.parent_std[1]) < 1e-12);

    Dag empty;
    empty.p = 4;
    empty.topo_order = {2, 0, 3, 1};
    const auto m0 = assign_coefficients(empty, 3, 1);
    CHECK(m0.b_matrix.isZero(0.0));
    const Eigen::MatrixXd sigma = implied_covariance(m0);
    CHECK(Eigen::MatrixXd(sigma.diagonal().asDiagonal()) == sigma);
}

TEST_CASE("implied covariance matches the dense formula and a large sample") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto model = generate_model(10, 15, 3, 200 + s);
        const Eigen::MatrixXd sigma = implied_covariance(model);
        CHECK((sigma - oracle::dense_covariance(model)).cwiseAbs().maxCoeff() < 1e-10);
        if (s < 3) {
            const auto sample = sample_dataset(model, 100'000, s);
            const Eigen::MatrixXd emp = sample_covariance(sample.data.values());
            CHECK((emp - sigma).norm() / sigma.norm() < 0.05);
        }
    }
}

TEST_CASE("forward substitution matches a dense solve") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto model = generate_model(10, 18, 2, 300 + s);
        const auto sample = sample_dataset(model, 200, s);
        const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(10, 10) - model.b_matrix;
        const Eigen::MatrixXd solved = a.fullPivLu().solve(sample.external_influences.transpose()).transpose();
        CHECK((solved - sample.data.values()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(sample.exogenous_set == model.exogenous_set);
        for (VariableIndex i : model.exogenous_set)
            CHECK(sample.data.values().col(static_cast<Eigen::Index>(i)) ==
                  sample.external_influences.col(static_cast<Eigen::Index>(i)));
    }
}

TEST_CASE("no edges: data equals the influence draws") {
    const auto model = generate_model(6, 0, 5, 9);
    const auto sample = sample_dataset(model, 300, 10);
    CHECK(sample.data.values() == sample.external_influences);
    CHECK(sample.exogenous_set.size() == 6);
}

TEST_CASE("worked three-variable model variances") {
    const std::vector<ExternalInfluenceSpec> gaussian(3, ExternalInfluenceSpec{InfluenceKind::exogenous, 1, {1.0}, 1.0});
    auto specs = gaussian;
    specs[1].kind = specs[2].kind = InfluenceKind::error;
    const auto model = model_from_coefficients(
        3, {{Edge{0, 1}, 1.5}, {Edge{0, 2}, 0.8}, {Edge{1, 2}, -1.3}}, specs, 0);
    CHECK(model.exogenous_set == IndexSet{0});
    const Eigen::MatrixXd sigma = implied_covariance(model);
    CHECK(sigma(1, 1) == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(sigma(2, 2) == doctest::Approx(4.0125).epsilon(1e-14));
    const auto sample = sample_dataset(model, 1'000'000, 2);
    const Eigen::MatrixXd emp = sample_covariance(sample.data.values());
    CHECK(std::abs(emp(1, 1) / 3.25 - 1.0) < 0.02);
    CHECK(std::abs(emp(2, 2) / 4.0125 - 1.0) < 0.02);
}

TEST_CASE("seeded generation is byte-identical") {
    const auto a = generate_model(40, 50, 5, 77), b = generate_model(40, 50, 5, 77);
    CHECK(serialize_model(a) == serialize_model(b));
    CHECK(a == b);
    CHECK(serialize_model(generate_model(40, 50, 5, 78)) != serialize_model(a));
    const auto da = sample_dataset(a, 100, 3), db = sample_dataset(b, 100, 3);
    CHECK(da.data == db.data);
    // h only changes the influence specs, never the structure
    const auto c = generate_model(40, 50, 1, 77);
    CHECK(c.topo_order == a.topo_order);
    CHECK(c.exogenous_set == a.exogenous_set);
}

TEST_CASE("model serialization round trips") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto model = generate_model(12, 16, 1 + s, 400 + s);
        const std::string text = serialize_model(model);
        CHECK(text.rfind("eggfinder-causal-model v1\n", 0) == 0);
        const auto parsed = parse_model(text);
        CHECK(parsed == model);
        CHECK(serialize_model(parsed) == text);
    }
}

TEST_CASE("parse_model rejects malformed text") {
    const std::string good = serialize_model(generate_model(4, 3, 2, 1));
    CHECK_THROWS_AS(parse_model(""), ParseError);
    CHECK_THROWS_AS(parse_model("eggfinder-causal-model v9\n"), ParseError);
    CHECK_THROWS_AS(parse_model(good.substr(0, good.size() / 2)), ParseError);
    std::string broken = good;
    broken.replace(broken.find("\np "), 3, "\np x");
    CHECK_THROWS_AS(parse_model(broken), ParseError);
}
