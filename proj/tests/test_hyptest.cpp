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
#include <limits>
#include <random>

#include "eggfinder/errors.hpp"
#include "eggfinder/hyptest.hpp"
#include "support/oracles.hpp"

using namespace eggfinder;
using namespace eggfinder::hyptest;

namespace {

std::vector<double> random_p_values(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(0, 50);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> style(0, 3);
    std::vector<double> p(static_cast<std::size_t>(len(rng)));
    for (auto& x : p) {
        switch (style(rng)) {
            case 0: x = u(rng); break;
            case 1: x = u(rng) * 0.05; break;
            case 2: x = std::round(u(rng) * 20.0) / 400.0; break;  // ties on the BH grid
            default: x = std::pow(u(rng), 4.0); break;
        }
    }
    return p;
}

}  // namespace

TEST_CASE("correlation_test on perfect and zero correlation") {
    std::vector<double> x{1, 4, 2, 8, 5, 7, 3, 9, 6, 10};
    const auto same = correlation_test(x, x);
    CHECK(same.r == 1.0);
    CHECK(same.p_value == 0.0);
    CHECK(same.dof == 8);

    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = 3.0 - 2.0 * x[i];
    const auto anti = correlation_test(x, neg);
    CHECK(anti.r == -1.0);
    CHECK(anti.p_value == 0.0);

    // y orthogonalized against x
    auto a = oracle::normal_draws(20, 3);
    auto b = oracle::normal_draws(20, 4);
    const double ma = oracle::sample_mean(a), mb = oracle::sample_mean(b);
    double sab = 0, saa = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
    }
    for (std::size_t i = 0; i < a.size(); ++i) b[i] -= sab / saa * (a[i] - ma);
    const auto zero = correlation_test(a, b);
    CHECK(std::abs(zero.r) < 1e-14);
    CHECK(std::abs(zero.t_statistic) < 1e-13);
    CHECK(zero.p_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Student-t tail matches the frozen value at r = 0.5, n = 27") {
    const double t = 0.5 * std::sqrt(25.0 / 0.75);
    CHECK(t == doctest::Approx(2.886751345948129).epsilon(1e-14));
    // frozen from a 30-digit incomplete beta evaluation
    const double frozen = 0.007912738358005816;
    CHECK(std::abs(student_t_two_sided_p(t, 25) - frozen) / frozen < 1e-10);
    CHECK(std::abs(oracle::t_two_sided_by_quadrature(t, 25) - frozen) / frozen < 1e-9);
}

TEST_CASE("Student-t tail agrees with quadrature over a grid") {
    for (double dof : {1.0, 2.0, 3.5, 8.0, 25.0, 198.0}) {
        for (double t : {0.0, 0.3, 1.0, 2.0, 4.5, 9.0}) {
            const double p = student_t_two_sided_p(t, dof);
            const double ref = oracle::t_two_sided_by_quadrature(t, dof);
            CHECK(std::abs(p - ref) <= 1e-9 * std::max(ref, 1e-300) + 1e-15);
            CHECK(student_t_two_sided_p(-t, dof) == p);
        }
    }
    CHECK(student_t_two_sided_p(std::numeric_limits<double>::infinity(), 5) == 0.0);
}

TEST_CASE("correlation_test with an exact sample correlation of 0.5") {
    // y = 0.5 x + sqrt(0.75) w with w orthogonal to x and equal norm gives r = 0.5 exactly
    auto x = oracle::normal_draws(27, 8);
    auto w = oracle::normal_draws(27, 9);
    const double mx = oracle::sample_mean(x), mw = oracle::sample_mean(w);
    for (auto& v : x) v -= mx;
    for (auto& v : w) v -= mw;
    double xw = 0, xx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) xw += x[i] * w[i], xx += x[i] * x[i];
    for (std::size_t i = 0; i < x.size(); ++i) w[i] -= xw / xx * x[i];
    double ww = 0;
    for (double v : w) ww += v * v;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 0.5 * x[i] + std::sqrt(0.75) * w[i] * std::sqrt(xx / ww);
    const auto res = correlation_test(x, y, 3, 7);
    CHECK(res.variable_a == 3);
    CHECK(res.variable_b == 7);
    CHECK(res.r == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.t_statistic == doctest::Approx(2.886751345948129).epsilon(1e-10));
    CHECK(res.p_value == doctest::Approx(0.007912738358005816).epsilon(1e-9));
}

TEST_CASE("correlation_test is symmetric and bounded") {
    for (int rep = 0; rep < 200; ++rep) {
        const auto a = oracle::normal_draws(5 + rep % 40, 2 * rep);
        auto b = oracle::laplace_draws(a.size(), 2 * rep + 1);
        for (std::size_t i = 0; i < a.size(); ++i) b[i] += (rep % 5) * 0.3 * a[i];
        const auto ab = correlation_test(a, b);
        const auto ba = correlation_test(b, a);
        CHECK(ab.r == ba.r);
        CHECK(ab.t_statistic == ba.t_statistic);
        CHECK(ab.p_value == ba.p_value);
        CHECK(std::abs(ab.r) <= 1.0);
        CHECK(ab.p_value >= 0.0);
        CHECK(ab.p_value <= 1.0);
        CHECK(ab.dof == a.size() - 2);
    }
}

TEST_CASE("correlation p-value is nonincreasing in |t|") {
    double previous = 1.0;
    for (double t = 0.0; t < 12.0; t += 0.05) {
        const double p = student_t_two_sided_p(t, 7);
        CHECK(p <= previous);
        previous = p;
    }
}

TEST_CASE("correlation_test rejects bad input") {
    CHECK_THROWS_AS(correlation_test(std::vector<double>{1, 2}, std::vector<double>{2, 1}), TooFewObservations);
    CHECK_THROWS_AS(correlation_test(std::vector<double>{1, 2, 3}, std::vector<double>{2, 2, 2}), DegenerateSeries);
    CHECK_THROWS_AS(correlation_test(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), InvalidArgument);
}

TEST_CASE("correlation p-values are uniform under independence") {
    const std::size_t pairs = 10'000, n = 50;
    std::mt19937_64 rng(424242);
    std::normal_distribution<double> z;
    std::vector<double> p(pairs), x(n), y(n);
    for (auto& pv : p) {
        for (std::size_t i = 0; i < n; ++i) x[i] = z(rng), y[i] = z(rng);
        pv = correlation_test(x, y).p_value;
    }
    std::sort(p.begin(), p.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        ks = std::max(ks, std::abs(p[i] - static_cast<double>(i) / pairs));
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / pairs - p[i]));
    }
    CHECK(ks < 0.03);
}

TEST_CASE("bh_fdr worked examples") {
    const auto empty = bh_fdr(std::vector<double>{}, 0.05);
    CHECK(empty.rejected.empty());
    CHECK(!empty.threshold_index);
    CHECK(empty.rejected_count() == 0);

    const auto all = bh_fdr(std::vector<double>{0.01, 0.02, 0.03, 0.04, 0.05}, 0.05);
    CHECK(all.rejected == std::vector<bool>{true, true, true, true, true});
    CHECK(all.threshold_index == 5);

    const auto one = bh_fdr(std::vector<double>{0.9, 0.001, 0.9, 0.9}, 0.05);
    CHECK(one.rejected == std::vector<bool>{false, true, false, false});
    CHECK(one.threshold_index == 1);

    const auto zero = bh_fdr(std::vector<double>{0.0, 0.04, 0.3}, 0.05);
    CHECK(zero.rejected == std::vector<bool>{true, false, false});
}

TEST_CASE("bh_fdr equals the brute-force reference") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 1000; ++rep) {
        const auto p = random_p_values(rng);
        for (double q : {0.01, 0.05, 0.2}) {
            const auto d = bh_fdr(p, q);
            CHECK(d.rejected == oracle::bh_bruteforce(p, q));
            CHECK(d.p_values == p);
            std::size_t count = 0;
            for (bool r : d.rejected) count += r;
            CHECK(d.rejected_count() == count);
        }
    }
}

TEST_CASE("bh_fdr at extreme levels") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 0.999);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> p(1 + rep % 30);
        for (auto& x : p) x = u(rng);
        const auto d = bh_fdr(p, 0.999999);
        CHECK(std::all_of(d.rejected.begin(), d.rejected.end(), [](bool r) { return r; }));
        for (auto& x : p) x = 1e-11 + u(rng) * 0.5;
        const auto none = bh_fdr(p, 1e-12);
        CHECK(std::none_of(none.rejected.begin(), none.rejected.end(), [](bool r) { return r; }));
    }
}

TEST_CASE("lowering a p-value never shrinks the rejected set") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        auto p = random_p_values(rng);
        if (p.empty()) continue;
        const auto before = bh_fdr(p, 0.05);
        std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
        p[pick(rng)] *= u(rng);
        const auto after = bh_fdr(p, 0.05);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (before.rejected[i]) CHECK(after.rejected[i]);
    }
}

TEST_CASE("bh_fdr rejects invalid input") {
    CHECK_THROWS_AS(bh_fdr(std::vector<double>{0.1, 1.5}, 0.05), InvalidPValue);
    CHECK_THROWS_AS(bh_fdr(std::vector<double>{-0.01}, 0.05), InvalidPValue);
    CHECK_THROWS_AS(bh_fdr(std::vector<double>{std::nan("")}, 0.05), InvalidPValue);
    CHECK_THROWS_AS(bh_fdr(std::vector<double>{0.1}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(bh_fdr(std::vector<double>{0.1}, 1.0), InvalidArgument);
}

TEST_CASE("welch_t_test examples") {
    const std::vector<double> a{0, 0, 1, 1}, b{10, 10, 11, 11};
    const auto r = welch_t_test(a, b);
    CHECK(r.t_statistic == doctest::Approx(-10.0 / std::sqrt(2.0 / 6.0 * 0.5)).epsilon(1e-12));
    CHECK(r.dof == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(r.p_value < 1e-4);
    CHECK(r.p_value == doctest::Approx(3.044423064042542e-07).epsilon(1e-9));
    const auto swapped = welch_t_test(b, a);
    CHECK(swapped.p_value == r.p_value);
    CHECK(swapped.t_statistic == -r.t_statistic);

    const std::vector<double> c{1.5, 2.5, 4.0};
    const auto same = welch_t_test(c, c);
    CHECK(same.t_statistic == 0.0);
    CHECK(same.p_value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("welch_t_test rejects bad groups") {
    CHECK_THROWS_AS(welch_t_test(std::vector<double>{1.0}, std::vector<double>{1, 2}), TooFewObservations);
    CHECK_THROWS_AS(welch_t_test(std::vector<double>{1, 1}, std::vector<double>{1, 1}), DegenerateSeries);
}

TEST_CASE("group_mean_center") {
    Eigen::MatrixXd m(4, 2);
    m << 1, 2, 1, 4, 5, 6, 5, 10;
    const DataMatrix data(m, {"u", "v"});
    const std::vector<std::string> labels{"a", "a", "b", "b"};
    const auto c = group_mean_center(data, labels);
    CHECK(c.names() == data.names());
    for (int i = 0; i < 4; ++i) CHECK(c.values()(i, 0) == 0.0);
    CHECK(c.values()(0, 1) == -1.0);
    CHECK(c.values()(3, 1) == 2.0);

    const std::vector<std::string> single(4, "g");
    const auto s = group_mean_center(data, single);
    CHECK(s.values()(0, 0) == -2.0);
    CHECK(s.values()(2, 0) == 2.0);

    CHECK_THROWS_AS(group_mean_center(data, std::vector<std::string>{"a", "b"}), LabelLengthMismatch);
}

TEST_CASE("group_mean_center zeroes group means, is idempotent and ignores group shifts") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z(5.0, 3.0);
    std::uniform_int_distribution<int> g(0, 2);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::MatrixXd m(30, 4);
        std::vector<std::string> labels(30);
        for (int i = 0; i < 30; ++i) {
            labels[i] = std::string(1, static_cast<char>('a' + (i < 3 ? i : g(rng))));
            for (int j = 0; j < 4; ++j) m(i, j) = z(rng);
        }
        const DataMatrix data(m);
        const auto once = group_mean_center(data, labels);
        const auto twice = group_mean_center(once, labels);
        CHECK((once.values() - twice.values()).cwiseAbs().maxCoeff() < 1e-10);

        Eigen::MatrixXd shifted = m;
        for (int i = 0; i < 30; ++i) shifted.row(i).array() += 100.0 * (labels[i][0] - 'a');
        const auto cs = group_mean_center(DataMatrix(shifted), labels);
        CHECK((cs.values() - once.values()).cwiseAbs().maxCoeff() < 1e-10);

        for (char label : {'a', 'b', 'c'}) {
            for (int j = 0; j < 4; ++j) {
                double sum = 0;
                for (int i = 0; i < 30; ++i)
                    if (labels[i][0] == label) sum += once.values()(i, j);
                CHECK(std::abs(sum) < 1e-10);
            }
        }
    }
}

TEST_CASE("rank_features_by_welch sorts by p and puts untestable columns last") {
    Eigen::MatrixXd m(6, 3);
    m << 0, 1, 7,  //
        0.2, 2, 7,  //
        0.1, 3, 7,  //
        5, 1.5, 7,  //
        5.3, 2.5, 7,  //
        5.1, 3.5, 7;
    const DataMatrix data(m);
    const std::vector<std::string> labels{"ctl", "ctl", "ctl", "trt", "trt", "trt"};
    const auto ranked = rank_features_by_welch(data, labels, "ctl", "trt");
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].index == 0);
    CHECK(ranked[1].index == 1);
    CHECK(ranked[2].index == 2);
    CHECK(ranked[2].degenerate);
    CHECK(!ranked[0].degenerate);
    CHECK(ranked[0].p_value < ranked[1].p_value);
}
