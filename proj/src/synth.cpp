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

#include "eggfinder/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_set>

#include "eggfinder/errors.hpp"
#include "eggfinder/text_io.hpp"

namespace eggfinder::synth {

namespace {

constexpr double kExpLowMin = 0.5, kExpLowMax = 0.8;
constexpr double kExpHighMin = 1.2, kExpHighMax = 2.0;
constexpr double kStdMin = 0.5, kStdMax = 1.5;
constexpr double kCoefMin = 0.1, kCoefMax = 1.0;
constexpr int kMaxRedraws = 100;

double draw_exponent(Rng& rng) {
    std::bernoulli_distribution sub(0.5);
    if (sub(rng)) return std::uniform_real_distribution<double>(kExpLowMin, kExpLowMax)(rng);
    return std::uniform_real_distribution<double>(kExpHighMin, kExpHighMax)(rng);
}

double draw_std(Rng& rng) { return std::uniform_real_distribution<double>(kStdMin, kStdMax)(rng); }

double draw_coefficient(Rng& rng) {
    const double magnitude = std::uniform_real_distribution<double>(kCoefMin, kCoefMax)(rng);
    return std::bernoulli_distribution(0.5)(rng) ? magnitude : -magnitude;
}

bool exponent_in_range(double q) {
    return (q >= kExpLowMin && q <= kExpLowMax) || (q >= kExpHighMin && q <= kExpHighMax);
}

std::vector<IndexSet> parent_lists(const Eigen::MatrixXd& b) {
    std::vector<IndexSet> parents(static_cast<std::size_t>(b.rows()));
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            if (b(i, j) != 0.0) parents[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
    return parents;
}

/// Fills row/column i of sigma from parents already in sigma; returns the parent-contribution variance.
double propagate(Eigen::MatrixXd& sigma, const Eigen::MatrixXd& b, VariableIndex i, const IndexSet& parents,
                 double influence_variance) {
    const auto ii = static_cast<Eigen::Index>(i);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(sigma.cols());
    for (VariableIndex j : parents) row += b(ii, static_cast<Eigen::Index>(j)) * sigma.row(static_cast<Eigen::Index>(j));
    double parent_var = 0.0;
    for (VariableIndex j : parents) parent_var += b(ii, static_cast<Eigen::Index>(j)) * row(static_cast<Eigen::Index>(j));
    sigma.row(ii) = row;
    sigma.col(ii) = row.transpose();
    sigma(ii, ii) = parent_var + influence_variance;
    return parent_var;
}

}  // namespace

IndexSet Dag::sources() const {
    std::vector<bool> has_parent(p, false);
    for (const auto& e : edges) has_parent[e.child] = true;
    IndexSet out;
    for (VariableIndex i = 0; i < p; ++i)
        if (!has_parent[i]) out.push_back(i);
    return out;
}

Dag random_dag(std::size_t p, std::size_t edge_count, std::uint64_t seed) {
    const std::uint64_t pairs = p < 2 ? 0 : static_cast<std::uint64_t>(p) * (p - 1) / 2;
    if (edge_count > pairs)
        throw TooManyEdges("random_dag: " + std::to_string(edge_count) + " edges requested but only " +
                           std::to_string(pairs) + " are possible on " + std::to_string(p) + " nodes");
    Rng rng(seed);
    Dag dag;
    dag.p = p;
    dag.topo_order.resize(p);
    for (std::size_t i = 0; i < p; ++i) dag.topo_order[i] = i;
    for (std::size_t i = p; i > 1; --i) {
        const auto k = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        std::swap(dag.topo_order[i - 1], dag.topo_order[k]);
    }

    // Floyd's sampling of edge_count distinct pair indices in [0, pairs).
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(edge_count * 2);
    for (std::uint64_t j = pairs - edge_count; j < pairs; ++j) {
        const auto t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> picked(chosen.begin(), chosen.end());
    std::sort(picked.begin(), picked.end());

    // Pair index k = later*(later-1)/2 + earlier, positions in topo order with earlier < later.
    for (std::uint64_t k : picked) {
        auto later = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
        while (later * (later - 1) / 2 > k) --later;
        while ((later + 1) * later / 2 <= k) ++later;
        const std::uint64_t earlier = k - later * (later - 1) / 2;
        dag.edges.push_back({dag.topo_order[earlier], dag.topo_order[later]});
    }
    std::sort(dag.edges.begin(), dag.edges.end());
    return dag;
}

double expected_exogenous_count(std::size_t p, std::size_t edge_count) {
    const double pairs = p < 2 ? 0.0 : static_cast<double>(p) * static_cast<double>(p - 1) / 2.0;
    const double e = static_cast<double>(edge_count);
    // The node at position a is a source iff none of its a incoming pairs is drawn:
    // C(M - a, E) / C(M, E) = prod_{t < a} (M - E - t) / (M - t).
    double total = 0.0;
    double prob = 1.0;
    for (std::size_t a = 0; a < p; ++a) {
        total += prob;
        const double t = static_cast<double>(a);
        prob *= std::max(0.0, pairs - e - t) / (pairs - t);
    }
    return total;
}

std::size_t edges_for_expected_exogenous(std::size_t p, double target) {
    std::size_t lo = 0;
    std::size_t hi = p < 2 ? 0 : p * (p - 1) / 2;
    // expected count is nonincreasing in edge_count
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (expected_exogenous_count(p, mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    const double dlo = std::abs(expected_exogenous_count(p, lo) - target);
    const double dhi = std::abs(expected_exogenous_count(p, hi) - target);
    return dhi < dlo ? hi : lo;
}

void ExternalInfluenceSpec::validate() const {
    if (h < 1) throw InvalidArgument("influence spec: h must be at least 1");
    if (kind == InfluenceKind::exogenous && h != 1) throw InvalidArgument("influence spec: exogenous requires h = 1");
    if (exponents.size() != h) throw InvalidArgument("influence spec: need one exponent per term");
    for (double q : exponents)
        if (!exponent_in_range(q)) throw InvalidArgument("influence spec: exponent " + format_double(q) + " out of range");
    if (!(target_std >= kStdMin && target_std <= kStdMax))
        throw InvalidArgument("influence spec: target std " + format_double(target_std) + " outside [0.5, 1.5]");
}

IndexSet CausalModel::parents(VariableIndex i) const {
    IndexSet out;
    for (Eigen::Index j = 0; j < b_matrix.cols(); ++j)
        if (b_matrix(static_cast<Eigen::Index>(i), j) != 0.0) out.push_back(static_cast<std::size_t>(j));
    return out;
}

void CausalModel::validate() const {
    const auto pi = static_cast<Eigen::Index>(p);
    if (b_matrix.rows() != pi || b_matrix.cols() != pi) throw InvalidArgument("model: b_matrix must be p x p");
    if (topo_order.size() != p || influence_specs.size() != p || parent_std.size() != p)
        throw InvalidArgument("model: per-variable fields must have length p");
    std::vector<std::size_t> position(p, p);
    for (std::size_t k = 0; k < p; ++k) {
        if (topo_order[k] >= p || position[topo_order[k]] != p)
            throw InvalidArgument("model: topo_order is not a permutation");
        position[topo_order[k]] = k;
    }
    IndexSet zero_rows;
    for (std::size_t i = 0; i < p; ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < p; ++j) {
            if (b_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == 0.0) continue;
            zero = false;
            if (position[j] >= position[i]) throw InvalidArgument("model: b_matrix violates topo_order");
        }
        if (zero) zero_rows.push_back(i);
        influence_specs[i].validate();
        const bool exo = influence_specs[i].kind == InfluenceKind::exogenous;
        if (exo != zero) throw InvalidArgument("model: influence kind disagrees with graph at variable " + std::to_string(i));
    }
    if (zero_rows.empty()) throw InvalidArgument("model: no exogenous variable");
    if (zero_rows != exogenous_set) throw InvalidArgument("model: exogenous_set differs from zero rows of b_matrix");
}

bool CausalModel::operator==(const CausalModel& o) const {
    return p == o.p && b_matrix.rows() == o.b_matrix.rows() && b_matrix.cols() == o.b_matrix.cols() &&
           b_matrix == o.b_matrix && topo_order == o.topo_order && influence_specs == o.influence_specs &&
           exogenous_set == o.exogenous_set && parent_std == o.parent_std && seed == o.seed && h == o.h &&
           coefficient_rule == o.coefficient_rule;
}

double transform_second_moment(double q) {
    return std::pow(2.0, q) * std::tgamma(q + 0.5) / std::sqrt(std::numbers::pi);
}

std::vector<ExternalInfluenceSpec> draw_influence_specs(const Dag& dag, std::size_t h, std::uint64_t seed) {
    if (h < 1) throw InvalidArgument("h must be at least 1");
    std::vector<bool> has_parent(dag.p, false);
    for (const auto& e : dag.edges) has_parent[e.child] = true;
    std::vector<ExternalInfluenceSpec> specs(dag.p);
    for (VariableIndex i = 0; i < dag.p; ++i) {
        Rng rng = make_rng(seed, "influence", i);
        auto& s = specs[i];
        s.kind = has_parent[i] ? InfluenceKind::error : InfluenceKind::exogenous;
        s.h = has_parent[i] ? h : 1;
        s.target_std = draw_std(rng);
        for (std::size_t t = 0; t < s.h; ++t) s.exponents.push_back(draw_exponent(rng));
    }
    return specs;
}

CausalModel assign_coefficients(const Dag& dag, std::size_t h, std::uint64_t seed) {
    CausalModel m;
    m.p = dag.p;
    m.seed = seed;
    m.h = h;
    m.coefficient_rule = kDefaultCoefficientRule;
    m.topo_order = dag.topo_order;
    m.influence_specs = draw_influence_specs(dag, h, seed);
    m.b_matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dag.p), static_cast<Eigen::Index>(dag.p));
    m.parent_std.assign(dag.p, 0.0);

    std::vector<IndexSet> parents(dag.p);
    for (const auto& e : dag.edges) parents[e.child].push_back(e.parent);

    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(m.b_matrix.rows(), m.b_matrix.cols());
    for (VariableIndex i : dag.topo_order) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double influence_var = m.influence_specs[i].target_std * m.influence_specs[i].target_std;
        if (parents[i].empty()) {
            sigma(ii, ii) = influence_var;
            continue;
        }
        Rng rng = make_rng(seed, "coefficients", i);
        double s_par = 0.0;
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRedraws)
                throw SingularParentContribution("assign_coefficients: parent contribution of variable " +
                                                 std::to_string(i) + " stayed zero after redraws");
            for (VariableIndex j : parents[i]) m.b_matrix(ii, static_cast<Eigen::Index>(j)) = draw_coefficient(rng);
            double var = 0.0;
            for (VariableIndex j : parents[i])
                for (VariableIndex k : parents[i])
                    var += m.b_matrix(ii, static_cast<Eigen::Index>(j)) * sigma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
                           m.b_matrix(ii, static_cast<Eigen::Index>(k));
            s_par = std::sqrt(std::max(var, 0.0));
            if (s_par > 1e-12) break;
        }
        const double target = draw_std(rng);
        for (VariableIndex j : parents[i]) m.b_matrix(ii, static_cast<Eigen::Index>(j)) *= target / s_par;
        m.parent_std[i] = target;
        propagate(sigma, m.b_matrix, i, parents[i], influence_var);
    }
    for (VariableIndex i = 0; i < dag.p; ++i)
        if (parents[i].empty()) m.exogenous_set.push_back(i);
    return m;
}

CausalModel generate_model(std::size_t p, std::size_t edge_count, std::size_t h, std::uint64_t seed) {
    const Dag dag = random_dag(p, edge_count, derive_seed(seed, "structure"));
    return assign_coefficients(dag, h, seed);
}

CausalModel model_from_coefficients(std::size_t p, const std::vector<std::pair<Edge, double>>& coefficients,
                                    std::vector<ExternalInfluenceSpec> specs, std::uint64_t seed) {
    CausalModel m;
    m.p = p;
    m.seed = seed;
    m.coefficient_rule = "explicit";
    m.b_matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (const auto& [edge, value] : coefficients) {
        if (edge.parent >= p || edge.child >= p || edge.parent == edge.child)
            throw InvalidArgument("model_from_coefficients: bad edge");
        m.b_matrix(static_cast<Eigen::Index>(edge.child), static_cast<Eigen::Index>(edge.parent)) = value;
    }
    const auto parents = parent_lists(m.b_matrix);

    // Kahn's algorithm, smallest ready index first.
    std::vector<std::size_t> indegree(p);
    std::vector<IndexSet> children(p);
    for (VariableIndex i = 0; i < p; ++i) {
        indegree[i] = parents[i].size();
        for (VariableIndex j : parents[i]) children[j].push_back(i);
    }
    std::priority_queue<VariableIndex, std::vector<VariableIndex>, std::greater<>> ready;
    for (VariableIndex i = 0; i < p; ++i)
        if (indegree[i] == 0) ready.push(i);
    while (!ready.empty()) {
        const VariableIndex v = ready.top();
        ready.pop();
        m.topo_order.push_back(v);
        for (VariableIndex c : children[v])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (m.topo_order.size() != p) throw InvalidArgument("model_from_coefficients: coefficients contain a cycle");

    if (specs.size() != p) throw InvalidArgument("model_from_coefficients: need one influence spec per variable");
    m.influence_specs = std::move(specs);
    m.h = 1;
    for (VariableIndex i = 0; i < p; ++i) {
        if (parents[i].empty()) m.exogenous_set.push_back(i);
        m.h = std::max(m.h, m.influence_specs[i].h);
    }
    const Eigen::MatrixXd sigma = implied_covariance(m);
    m.parent_std.assign(p, 0.0);
    for (VariableIndex i = 0; i < p; ++i) {
        const double var_e = m.influence_specs[i].target_std * m.influence_specs[i].target_std;
        const auto ii = static_cast<Eigen::Index>(i);
        m.parent_std[i] = parents[i].empty() ? 0.0 : std::sqrt(std::max(sigma(ii, ii) - var_e, 0.0));
    }
    return m;
}

Eigen::MatrixXd implied_covariance(const CausalModel& model) {
    const auto parents = parent_lists(model.b_matrix);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(model.b_matrix.rows(), model.b_matrix.cols());
    for (VariableIndex i : model.topo_order) {
        const double sd = model.influence_specs.at(i).target_std;
        propagate(sigma, model.b_matrix, i, parents[i], sd * sd);
    }
    return sigma;
}

std::vector<double> sample_external_influence(const ExternalInfluenceSpec& spec, std::size_t n, Rng& rng) {
    std::vector<double> sum(n, 0.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double q : spec.exponents) {
        const double scale = 1.0 / std::sqrt(transform_second_moment(q));
        for (std::size_t i = 0; i < n; ++i) {
            const double z = normal(rng);
            sum[i] += std::copysign(std::pow(std::abs(z), q), z) * scale;
        }
    }
    const double rescale = spec.target_std / std::sqrt(static_cast<double>(spec.exponents.size()));
    for (double& v : sum) v *= rescale;
    return sum;
}

std::vector<double> sample_external_influence(const ExternalInfluenceSpec& spec, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_external_influence(spec, n, rng);
}

SampledDataset sample_dataset(const CausalModel& model, std::size_t n, std::uint64_t seed) {
    const auto p = static_cast<Eigen::Index>(model.p);
    const auto rows = static_cast<Eigen::Index>(n);
    SampledDataset out;
    out.external_influences.resize(rows, p);
    for (VariableIndex i = 0; i < model.p; ++i) {
        Rng rng = make_rng(seed, "noise", i);
        const auto e = sample_external_influence(model.influence_specs[i], n, rng);
        out.external_influences.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(e.data(), rows);
    }
    Eigen::MatrixXd x(rows, p);
    for (VariableIndex i : model.topo_order) {
        const auto ii = static_cast<Eigen::Index>(i);
        x.col(ii) = out.external_influences.col(ii);
        for (Eigen::Index j = 0; j < p; ++j) {
            const double b = model.b_matrix(ii, j);
            if (b != 0.0) x.col(ii) += b * x.col(j);
        }
    }
    out.data = DataMatrix(std::move(x));
    out.exogenous_set = model.exogenous_set;
    return out;
}

// Layout, one record per line, fields separated by single spaces:
//   eggfinder-causal-model v1
//   p <p>
//   seed <u64>
//   h <h>
//   coefficient_rule <free text to end of line>
//   topo_order <p indices>
//   exogenous <indices>
//   parent_std <p reals>
//   coefficients <count>
//   b <child> <parent> <value>            (count lines, row-major order)
//   influences <p>
//   influence <index> <exogenous|error> <target_std> <h> <h exponents>
//   end
std::string serialize_model(const CausalModel& model) {
    std::ostringstream out;
    const auto list = [&out](const auto& xs) {
        for (const auto& x : xs) {
            out << ' ';
            if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>)
                out << format_double(x);
            else
                out << x;
        }
        out << '\n';
    };
    out << "eggfinder-causal-model v1\n";
    out << "p " << model.p << '\n';
    out << "seed " << model.seed << '\n';
    out << "h " << model.h << '\n';
    out << "coefficient_rule " << model.coefficient_rule << '\n';
    out << "topo_order";
    list(model.topo_order);
    out << "exogenous";
    list(model.exogenous_set);
    out << "parent_std";
    list(model.parent_std);
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < model.b_matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < model.b_matrix.cols(); ++j)
            if (model.b_matrix(i, j) != 0.0) ++count;
    out << "coefficients " << count << '\n';
    for (Eigen::Index i = 0; i < model.b_matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < model.b_matrix.cols(); ++j)
            if (model.b_matrix(i, j) != 0.0) out << "b " << i << ' ' << j << ' ' << format_double(model.b_matrix(i, j)) << '\n';
    out << "influences " << model.p << '\n';
    for (VariableIndex i = 0; i < model.p; ++i) {
        const auto& s = model.influence_specs[i];
        out << "influence " << i << ' ' << (s.kind == InfluenceKind::exogenous ? "exogenous" : "error") << ' '
            << format_double(s.target_std) << ' ' << s.h;
        list(s.exponents);
    }
    out << "end\n";
    return out.str();
}

namespace {

class ModelReader {
public:
    explicit ModelReader(std::string_view text) : lines_(split(text, '\n')) {}

    /// Next non-empty line split on spaces; the first token must equal `key`.
    std::vector<std::string_view> expect(std::string_view key) {
        while (pos_ < lines_.size() && trim(lines_[pos_]).empty()) ++pos_;
        if (pos_ >= lines_.size()) fail("unexpected end of file, expected '" + std::string(key) + "'");
        line_ = trim(lines_[pos_++]);
        std::vector<std::string_view> tokens;
        for (auto t : split(line_, ' '))
            if (!t.empty()) tokens.push_back(t);
        if (tokens.empty() || tokens[0] != key) fail("expected '" + std::string(key) + "'");
        return tokens;
    }

    std::string_view rest_after_key() const {
        const auto space = line_.find(' ');
        return space == std::string_view::npos ? std::string_view{} : trim(line_.substr(space + 1));
    }

    unsigned long long integer(std::string_view token) {
        auto v = parse_unsigned(token);
        if (!v) fail("bad integer '" + std::string(token) + "'");
        return *v;
    }

    double real(std::string_view token) {
        auto v = parse_double(token);
        if (!v) fail("bad number '" + std::string(token) + "'");
        return *v;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("model file line " + std::to_string(pos_) + ": " + what, pos_);
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
    std::string_view line_;
};

}  // namespace

CausalModel parse_model(std::string_view text) {
    ModelReader r(text);
    CausalModel m;
    auto header = r.expect("eggfinder-causal-model");
    if (header.size() != 2 || header[1] != "v1") r.fail("unsupported model format version");

    auto tok = r.expect("p");
    if (tok.size() != 2) r.fail("p takes one value");
    m.p = r.integer(tok[1]);
    tok = r.expect("seed");
    if (tok.size() != 2) r.fail("seed takes one value");
    m.seed = r.integer(tok[1]);
    tok = r.expect("h");
    if (tok.size() != 2) r.fail("h takes one value");
    m.h = r.integer(tok[1]);
    r.expect("coefficient_rule");
    m.coefficient_rule = std::string(r.rest_after_key());

    tok = r.expect("topo_order");
    if (tok.size() != m.p + 1) r.fail("topo_order needs p entries");
    for (std::size_t k = 1; k < tok.size(); ++k) m.topo_order.push_back(r.integer(tok[k]));
    tok = r.expect("exogenous");
    for (std::size_t k = 1; k < tok.size(); ++k) m.exogenous_set.push_back(r.integer(tok[k]));
    tok = r.expect("parent_std");
    if (tok.size() != m.p + 1) r.fail("parent_std needs p entries");
    for (std::size_t k = 1; k < tok.size(); ++k) m.parent_std.push_back(r.real(tok[k]));

    const auto pp = static_cast<Eigen::Index>(m.p);
    m.b_matrix = Eigen::MatrixXd::Zero(pp, pp);
    tok = r.expect("coefficients");
    if (tok.size() != 2) r.fail("coefficients takes one value");
    const auto count = r.integer(tok[1]);
    for (unsigned long long c = 0; c < count; ++c) {
        tok = r.expect("b");
        if (tok.size() != 4) r.fail("b takes child, parent, value");
        const auto i = r.integer(tok[1]);
        const auto j = r.integer(tok[2]);
        if (i >= m.p || j >= m.p) r.fail("coefficient index out of range");
        m.b_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r.real(tok[3]);
    }

    tok = r.expect("influences");
    if (tok.size() != 2 || r.integer(tok[1]) != m.p) r.fail("influences must list p specs");
    m.influence_specs.resize(m.p);
    for (std::size_t k = 0; k < m.p; ++k) {
        tok = r.expect("influence");
        if (tok.size() < 5) r.fail("influence needs index, kind, target_std, h, exponents");
        const auto i = r.integer(tok[1]);
        if (i != k) r.fail("influence specs must be listed in index order");
        auto& s = m.influence_specs[k];
        if (tok[2] == "exogenous")
            s.kind = InfluenceKind::exogenous;
        else if (tok[2] == "error")
            s.kind = InfluenceKind::error;
        else
            r.fail("unknown influence kind '" + std::string(tok[2]) + "'");
        s.target_std = r.real(tok[3]);
        s.h = r.integer(tok[4]);
        if (tok.size() != 5 + s.h) r.fail("influence needs h exponents");
        for (std::size_t t = 5; t < tok.size(); ++t) s.exponents.push_back(r.real(tok[t]));
    }
    r.expect("end");
    try {
        m.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
    return m;
}

}  // namespace eggfinder::synth
