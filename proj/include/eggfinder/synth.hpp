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
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eggfinder/data_matrix.hpp"
#include "eggfinder/seeding.hpp"

/// Ground-truth linear non-Gaussian acyclic models and sampling from them.
namespace eggfinder::synth {

struct Edge {
    VariableIndex parent = 0;
    VariableIndex child = 0;

    auto operator<=>(const Edge&) const = default;
};

struct Dag {
    std::size_t p = 0;
    std::vector<VariableIndex> topo_order;
    std::vector<Edge> edges;  // sorted

    IndexSet sources() const;
};

/// Uniform random topological order, then `edge_count` distinct forward pairs drawn uniformly
/// without replacement. Throws TooManyEdges when edge_count > p(p-1)/2.
Dag random_dag(std::size_t p, std::size_t edge_count, std::uint64_t seed);

/// Exact expected number of parentless nodes under random_dag(p, edge_count, .).
double expected_exogenous_count(std::size_t p, std::size_t edge_count);

/// Edge count whose expected_exogenous_count is closest to `target`.
std::size_t edges_for_expected_exogenous(std::size_t p, double target);

enum class InfluenceKind { exogenous, error };

/// Sum of h terms sign(z)|z|^q, each scaled to unit variance, rescaled to target_std.
struct ExternalInfluenceSpec {
    InfluenceKind kind = InfluenceKind::exogenous;
    std::size_t h = 1;
    std::vector<double> exponents;
    double target_std = 1.0;

    /// Throws InvalidArgument if the spec breaks its ranges.
    void validate() const;
    bool operator==(const ExternalInfluenceSpec&) const = default;
};

struct CausalModel {
    std::size_t p = 0;
    /// b_matrix(i, j) is the effect of x_j on x_i.
    Eigen::MatrixXd b_matrix;
    std::vector<VariableIndex> topo_order;
    std::vector<ExternalInfluenceSpec> influence_specs;
    IndexSet exogenous_set;
    /// Standard deviation of each variable's parent contribution (0 for exogenous variables).
    std::vector<double> parent_std;
    std::uint64_t seed = 0;
    std::size_t h = 1;
    std::string coefficient_rule;

    IndexSet parents(VariableIndex i) const;
    /// Throws InvalidArgument if any structural invariant fails.
    void validate() const;
    bool operator==(const CausalModel& other) const;
};

inline constexpr const char* kDefaultCoefficientRule =
    "provisional b ~ U([-1,-0.1] u [0.1,1]); rows rescaled so parent-contribution std ~ U[0.5,1.5]";

/// E|z|^(2q) for standard normal z: 2^q Gamma(q + 1/2) / sqrt(pi).
double transform_second_moment(double q);

/// Draws exponents and target std for every variable: exogenous (no parents) get one term,
/// errors get h. Exponent and std draws for a variable come from the variable's own stream.
std::vector<ExternalInfluenceSpec> draw_influence_specs(const Dag& dag, std::size_t h, std::uint64_t seed);

/// Draws coefficients along the topological order, rescaling each row so the parent
/// contribution has a std drawn from [0.5, 1.5], tracking the implied covariance exactly.
CausalModel assign_coefficients(const Dag& dag, std::size_t h, std::uint64_t seed);

/// random_dag + assign_coefficients on substreams of `seed`.
CausalModel generate_model(std::size_t p, std::size_t edge_count, std::size_t h, std::uint64_t seed);

/// Builds a model from explicit coefficients (triplets of child, parent, value) and specs.
/// The topological order is derived; exogenous_set is the zero-row set.
CausalModel model_from_coefficients(std::size_t p, const std::vector<std::pair<Edge, double>>& coefficients,
                                    std::vector<ExternalInfluenceSpec> specs, std::uint64_t seed = 0);

/// Implied covariance of x, propagated along the topological order.
Eigen::MatrixXd implied_covariance(const CausalModel& model);

std::vector<double> sample_external_influence(const ExternalInfluenceSpec& spec, std::size_t n, Rng& rng);
std::vector<double> sample_external_influence(const ExternalInfluenceSpec& spec, std::size_t n,
                                              std::uint64_t seed);

struct SampledDataset {
    DataMatrix data;
    Eigen::MatrixXd external_influences;
    IndexSet exogenous_set;
};

/// x = Bx + e by forward substitution in topological order. Exogenous columns are copies of
/// their influence draws. Variable i's influence uses stream (seed, i).
SampledDataset sample_dataset(const CausalModel& model, std::size_t n, std::uint64_t seed);

/// Versioned line-oriented text format (layout documented in synth.cpp).
std::string serialize_model(const CausalModel& model);
/// Throws ParseError with the offending line.
CausalModel parse_model(std::string_view text);

}  // namespace eggfinder::synth
