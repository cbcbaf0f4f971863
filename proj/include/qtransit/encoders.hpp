// Copyright 2026 The qtransit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qtransit/bits.hpp"

namespace qtransit {

using Matrix = std::vector<std::vector<double>>;

enum class ProblemKind { kTsp, kVrp, kFlp };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string &s);

/// Cities are numbered 1..n_cities in labels. With fixed_depot city 1 is
/// pinned to tour position 1.
struct TspInstance {
    int n_cities = 0;
    Matrix dist;
    bool fixed_depot = true;

    void validate() const;
};

/// Node 0 is the depot, nodes 1..n_nodes-1 are customers.
struct VrpInstance {
    int n_nodes = 0;
    Matrix weights;
    int fleet = 1;

    void validate() const;
};

struct FlpInstance {
    int n_customers = 0;
    int n_facilities = 0;
    std::vector<double> setup;  // f_j
    Matrix service;             // c_ij, customers x facilities

    void validate() const;
};

using Instance = std::variant<TspInstance, VrpInstance, FlpInstance>;

ProblemKind kind_of(const Instance &inst);

struct LinearConstraint {
    std::string name;
    std::vector<std::pair<int, double>> terms;
    double rhs = 0.0;

    double residual(Basis x) const;
};

/// Exact penalty x_var * (1 - x_guard) for the implication x_var <= x_guard.
struct ProductPenalty {
    std::string name;
    int var = 0;
    int guard = 0;

    bool violated(Basis x) const { return bit(x, var) == 1 && bit(x, guard) == 0; }
};

/// Constrained binary model before penalization. The objective is
/// offset + sum linear[i] x_i + sum quadratic[(i,j)] x_i x_j with i < j.
struct BinaryProgram {
    ProblemKind kind = ProblemKind::kTsp;
    int num_vars = 0;
    std::map<int, double> linear;
    std::map<std::pair<int, int>, double> quadratic;
    double offset = 0.0;
    std::vector<LinearConstraint> eq_constraints;
    std::vector<ProductPenalty> product_penalties;
    std::vector<std::string> var_labels;

    /// Sum of absolute pairwise cost coefficients of the source instance.
    double pairwise_cost_sum = 0.0;

    // Decoder-side structure.
    int tsp_cities = 0;
    bool tsp_fixed_depot = true;
    std::vector<std::pair<int, int>> vrp_edges;  // variable -> directed edge
    int vrp_nodes = 0;
    bool subtour_check = false;

    double objective(Basis x) const;
    /// Sum of squared equality residuals plus the number of violated products.
    double violation(Basis x) const;
    void add_quadratic(int i, int j, double v);
    void validate() const;
};

BinaryProgram encode_tsp(const TspInstance &inst);
BinaryProgram encode_vrp(const VrpInstance &inst);
BinaryProgram encode_flp(const FlpInstance &inst);
BinaryProgram encode(const Instance &inst);

/// Penalized, normalized QUBO. cost(x) = offset + sum coeffs[(i,j)] x_i x_j
/// over i <= j (diagonal entries are the linear terms).
struct Qubo {
    int num_vars = 0;
    std::map<std::pair<int, int>, double> coeffs;
    double offset = 0.0;
    double penalty_weight = 0.0;
    double norm_factor = 1.0;

    double cost(Basis x) const;
    double max_abs_coeff() const;
};

/// lambda = 2 * pairwise_cost_sum.
double penalty_weight(const BinaryProgram &bp);

/// Folds every constraint in as lambda * (a.x - b)^2 and every product
/// penalty as lambda * x (1 - y), then divides by the largest |coefficient|.
/// Throws std::invalid_argument if all coefficients vanish.
Qubo to_qubo(const BinaryProgram &bp);
Qubo to_qubo(const BinaryProgram &bp, double lambda);

struct FeasibilityReport {
    bool feasible = false;
    std::vector<std::string> violations;
    std::optional<double> objective;  // classical objective, feasible only
    std::vector<int> tour;            // TSP: city (1-based) per position
    std::vector<std::vector<int>> routes;  // VRP: depot-rooted node sequences
};

FeasibilityReport decode_and_check(const BinaryProgram &bp, Basis x);
FeasibilityReport decode_and_check(const BinaryProgram &bp, const std::string &bitstring);

/// Allocation-free feasibility test, equivalent to decode_and_check(...).feasible.
bool is_feasible(const BinaryProgram &bp, Basis x);

}  // namespace qtransit
