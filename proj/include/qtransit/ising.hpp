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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qtransit/bits.hpp"
#include "qtransit/encoders.hpp"

namespace qtransit {

/// Diagonal cost operator H_C = sum h_i Z_i + sum_{i<j} J_ij Z_i Z_j + offset.
/// Spin convention: z_i = +1 for bit 0, -1 for bit 1.
struct IsingHamiltonian {
    int n = 0;
    std::vector<double> h;
    std::map<std::pair<int, int>, double> J;
    double offset = 0.0;

    IsingHamiltonian() = default;
    explicit IsingHamiltonian(int num_qubits) : n(num_qubits), h(static_cast<size_t>(num_qubits), 0.0) {}

    void add_field(int i, double v);
    void add_coupling(int i, int j, double v);

    double cost(Basis x) const;
    double cost(const std::string &bitstring) const;

    /// All 2^n diagonal entries, index = basis state.
    std::vector<double> energies() const;

    IsingHamiltonian scaled(double factor) const;
    /// Keeps every field and only the couplings between index-adjacent qubits.
    IsingHamiltonian nearest_neighbor() const;
    bool is_zero() const;

    nlohmann::json to_json() const;
    static IsingHamiltonian from_json(const nlohmann::json &j);
};

/// Transverse-field driver sum_i X_i with unit weights.
struct DriverHamiltonian {
    int n = 1;
};

/// Substitutes b_i = (1 - z_i) / 2. The Ising energy of every configuration
/// equals the Qubo cost of the matching bitstring.
IsingHamiltonian qubo_to_ising(const Qubo &q);

using FeasibilityFn = std::function<bool(Basis)>;

struct OracleResult {
    int n = 0;
    Basis best_bitstring = 0;
    double best_cost = 0.0;
    bool best_is_feasible = false;
    std::uint64_t feasible_count = 0;
    double min_feasible_cost = 0.0;    // +inf if nothing is feasible
    double min_infeasible_cost = 0.0;  // +inf if everything is feasible
    std::optional<std::vector<double>> cost_table;
};

inline constexpr int kBruteForceMaxQubits = 24;

/// Exhaustive enumeration. best_bitstring is the feasible minimizer when any
/// feasible bitstring exists (ties resolved toward the smaller index), else
/// the global minimizer. A null checker treats every bitstring as feasible.
OracleResult brute_force(const IsingHamiltonian &H, const FeasibilityFn &feasible = {}, bool keep_table = false);
OracleResult brute_force(const Qubo &q, const FeasibilityFn &feasible = {}, bool keep_table = false);

}  // namespace qtransit
