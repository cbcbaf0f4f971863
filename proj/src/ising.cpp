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

#include "qtransit/ising.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtransit {

void IsingHamiltonian::add_field(int i, double v) {
    if (i < 0 || i >= n) throw std::invalid_argument("ising: field index out of range");
    h[static_cast<size_t>(i)] += v;
}

void IsingHamiltonian::add_coupling(int i, int j, double v) {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
        throw std::invalid_argument("ising: invalid coupling indices");
    }
    J[{std::min(i, j), std::max(i, j)}] += v;
}

double IsingHamiltonian::cost(Basis x) const {
    double s = offset;
    for (int i = 0; i < n; i++) s += h[static_cast<size_t>(i)] * spin(x, i);
    for (const auto &[key, v] : J) s += v * spin(x, key.first) * spin(x, key.second);
    return s;
}

double IsingHamiltonian::cost(const std::string &bitstring) const {
    if (static_cast<int>(bitstring.size()) != n) {
        throw std::invalid_argument("ising: bitstring length does not match qubit count");
    }
    return cost(from_bitstring(bitstring));
}

std::vector<double> IsingHamiltonian::energies() const {
    if (n > 30) throw std::invalid_argument("ising: too many qubits for a dense diagonal");
    const size_t dim = size_t{1} << n;
    // lower[b]: couplings to qubits below b; upper_sum[b]: sum of couplings above b.
    std::vector<std::vector<std::pair<int, double>>> lower(static_cast<size_t>(n));
    std::vector<double> upper_sum(static_cast<size_t>(n), 0.0);
    double all_up = offset;
    for (int i = 0; i < n; i++) all_up += h[static_cast<size_t>(i)];
    for (const auto &[key, v] : J) {
        lower[static_cast<size_t>(key.second)].emplace_back(key.first, v);
        upper_sum[static_cast<size_t>(key.first)] += v;
        all_up += v;
    }
    std::vector<double> e(dim);
    e[0] = all_up;
    // Flip bit b on top of a state whose bits >= b are all zero.
    for (int b = 0; b < n; b++) {
        const size_t half = size_t{1} << b;
        const double base = -2.0 * (h[static_cast<size_t>(b)] + upper_sum[static_cast<size_t>(b)]);
        const auto &nb = lower[static_cast<size_t>(b)];
        for (size_t z = 0; z < half; z++) {
            double d = base;
            for (const auto &[j, v] : nb) d -= 2.0 * v * spin(z, j);
            e[z | half] = e[z] + d;
        }
    }
    return e;
}

IsingHamiltonian IsingHamiltonian::scaled(double factor) const {
    IsingHamiltonian out = *this;
    for (auto &v : out.h) v *= factor;
    for (auto &[key, v] : out.J) v *= factor;
    out.offset *= factor;
    return out;
}

IsingHamiltonian IsingHamiltonian::nearest_neighbor() const {
    IsingHamiltonian out(n);
    out.h = h;
    out.offset = offset;
    for (const auto &[key, v] : J) {
        if (key.second == key.first + 1) out.J[key] = v;
    }
    return out;
}

bool IsingHamiltonian::is_zero() const {
    for (double v : h) {
        if (v != 0.0) return false;
    }
    for (const auto &[key, v] : J) {
        if (v != 0.0) return false;
    }
    return true;
}

nlohmann::json IsingHamiltonian::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["h"] = h;
    auto triples = nlohmann::json::array();
    for (const auto &[key, v] : J) triples.push_back({key.first, key.second, v});
    j["J"] = triples;
    j["offset"] = offset;
    return j;
}

IsingHamiltonian IsingHamiltonian::from_json(const nlohmann::json &j) {
    auto h = j.at("h").get<std::vector<double>>();
    IsingHamiltonian H(j.value("n", static_cast<int>(h.size())));
    if (static_cast<int>(h.size()) != H.n) throw std::invalid_argument("ising: h has wrong length");
    H.h = std::move(h);
    for (const auto &t : j.at("J")) {
        H.add_coupling(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>());
    }
    H.offset = j.value("offset", 0.0);
    return H;
}

IsingHamiltonian qubo_to_ising(const Qubo &q) {
    IsingHamiltonian H(q.num_vars);
    H.offset = q.offset;
    for (const auto &[key, a] : q.coeffs) {
        auto [i, j] = key;
        if (i == j) {
            // a b = a/2 - (a/2) z
            H.offset += a / 2.0;
            H.h[static_cast<size_t>(i)] -= a / 2.0;
        } else {
            // a b_i b_j = (a/4)(1 - z_i - z_j + z_i z_j)
            H.offset += a / 4.0;
            H.h[static_cast<size_t>(i)] -= a / 4.0;
            H.h[static_cast<size_t>(j)] -= a / 4.0;
            H.J[{i, j}] += a / 4.0;
        }
    }
    return H;
}

OracleResult brute_force(const IsingHamiltonian &H, const FeasibilityFn &feasible, bool keep_table) {
    if (H.n > kBruteForceMaxQubits) {
        throw std::invalid_argument("brute_force: " + std::to_string(H.n) + " qubits exceeds the limit of " +
                                    std::to_string(kBruteForceMaxQubits));
    }
    const double inf = std::numeric_limits<double>::infinity();
    OracleResult res;
    res.n = H.n;
    res.min_feasible_cost = inf;
    res.min_infeasible_cost = inf;
    auto e = H.energies();
    Basis best_feasible = 0;
    Basis best_any = 0;
    double best_any_cost = inf;
    for (Basis z = 0; z < e.size(); z++) {
        double c = e[z];
        if (c < best_any_cost) {
            best_any_cost = c;
            best_any = z;
        }
        bool ok = !feasible || feasible(z);
        if (ok) {
            res.feasible_count++;
            if (c < res.min_feasible_cost) {
                res.min_feasible_cost = c;
                best_feasible = z;
            }
        } else if (c < res.min_infeasible_cost) {
            res.min_infeasible_cost = c;
        }
    }
    if (res.feasible_count > 0) {
        res.best_bitstring = best_feasible;
        res.best_cost = res.min_feasible_cost;
        res.best_is_feasible = true;
    } else {
        res.best_bitstring = best_any;
        res.best_cost = best_any_cost;
    }
    if (keep_table) res.cost_table = std::move(e);
    return res;
}

OracleResult brute_force(const Qubo &q, const FeasibilityFn &feasible, bool keep_table) {
    return brute_force(qubo_to_ising(q), feasible, keep_table);
}

}  // namespace qtransit
