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

#include "qtransit/encoders.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace qtransit {

namespace {

void check_square(const Matrix &m, int n, const char *what) {
    if (static_cast<int>(m.size()) != n) {
        throw std::invalid_argument(std::string(what) + ": matrix dimension does not match size");
    }
    for (int i = 0; i < n; i++) {
        if (static_cast<int>(m[i].size()) != n) {
            throw std::invalid_argument(std::string(what) + ": matrix is not square");
        }
        for (int j = 0; j < n; j++) {
            if (!std::isfinite(m[i][j]) || m[i][j] < 0.0) {
                throw std::invalid_argument(std::string(what) + ": costs must be finite and nonnegative");
            }
        }
        if (m[i][i] != 0.0) {
            throw std::invalid_argument(std::string(what) + ": nonzero diagonal entry");
        }
    }
}

std::string label2(const char *name, int a, int b) {
    return std::string(name) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}

}  // namespace

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::kTsp:
            return "tsp";
        case ProblemKind::kVrp:
            return "vrp";
        case ProblemKind::kFlp:
            return "flp";
    }
    return "?";
}

ProblemKind problem_kind_from_string(const std::string &s) {
    if (s == "tsp") return ProblemKind::kTsp;
    if (s == "vrp") return ProblemKind::kVrp;
    if (s == "flp") return ProblemKind::kFlp;
    throw std::invalid_argument("unknown problem type '" + s + "'");
}

void TspInstance::validate() const {
    if (n_cities < 3) {
        throw std::invalid_argument("tsp: need at least 3 cities");
    }
    check_square(dist, n_cities, "tsp");
}

void VrpInstance::validate() const {
    if (n_nodes < 2) {
        throw std::invalid_argument("vrp: need a depot and at least one customer");
    }
    check_square(weights, n_nodes, "vrp");
    if (fleet < 1 || fleet >= n_nodes) {
        throw std::invalid_argument("vrp: fleet size must be in [1, n_nodes - 1]");
    }
}

void FlpInstance::validate() const {
    if (n_customers < 1 || n_facilities < 1) {
        throw std::invalid_argument("flp: need at least one customer and one facility");
    }
    if (static_cast<int>(setup.size()) != n_facilities) {
        throw std::invalid_argument("flp: setup cost vector has wrong length");
    }
    if (static_cast<int>(service.size()) != n_customers) {
        throw std::invalid_argument("flp: service matrix has wrong row count");
    }
    for (double f : setup) {
        if (!std::isfinite(f) || f < 0.0) {
            throw std::invalid_argument("flp: setup costs must be finite and nonnegative");
        }
    }
    for (const auto &row : service) {
        if (static_cast<int>(row.size()) != n_facilities) {
            throw std::invalid_argument("flp: service matrix has wrong column count");
        }
        for (double c : row) {
            if (!std::isfinite(c) || c < 0.0) {
                throw std::invalid_argument("flp: service costs must be finite and nonnegative");
            }
        }
    }
}

ProblemKind kind_of(const Instance &inst) {
    if (std::holds_alternative<TspInstance>(inst)) return ProblemKind::kTsp;
    if (std::holds_alternative<VrpInstance>(inst)) return ProblemKind::kVrp;
    return ProblemKind::kFlp;
}

double LinearConstraint::residual(Basis x) const {
    double s = -rhs;
    for (const auto &[v, a] : terms) {
        if (bit(x, v)) {
            s += a;
        }
    }
    return s;
}

double BinaryProgram::objective(Basis x) const {
    double s = offset;
    for (const auto &[v, a] : linear) {
        if (bit(x, v)) s += a;
    }
    for (const auto &[key, a] : quadratic) {
        if (bit(x, key.first) && bit(x, key.second)) s += a;
    }
    return s;
}

double BinaryProgram::violation(Basis x) const {
    double s = 0.0;
    for (const auto &c : eq_constraints) {
        double r = c.residual(x);
        s += r * r;
    }
    for (const auto &p : product_penalties) {
        if (p.violated(x)) s += 1.0;
    }
    return s;
}

void BinaryProgram::add_quadratic(int i, int j, double v) {
    if (i == j) {
        // x_i^2 = x_i on binaries.
        linear[i] += v;
        return;
    }
    quadratic[{std::min(i, j), std::max(i, j)}] += v;
}

void BinaryProgram::validate() const {
    auto in_range = [&](int v) { return v >= 0 && v < num_vars; };
    for (const auto &[v, a] : linear) {
        if (!in_range(v)) throw std::invalid_argument("binary program: linear index out of range");
    }
    for (const auto &[key, a] : quadratic) {
        if (!(key.first < key.second) || !in_range(key.first) || !in_range(key.second)) {
            throw std::invalid_argument("binary program: malformed quadratic key");
        }
    }
    for (const auto &c : eq_constraints) {
        for (const auto &[v, a] : c.terms) {
            if (!in_range(v)) throw std::invalid_argument("binary program: constraint index out of range");
        }
    }
    for (const auto &p : product_penalties) {
        if (!in_range(p.var) || !in_range(p.guard)) {
            throw std::invalid_argument("binary program: product penalty index out of range");
        }
    }
}

BinaryProgram encode_tsp(const TspInstance &inst) {
    inst.validate();
    const int n = inst.n_cities;
    const auto &d = inst.dist;

    BinaryProgram bp;
    bp.kind = ProblemKind::kTsp;
    bp.tsp_cities = n;
    bp.tsp_fixed_depot = inst.fixed_depot;
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) {
            if (i != j) bp.pairwise_cost_sum += std::abs(d[i][j]);
        }
    }

    // Positions and cities are 0-based internally; labels are 1-based.
    const int first = inst.fixed_depot ? 1 : 0;
    const int k = n - first;
    bp.num_vars = k * k;
    auto var = [&](int pos, int city) { return (pos - first) * k + (city - first); };
    for (int pos = first; pos < n; pos++) {
        for (int city = first; city < n; city++) {
            bp.var_labels.push_back(label2("x", pos + 1, city + 1));
        }
    }

    for (int pos = 0; pos < n; pos++) {
        int next = (pos + 1) % n;
        for (int c1 = 0; c1 < n; c1++) {
            for (int c2 = 0; c2 < n; c2++) {
                if (c1 == c2 || d[c1][c2] == 0.0) continue;
                bool pinned_here = inst.fixed_depot && pos == 0;
                bool pinned_next = inst.fixed_depot && next == 0;
                if (pinned_here && pinned_next) continue;
                if (pinned_here) {
                    if (c1 == 0 && c2 != 0) bp.linear[var(next, c2)] += d[c1][c2];
                } else if (pinned_next) {
                    if (c2 == 0 && c1 != 0) bp.linear[var(pos, c1)] += d[c1][c2];
                } else {
                    if (inst.fixed_depot && (c1 == 0 || c2 == 0)) continue;
                    bp.add_quadratic(var(pos, c1), var(next, c2), d[c1][c2]);
                }
            }
        }
    }

    for (int pos = first; pos < n; pos++) {
        LinearConstraint row{"row[" + std::to_string(pos + 1) + "]", {}, 1.0};
        for (int city = first; city < n; city++) row.terms.emplace_back(var(pos, city), 1.0);
        bp.eq_constraints.push_back(std::move(row));
    }
    for (int city = first; city < n; city++) {
        LinearConstraint col{"column[" + std::to_string(city + 1) + "]", {}, 1.0};
        for (int pos = first; pos < n; pos++) col.terms.emplace_back(var(pos, city), 1.0);
        bp.eq_constraints.push_back(std::move(col));
    }
    bp.validate();
    return bp;
}

BinaryProgram encode_vrp(const VrpInstance &inst) {
    inst.validate();
    const int n = inst.n_nodes;
    if (n > 64) {
        throw std::invalid_argument("vrp: at most 64 nodes supported");
    }
    BinaryProgram bp;
    bp.kind = ProblemKind::kVrp;
    bp.vrp_nodes = n;
    bp.subtour_check = true;

    // Edges of node i are listed with (i, i+1) last, so consecutive variables
    // always share a node: within a block the tail, across blocks node i+1.
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) {
            if (j != i && j != i + 1) bp.vrp_edges.emplace_back(i, j);
        }
        if (i + 1 < n) bp.vrp_edges.emplace_back(i, i + 1);
    }
    bp.num_vars = static_cast<int>(bp.vrp_edges.size());
    for (int v = 0; v < bp.num_vars; v++) {
        auto [i, j] = bp.vrp_edges[v];
        bp.var_labels.push_back(label2("x", i, j));
        double w = inst.weights[i][j];
        bp.pairwise_cost_sum += std::abs(w);
        if (w != 0.0) bp.linear[v] += w;
    }

    for (int i = 1; i < n; i++) {
        LinearConstraint c{"visit-once[" + std::to_string(i) + "]", {}, 1.0};
        for (int v = 0; v < bp.num_vars; v++) {
            if (bp.vrp_edges[v].first == i) c.terms.emplace_back(v, 1.0);
        }
        bp.eq_constraints.push_back(std::move(c));
    }
    for (int i = 0; i < n; i++) {
        LinearConstraint c{"flow[" + std::to_string(i) + "]", {}, 0.0};
        for (int v = 0; v < bp.num_vars; v++) {
            if (bp.vrp_edges[v].first == i) c.terms.emplace_back(v, 1.0);
            if (bp.vrp_edges[v].second == i) c.terms.emplace_back(v, -1.0);
        }
        bp.eq_constraints.push_back(std::move(c));
    }
    LinearConstraint out{"depot-out", {}, static_cast<double>(inst.fleet)};
    LinearConstraint in{"depot-in", {}, static_cast<double>(inst.fleet)};
    for (int v = 0; v < bp.num_vars; v++) {
        if (bp.vrp_edges[v].first == 0) out.terms.emplace_back(v, 1.0);
        if (bp.vrp_edges[v].second == 0) in.terms.emplace_back(v, 1.0);
    }
    bp.eq_constraints.push_back(std::move(out));
    bp.eq_constraints.push_back(std::move(in));
    bp.validate();
    return bp;
}

BinaryProgram encode_flp(const FlpInstance &inst) {
    inst.validate();
    const int n = inst.n_customers;
    const int m = inst.n_facilities;
    BinaryProgram bp;
    bp.kind = ProblemKind::kFlp;
    bp.num_vars = n * m + m;
    auto x = [&](int i, int j) { return i * m + j; };
    auto y = [&](int j) { return n * m + j; };

    for (int i = 0; i < n; i++) {
        for (int j = 0; j < m; j++) {
            bp.var_labels.push_back(label2("x", i + 1, j + 1));
            double c = inst.service[i][j];
            bp.pairwise_cost_sum += std::abs(c);
            if (c != 0.0) bp.linear[x(i, j)] += c;
        }
    }
    for (int j = 0; j < m; j++) {
        bp.var_labels.push_back("y[" + std::to_string(j + 1) + "]");
        bp.pairwise_cost_sum += std::abs(inst.setup[j]);
        if (inst.setup[j] != 0.0) bp.linear[y(j)] += inst.setup[j];
    }
    for (int i = 0; i < n; i++) {
        LinearConstraint c{"assign[" + std::to_string(i + 1) + "]", {}, 1.0};
        for (int j = 0; j < m; j++) c.terms.emplace_back(x(i, j), 1.0);
        bp.eq_constraints.push_back(std::move(c));
    }
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < m; j++) {
            bp.product_penalties.push_back({label2("open-if-assigned", i + 1, j + 1), x(i, j), y(j)});
        }
    }
    bp.validate();
    return bp;
}

BinaryProgram encode(const Instance &inst) {
    return std::visit(
        [](const auto &i) -> BinaryProgram {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, TspInstance>) {
                return encode_tsp(i);
            } else if constexpr (std::is_same_v<T, VrpInstance>) {
                return encode_vrp(i);
            } else {
                return encode_flp(i);
            }
        },
        inst);
}

double Qubo::cost(Basis x) const {
    double s = offset;
    for (const auto &[key, a] : coeffs) {
        if (bit(x, key.first) && bit(x, key.second)) s += a;
    }
    return s;
}

double Qubo::max_abs_coeff() const {
    double m = 0.0;
    for (const auto &[key, a] : coeffs) m = std::max(m, std::abs(a));
    return m;
}

double penalty_weight(const BinaryProgram &bp) { return 2.0 * bp.pairwise_cost_sum; }

Qubo to_qubo(const BinaryProgram &bp) { return to_qubo(bp, penalty_weight(bp)); }

Qubo to_qubo(const BinaryProgram &bp, double lambda) {
    bp.validate();
    Qubo q;
    q.num_vars = bp.num_vars;
    q.penalty_weight = lambda;
    q.offset = bp.offset;
    auto add = [&](int i, int j, double v) {
        if (v == 0.0) return;
        q.coeffs[{std::min(i, j), std::max(i, j)}] += v;
    };
    for (const auto &[v, a] : bp.linear) add(v, v, a);
    for (const auto &[key, a] : bp.quadratic) add(key.first, key.second, a);

    // lambda (a.x - b)^2 = lambda [sum a_i^2 x_i + 2 sum_{i<j} a_i a_j x_i x_j - 2b sum a_i x_i + b^2]
    for (const auto &c : bp.eq_constraints) {
        std::map<int, double> row;
        for (const auto &[v, a] : c.terms) row[v] += a;
        for (auto it = row.begin(); it != row.end(); ++it) {
            add(it->first, it->first, lambda * (it->second * it->second - 2.0 * c.rhs * it->second));
            for (auto jt = std::next(it); jt != row.end(); ++jt) {
                add(it->first, jt->first, 2.0 * lambda * it->second * jt->second);
            }
        }
        q.offset += lambda * c.rhs * c.rhs;
    }
    for (const auto &p : bp.product_penalties) {
        add(p.var, p.var, lambda);
        add(p.var, p.guard, -lambda);
    }
    std::erase_if(q.coeffs, [](const auto &kv) { return kv.second == 0.0; });

    double scale = q.max_abs_coeff();
    if (scale == 0.0) {
        throw std::invalid_argument("to_qubo: all coefficients are zero");
    }
    for (auto &[key, a] : q.coeffs) a /= scale;
    q.offset /= scale;
    q.norm_factor = scale;
    return q;
}

namespace {

// Returns true iff some selected edge is not reachable from the depot.
bool has_subtour(const BinaryProgram &bp, Basis x) {
    std::array<std::uint64_t, 64> out{};
    std::uint64_t touched = 0;
    for (int v = 0; v < bp.num_vars; v++) {
        if (bit(x, v)) {
            auto [i, j] = bp.vrp_edges[v];
            out[i] |= std::uint64_t{1} << j;
            touched |= std::uint64_t{1} << i;
        }
    }
    std::uint64_t reach = 1;
    std::uint64_t frontier = 1;
    while (frontier != 0) {
        std::uint64_t next = 0;
        for (int i = 0; i < bp.vrp_nodes; i++) {
            if ((frontier >> i) & 1U) next |= out[i];
        }
        frontier = next & ~reach;
        reach |= next;
    }
    return (touched & ~reach) != 0;
}

std::vector<std::vector<int>> extract_routes(const BinaryProgram &bp, Basis x) {
    std::vector<int> succ(bp.vrp_nodes, -1);
    std::vector<int> depot_starts;
    for (int v = 0; v < bp.num_vars; v++) {
        if (!bit(x, v)) continue;
        auto [i, j] = bp.vrp_edges[v];
        if (i == 0) {
            depot_starts.push_back(j);
        } else {
            succ[i] = j;
        }
    }
    std::sort(depot_starts.begin(), depot_starts.end());
    std::vector<std::vector<int>> routes;
    for (int start : depot_starts) {
        std::vector<int> route{0};
        int cur = start;
        while (cur > 0 && static_cast<int>(route.size()) <= bp.vrp_nodes) {
            route.push_back(cur);
            cur = succ[cur];
        }
        route.push_back(0);
        routes.push_back(std::move(route));
    }
    return routes;
}

}  // namespace

bool is_feasible(const BinaryProgram &bp, Basis x) {
    for (const auto &c : bp.eq_constraints) {
        if (c.residual(x) != 0.0) return false;
    }
    for (const auto &p : bp.product_penalties) {
        if (p.violated(x)) return false;
    }
    if (bp.subtour_check && has_subtour(bp, x)) return false;
    return true;
}

FeasibilityReport decode_and_check(const BinaryProgram &bp, Basis x) {
    if (bp.num_vars < 64 && (x >> bp.num_vars) != 0) {
        throw std::invalid_argument("decode_and_check: bitstring has more bits than variables");
    }
    FeasibilityReport rep;
    for (const auto &c : bp.eq_constraints) {
        if (c.residual(x) != 0.0) rep.violations.push_back(c.name);
    }
    for (const auto &p : bp.product_penalties) {
        if (p.violated(x)) rep.violations.push_back(p.name);
    }
    if (bp.subtour_check && has_subtour(bp, x)) {
        rep.violations.push_back("subtour");
    }
    rep.feasible = rep.violations.empty();
    if (!rep.feasible) return rep;

    rep.objective = bp.objective(x);
    if (bp.kind == ProblemKind::kTsp) {
        const int n = bp.tsp_cities;
        const int first = bp.tsp_fixed_depot ? 1 : 0;
        const int k = n - first;
        rep.tour.assign(n, 0);
        if (bp.tsp_fixed_depot) rep.tour[0] = 1;
        for (int pos = 0; pos < k; pos++) {
            for (int city = 0; city < k; city++) {
                if (bit(x, pos * k + city)) rep.tour[pos + first] = city + first + 1;
            }
        }
    } else if (bp.kind == ProblemKind::kVrp) {
        rep.routes = extract_routes(bp, x);
    }
    return rep;
}

FeasibilityReport decode_and_check(const BinaryProgram &bp, const std::string &bitstring) {
    if (static_cast<int>(bitstring.size()) != bp.num_vars) {
        throw std::invalid_argument("decode_and_check: bitstring length " + std::to_string(bitstring.size()) +
                                    " does not match " + std::to_string(bp.num_vars) + " variables");
    }
    return decode_and_check(bp, from_bitstring(bitstring));
}

}  // namespace qtransit
