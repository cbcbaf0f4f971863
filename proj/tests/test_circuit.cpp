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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qtransit/circuit.hpp"
#include "qtransit/encoders.hpp"
#include "qtransit/instances.hpp"
#include "qtransit/simulator.hpp"

using namespace qtransit;

namespace {

IsingHamiltonian random_ising(int n, std::uint64_t seed) {
    Rng rng(seed);
    IsingHamiltonian H(n);
    for (int i = 0; i < n; i++) H.add_field(i, rng.uniform(-1, 1));
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++) H.add_coupling(i, j, rng.uniform(-1, 1));
    return H;
}

ParamCircuit rzz_list(int n, std::vector<std::pair<int, int>> pairs) {
    ParamCircuit c(n);
    GateLayer l{"test", {}};
    for (auto [a, b] : pairs) l.gates.push_back({GateKind::kRzz, a, b, Angle::fixed(0.1)});
    c.add_layer(l);
    return c;
}

}  // namespace

TEST(Schedule, RightEndpoint) {
    auto s = linear_schedule(10, 1.0);
    EXPECT_DOUBLE_EQ(s.dt, 0.1);
    ASSERT_EQ(s.points.size(), 10U);
    for (int k = 0; k < 10; k++) EXPECT_NEAR(s.points[k], (k + 1) / 10.0, 1e-15);
    EXPECT_EQ(linear_schedule(1, 2.0).points, std::vector<double>{1.0});
    auto t = linear_schedule(7, 3.0);
    EXPECT_NEAR(t.dt * t.n_steps, 3.0, 1e-15);
    EXPECT_THROW(linear_schedule(0, 1.0), std::invalid_argument);
}

TEST(Schedule, OtherRules) {
    auto l = linear_schedule(4, 1.0, ScheduleRule::kLeftEndpoint);
    EXPECT_DOUBLE_EQ(l.points.front(), 0.0);
    auto m = linear_schedule(4, 1.0, ScheduleRule::kMidpoint);
    EXPECT_DOUBLE_EQ(m.points.front(), 0.125);
    EXPECT_EQ(schedule_rule_from_string(to_string(ScheduleRule::kMidpoint)), ScheduleRule::kMidpoint);
}

TEST(Schedule, ResampledPrefix) {
    auto s = linear_schedule(10, 1.0);
    auto f = resample_prefix(s, 1, 2);
    EXPECT_EQ(f.n_steps, 2);
    EXPECT_NEAR(f.dt, 0.05, 1e-15);
    EXPECT_NEAR(f.points[0], 0.05, 1e-15);
    EXPECT_NEAR(f.points[1], 0.10, 1e-15);
    auto g = resample_prefix(s, 6, 12);
    for (int k = 0; k < 12; k++) EXPECT_NEAR(g.points[k], 0.05 * (k + 1), 1e-14);
}

TEST(Anneal, AnglesFollowTheSchedule) {
    IsingHamiltonian H(2);
    H.add_field(0, 0.5);
    H.add_coupling(0, 1, -0.25);
    auto s = linear_schedule(4, 2.0);
    auto c = build_anneal(H, s);
    ASSERT_EQ(c.layers().size(), 8U);
    EXPECT_EQ(c.num_params(), 0);
    const auto &cost0 = c.layers()[0].gates;
    ASSERT_EQ(cost0.size(), 2U);
    EXPECT_EQ(cost0[0].kind, GateKind::kRzz);
    EXPECT_NEAR(cost0[0].angle.scale, 2 * 0.5 * 0.25 * -0.25, 1e-15);
    EXPECT_NEAR(cost0[1].angle.scale, 2 * 0.5 * 0.25 * 0.5, 1e-15);
    EXPECT_NEAR(c.layers()[1].gates[0].angle.scale, 2 * 0.5 * 0.75, 1e-15);
    // Final step is pure cost.
    EXPECT_TRUE(c.layers()[7].gates.empty());
}

TEST(Anneal, ZeroCostKeepsPlusProbabilities) {
    IsingHamiltonian H(3);
    auto sv = simulate_from_plus(build_anneal(H, linear_schedule(5, 1.0)));
    for (double p : sv.probabilities()) EXPECT_NEAR(p, 1.0 / 8, 1e-12);
}

TEST(Anneal, MatchesProductOfDenseExponentials) {
    auto H = random_ising(3, 5);
    auto s = linear_schedule(6, 1.5);
    auto sv = simulate_from_plus(build_anneal(H, s));
    oracle::CVec v = oracle::plus(3);
    for (double sk : s.points) {
        v = oracle::expm_herm(oracle::dense_ising(H), s.dt * sk) * v;
        v = oracle::expm_herm(oracle::dense_driver(3), s.dt * (1 - sk)) * v;
    }
    EXPECT_NEAR(oracle::fid(oracle::to_eigen(sv), v), 1.0, 1e-12);
    for (Eigen::Index z = 0; z < v.size(); z++) EXPECT_NEAR(std::abs(sv[z] - v(z)), 0.0, 1e-10);
}

TEST(Anneal, SplitRangesCompose) {
    auto H = random_ising(4, 8);
    auto s = linear_schedule(10, 1.0);
    auto whole = simulate_from_plus(build_anneal(H, s));
    auto part = simulate_from_plus(build_anneal(H, s, 0, 4));
    CircuitSimulator(build_anneal(H, s, 4, 10)).run(part);
    for (size_t z = 0; z < whole.dim(); z++) EXPECT_NEAR(std::abs(whole[z] - part[z]), 0.0, 1e-10);
    EXPECT_EQ(build_anneal(H, s, 3, 3).gate_count(), 0U);
}

TEST(Anneal, MoreStepsGetCloserToExactEvolution) {
    auto H = random_ising(4, 12);
    auto distance = [&](int n_steps) {
        auto s = linear_schedule(n_steps, 1.0);
        auto sv = simulate_from_plus(build_anneal(H, s));
        std::vector<EvolutionSegment> segs;
        for (double sk : s.points) segs.push_back({H.scaled(sk), 1.0 - sk});
        return state_distance(sv, exact_unitary_oracle(plus_state(4), segs, s.dt));
    };
    EXPECT_LT(distance(40), distance(10));
}

TEST(Qaoa, ParameterLayout) {
    auto H = random_ising(3, 1);
    auto c = build_qaoa_tail(H, 3);
    EXPECT_EQ(c.num_params(), 6);
    EXPECT_EQ(c.param_names()[0], "gamma_1");
    EXPECT_EQ(c.param_names()[1], "beta_1");
    EXPECT_EQ(c.param_names()[5], "beta_3");
    EXPECT_EQ(c.layers()[0].segment, "qaoa-layer-1");
    EXPECT_EQ(c.layers()[5].segment, "qaoa-layer-3");
}

TEST(Qaoa, ZeroAnglesAreIdentity) {
    auto H = random_ising(4, 2);
    std::vector<double> zero(4, 0.0);
    auto sv = simulate_from_plus(build_qaoa_tail(H, 2), zero);
    for (double p : sv.probabilities()) EXPECT_NEAR(p, 1.0 / 16, 1e-12);
    std::vector<double> gam_zero = {0.0, 0.7, 0.0, -0.3};
    sv = simulate_from_plus(build_qaoa_tail(H, 2), gam_zero);
    for (double p : sv.probabilities()) EXPECT_NEAR(p, 1.0 / 16, 1e-12);
}

TEST(Qaoa, SingleQubitClosedForm) {
    IsingHamiltonian H(1);
    H.add_field(0, 1.0);
    auto c = build_qaoa_tail(H, 1);
    for (double g = -1.5; g <= 1.5; g += 0.25) {
        for (double b = -1.5; b <= 1.5; b += 0.25) {
            std::vector<double> x = {g, b};
            auto sv = simulate_from_plus(c, x);
            // RX(2b) RZ(2g) |+>: <Z> = sin(2b) sin(2g).
            EXPECT_NEAR(expectation(sv, H), std::sin(2 * b) * std::sin(2 * g), 1e-12);
        }
    }
}

TEST(Qaoa, LcKeepsOnlyAdjacentCouplings) {
    auto H = random_ising(3, 3);
    auto lc = build_lc_qaoa_tail(H, 1);
    EXPECT_EQ(lc.two_qubit_count(), 2);
    for (const auto &g : lc.layers()[0].gates) {
        if (g.is_two_qubit()) EXPECT_EQ(g.q1, g.q0 + 1);
    }
    IsingHamiltonian sparse(3);
    sparse.add_coupling(0, 2, 1.0);
    sparse.add_field(1, 0.3);
    auto only_rz = build_lc_qaoa_tail(sparse, 1);
    EXPECT_EQ(only_rz.two_qubit_count(), 0);
    EXPECT_EQ(only_rz.layers()[0].gates.size(), 1U);
}

TEST(Qaoa, LcPerLayerCountOnVrp) {
    auto H = qubo_to_ising(to_qubo(encode(benchmark_instance(ProblemKind::kVrp))));
    const int n = H.n;
    EXPECT_EQ(build_lc_qaoa_tail(H, 1).two_qubit_count(), n - 1);
    EXPECT_LE(build_lc_qaoa_tail(H, 1).two_qubit_count(), build_qaoa_tail(H, 1).two_qubit_count());
}

TEST(Depth, TriangleIsThreeDeep) {
    auto c = rzz_list(3, {{0, 1}, {1, 2}, {0, 2}});
    auto rep = two_qubit_depth(c, Topology::kAllToAll);
    EXPECT_EQ(rep.two_qubit_depth, 3);
    EXPECT_EQ(rep.two_qubit_count, 3);
}

TEST(Depth, ChainInterleaves) {
    IsingHamiltonian H(6);
    for (int i = 0; i + 1 < 6; i++) H.add_coupling(i, i + 1, 1.0);
    // Odd and even bonds in separate passes.
    ParamCircuit c = rzz_list(6, {{0, 1}, {2, 3}, {4, 5}, {1, 2}, {3, 4}});
    EXPECT_EQ(two_qubit_depth(c, Topology::kAllToAll).two_qubit_depth, 2);
}

TEST(Depth, EmptyCircuit) {
    EXPECT_EQ(two_qubit_depth(ParamCircuit(4), Topology::kAllToAll).two_qubit_depth, 0);
    EXPECT_EQ(two_qubit_depth(ParamCircuit(4), Topology::kLinear).two_qubit_depth, 0);
}

TEST(Depth, LinearRoutingInsertsSwaps) {
    auto rep = two_qubit_depth(rzz_list(4, {{0, 3}}), Topology::kLinear);
    EXPECT_EQ(rep.swap_count, 2);
    EXPECT_EQ(rep.two_qubit_count, 3);
    EXPECT_EQ(rep.two_qubit_depth, 3);
    // Layout persists: logical 0 now sits next to 3.
    auto again = two_qubit_depth(rzz_list(4, {{0, 3}, {0, 3}}), Topology::kLinear);
    EXPECT_EQ(again.swap_count, 2);
}

TEST(Depth, BoundsAndMonotonicity) {
    auto H = random_ising(6, 4);
    for (auto topo : {Topology::kAllToAll, Topology::kLinear}) {
        ParamCircuit c(6);
        int prev = 0;
        for (int l = 0; l < 4; l++) {
            c.append(build_qaoa_tail(H, 1));
            auto rep = two_qubit_depth(c, topo);
            EXPECT_GE(rep.two_qubit_depth, prev);
            EXPECT_LE(rep.two_qubit_depth, rep.two_qubit_count);
            EXPECT_GE(rep.two_qubit_depth, (rep.two_qubit_count + 2) / 3);
            prev = rep.two_qubit_depth;
        }
    }
}

TEST(Depth, FullQaoaGrowsWithCouplings) {
    IsingHamiltonian H(5);
    int prev = 0;
    for (int i = 0; i < 5; i++) {
        for (int j = i + 1; j < 5; j++) {
            H.add_coupling(i, j, 0.5);
            int d = two_qubit_depth(build_qaoa_tail(H, 1), Topology::kAllToAll).two_qubit_depth;
            EXPECT_GE(d, prev);
            prev = d;
            EXPECT_EQ(two_qubit_depth(build_lc_qaoa_tail(H, 1), Topology::kAllToAll).two_qubit_depth,
                      two_qubit_depth(build_lc_qaoa_tail(H, 1), Topology::kAllToAll).two_qubit_depth);
        }
    }
}

TEST(ParamCircuit, BindAndAppend) {
    auto H = random_ising(3, 9);
    auto a = build_qaoa_tail(H, 1);
    auto b = build_qaoa_tail(H, 2);
    a.append(b);
    EXPECT_EQ(a.num_params(), 6);
    std::vector<double> x = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    auto bound = a.bind(x);
    EXPECT_EQ(bound.num_params(), 0);
    auto s1 = simulate_from_plus(a, x);
    auto s2 = simulate_from_plus(bound);
    EXPECT_NEAR(fidelity(s1, s2), 1.0, 1e-12);
    EXPECT_THROW(a.bind(std::vector<double>{0.1}), std::invalid_argument);
    a.retag("tail");
    for (const auto &l : a.layers()) EXPECT_EQ(l.segment, "tail");
}

TEST(ParamCircuit, RejectsBadGates) {
    ParamCircuit c(2);
    EXPECT_THROW(c.add_layer({"x", {{GateKind::kRx, 2, -1, Angle::fixed(0.1)}}}), std::invalid_argument);
    EXPECT_THROW(c.add_layer({"x", {{GateKind::kRzz, 1, 0, Angle::fixed(0.1)}}}), std::invalid_argument);
    EXPECT_THROW(c.add_layer({"x", {{GateKind::kRx, 0, -1, Angle::free(0)}}}), std::invalid_argument);
}

TEST(ParamCircuit, JsonDump) {
    auto c = build_qaoa_tail(random_ising(2, 1), 1);
    auto j = c.to_json();
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j.size(), 2U);
    EXPECT_EQ(j[1]["gates"][0]["param"], "beta_1");
}
