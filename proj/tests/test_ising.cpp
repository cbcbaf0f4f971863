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

#include <random>

#include "oracles.hpp"
#include "qtransit/encoders.hpp"
#include "qtransit/instances.hpp"
#include "qtransit/ising.hpp"

using namespace qtransit;

namespace {

IsingHamiltonian random_ising(int n, std::uint64_t seed) {
    Rng rng(seed);
    IsingHamiltonian H(n);
    for (int i = 0; i < n; i++) H.add_field(i, rng.uniform(-1, 1));
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++) H.add_coupling(i, j, rng.uniform(-1, 1));
    H.offset = rng.uniform(-1, 1);
    return H;
}

}  // namespace

TEST(Ising, SingleLinearTerm) {
    Qubo q;
    q.num_vars = 1;
    q.coeffs[{0, 0}] = 1.0;
    auto H = qubo_to_ising(q);
    EXPECT_DOUBLE_EQ(H.h[0], -0.5);
    EXPECT_DOUBLE_EQ(H.offset, 0.5);
}

TEST(Ising, SingleProductTerm) {
    Qubo q;
    q.num_vars = 2;
    q.coeffs[{0, 1}] = 4.0;
    auto H = qubo_to_ising(q);
    EXPECT_DOUBLE_EQ(H.J.at({0, 1}), 1.0);
    EXPECT_DOUBLE_EQ(H.h[0], -1.0);
    EXPECT_DOUBLE_EQ(H.h[1], -1.0);
    EXPECT_DOUBLE_EQ(H.offset, 1.0);
}

TEST(Ising, CostConvention) {
    IsingHamiltonian H(1);
    H.h[0] = 1.0;
    H.offset = 0.25;
    EXPECT_DOUBLE_EQ(H.cost("0"), 1.25);
    EXPECT_DOUBLE_EQ(H.cost("1"), -0.75);
    IsingHamiltonian Z(3);
    Z.offset = 2.0;
    for (Basis b = 0; b < 8; b++) EXPECT_EQ(Z.cost(b), 2.0);
    EXPECT_THROW(H.cost("01"), std::invalid_argument);
}

TEST(Ising, EnergiesMatchDenseDiagonal) {
    auto H = random_ising(6, 3);
    auto dense = oracle::dense_ising(H);
    auto e = H.energies();
    for (Basis b = 0; b < 64; b++) {
        EXPECT_NEAR(e[b], dense(b, b).real(), 1e-12);
        EXPECT_NEAR(H.cost(b), dense(b, b).real(), 1e-12);
    }
}

TEST(Ising, InsertionOrderDoesNotMatter) {
    IsingHamiltonian a(3), b(3);
    a.add_coupling(0, 1, 0.3);
    a.add_coupling(1, 2, -0.7);
    b.add_coupling(2, 1, -0.7);
    b.add_coupling(1, 0, 0.3);
    for (Basis x = 0; x < 8; x++) EXPECT_EQ(a.cost(x), b.cost(x));
}

TEST(Ising, QuboRoundTripOnEveryBitstring) {
    for (auto kind : {ProblemKind::kFlp, ProblemKind::kTsp}) {
        auto q = to_qubo(encode(benchmark_instance(kind)));
        auto H = qubo_to_ising(q);
        auto e = H.energies();
        for (Basis x = 0; x < (Basis{1} << q.num_vars); x++) ASSERT_NEAR(e[x], q.cost(x), 1e-9);
    }
}

TEST(Ising, JsonUsesTriples) {
    auto H = random_ising(4, 1);
    auto j = H.to_json();
    ASSERT_TRUE(j.at("J").is_array());
    EXPECT_EQ(j.at("J")[0].size(), 3U);
    auto back = IsingHamiltonian::from_json(j);
    for (Basis x = 0; x < 16; x++) EXPECT_DOUBLE_EQ(back.cost(x), H.cost(x));
}

TEST(Ising, NearestNeighborKeepsAdjacentCouplings) {
    auto H = random_ising(4, 2);
    auto nn = H.nearest_neighbor();
    for (const auto &[k, v] : nn.J) EXPECT_EQ(k.second, k.first + 1);
    EXPECT_EQ(nn.J.size(), 3U);
    EXPECT_EQ(nn.h, H.h);
}

TEST(BruteForce, TspFeasibleCountIsFactorial) {
    auto bp = encode(benchmark_instance(ProblemKind::kTsp));
    auto res = brute_force(to_qubo(bp), [&](Basis x) { return is_feasible(bp, x); });
    EXPECT_EQ(res.feasible_count, 24U);
}

TEST(BruteForce, FlpFixture) {
    auto bp = encode(benchmark_instance(ProblemKind::kFlp));
    auto res = brute_force(to_qubo(bp), [&](Basis x) { return is_feasible(bp, x); });
    EXPECT_EQ(res.feasible_count, 34U);
    EXPECT_TRUE(res.best_is_feasible);
    EXPECT_EQ(to_bitstring(res.best_bitstring, 12), "010101010101");
}

TEST(BruteForce, SingleVariable) {
    Qubo q;
    q.num_vars = 1;
    q.coeffs[{0, 0}] = -1.0;
    auto res = brute_force(q);
    EXPECT_EQ(res.best_bitstring, 1U);
    EXPECT_DOUBLE_EQ(res.best_cost, -1.0);
}

TEST(BruteForce, BestCostBoundsEveryFeasibleSample) {
    auto bp = encode(benchmark_instance(ProblemKind::kFlp));
    auto q = to_qubo(bp);
    auto res = brute_force(q, [&](Basis x) { return is_feasible(bp, x); }, true);
    ASSERT_TRUE(res.cost_table.has_value());
    Rng rng(5);
    for (int k = 0; k < 500; k++) {
        Basis x = rng.next() & 0xFFF;
        if (is_feasible(bp, x)) EXPECT_LE(res.best_cost, q.cost(x) + 1e-12);
        EXPECT_NEAR((*res.cost_table)[x], q.cost(x), 1e-9);
    }
}

TEST(BruteForce, SizeGuard) {
    IsingHamiltonian H(kBruteForceMaxQubits + 1);
    EXPECT_THROW(brute_force(H), std::invalid_argument);
}
