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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtransit/simulator.hpp"
#include "qtransit/statevector.hpp"
#include "qtransit/variational.hpp"

using namespace qtransit;

namespace {

// Samples on a 3-qubit register whose cost is the basis index itself.
std::vector<double> index_energies(int n) {
    std::vector<double> e(size_t{1} << n);
    for (size_t z = 0; z < e.size(); z++) e[z] = static_cast<double>(z);
    return e;
}

SampleSet random_samples(Rng &rng, int n) {
    SampleSet s;
    s.n = n;
    int distinct = 1 + static_cast<int>(rng.uniform() * 8);
    for (int k = 0; k < distinct; k++) {
        s.add(rng.next() % (Basis{1} << n), 1 + rng.next() % 50);
    }
    return s;
}

// Sorted expansion, lowest ceil(alpha * shots) averaged.
double naive_cvar(const SampleSet &s, const std::vector<double> &e, double alpha) {
    std::vector<double> all;
    for (const auto &[b, c] : s.counts)
        for (std::uint64_t k = 0; k < c; k++) all.push_back(e[b]);
    std::sort(all.begin(), all.end());
    size_t keep = std::max<size_t>(1, static_cast<size_t>(std::ceil(alpha * all.size() - 1e-9)));
    double sum = 0.0;
    for (size_t i = 0; i < keep; i++) sum += all[i];
    return sum / keep;
}

}  // namespace

TEST(Cvar, Examples) {
    auto e = index_energies(3);
    SampleSet s;
    s.n = 3;
    for (Basis b : {1, 2, 3, 4}) s.add(b);
    EXPECT_DOUBLE_EQ(cvar(s, e, 0.5), 1.5);
    EXPECT_DOUBLE_EQ(cvar(s, e, 1.0), 2.5);
    EXPECT_DOUBLE_EQ(cvar(s, e, 1e-9), 1.0);
    EXPECT_THROW(cvar(SampleSet{}, e, 0.5), std::invalid_argument);
    EXPECT_THROW(cvar(s, e, 0.0), std::invalid_argument);
    EXPECT_THROW(cvar(s, e, 1.5), std::invalid_argument);
}

TEST(Cvar, HamiltonianOverloadAgrees) {
    IsingHamiltonian H(3);
    H.add_field(0, 0.3);
    H.add_coupling(1, 2, -0.8);
    Rng rng(1);
    auto s = random_samples(rng, 3);
    auto e = H.energies();
    EXPECT_DOUBLE_EQ(cvar(s, H, 0.3), cvar(s, e, 0.3));
}

TEST(Cvar, AgreesWithExpandedDefinitionAndIsMonotone) {
    Rng rng(2);
    auto e = index_energies(4);
    for (int trial = 0; trial < 100; trial++) {
        auto s = random_samples(rng, 4);
        double mean = 0.0;
        for (const auto &[b, c] : s.counts) mean += e[b] * c;
        mean /= s.shots;
        EXPECT_NEAR(cvar(s, e, 1.0), mean, 1e-12);
        double prev = -1e300;
        for (double a = 0.01; a <= 1.0; a += 0.01) {
            double v = cvar(s, e, a);
            EXPECT_NEAR(v, naive_cvar(s, e, a), 1e-12);
            EXPECT_GE(v, prev - 1e-12);
            prev = v;
        }
    }
}

TEST(Cvar, ScalesWithHamiltonian) {
    IsingHamiltonian H(3);
    H.add_field(0, 0.3);
    H.add_field(2, -0.1);
    H.add_coupling(0, 1, 0.5);
    Rng rng(3);
    auto s = random_samples(rng, 3);
    EXPECT_NEAR(cvar(s, H.scaled(2.5), 0.4), 2.5 * cvar(s, H, 0.4), 1e-12);
}

TEST(AdaptiveAlpha, WorkedValues) {
    EXPECT_NEAR(adaptive_alpha(1.0, 10, 100), 0.1, 1e-12);
    const int n = 12;
    const double lf = std::pow(0.994, n - 1);
    EXPECT_NEAR(adaptive_alpha(lf, n, 209), 0.994 / std::sqrt(209.0), 1e-12);
    EXPECT_NEAR(adaptive_alpha(lf, n, 209), 0.0688, 1e-3);
    EXPECT_DOUBLE_EQ(adaptive_alpha(1.0, 5, 1), 1.0);
    EXPECT_THROW(adaptive_alpha(1.0, 1, 4), std::invalid_argument);
    EXPECT_THROW(adaptive_alpha(0.0, 3, 4), std::invalid_argument);
}

TEST(AdaptiveAlpha, Monotone) {
    for (int d = 1; d < 300; d++) EXPECT_LE(adaptive_alpha(0.9, 8, d + 1), adaptive_alpha(0.9, 8, d));
    for (int k = 1; k < 20; k++) EXPECT_LE(adaptive_alpha(0.05 * k, 8, 50), adaptive_alpha(0.05 * (k + 1), 8, 50));
}

TEST(InitParams, Kinds) {
    EXPECT_EQ(init_params(InitKind::kZeros, 3), std::vector<double>(6, 0.0));
    auto r = init_params(InitKind::kRamp, 2, 0.5);
    ASSERT_EQ(r.size(), 4U);
    EXPECT_DOUBLE_EQ(r[0], 0.25);
    EXPECT_DOUBLE_EQ(r[1], 0.25);
    EXPECT_DOUBLE_EQ(r[2], 0.5);
    EXPECT_DOUBLE_EQ(r[3], 0.0);
    auto u = init_params(InitKind::kSeededUniform, 4, 0.5, 11);
    EXPECT_EQ(u, init_params(InitKind::kSeededUniform, 4, 0.5, 11));
    EXPECT_NE(u, init_params(InitKind::kSeededUniform, 4, 0.5, 12));
    for (double v : u) EXPECT_LE(std::abs(v), std::numbers::pi / 4);
    EXPECT_THROW(init_params(InitKind::kZeros, 0), std::invalid_argument);
    EXPECT_EQ(init_kind_from_string("seeded-uniform"), InitKind::kSeededUniform);
}

TEST(Optimize, SingleQubitReachesGridMinimum) {
    IsingHamiltonian H(1);
    H.add_field(0, 1.0);
    auto c = build_qaoa_tail(H, 1);
    // Grid oracle on the exact expectation: <Z> = sin(2b) sin(2g).
    double grid_min = 1e300;
    for (double g = -3.1; g <= 3.1; g += 0.01)
        for (double b = -3.1; b <= 3.1; b += 0.01) grid_min = std::min(grid_min, std::sin(2 * b) * std::sin(2 * g));
    CvarConfig cfg;
    cfg.alpha_mode = AlphaMode::kFixed;
    cfg.fixed_alpha = 1.0;
    cfg.seed = 4;
    auto run = optimize(c, H, cfg, init_params(InitKind::kRamp, 1, 0.5));
    EXPECT_LT(run.best_cvar, grid_min + 0.05);
    EXPECT_LE(run.best_cvar, run.initial_cvar);
    EXPECT_LE(run.iterations, 200);
    EXPECT_EQ(run.trace.size(), static_cast<size_t>(run.iterations));
    EXPECT_DOUBLE_EQ(run.trace.front().cvar, run.initial_cvar);
}

TEST(Optimize, OptimalStartIsNotWorsened) {
    IsingHamiltonian H(1);
    H.add_field(0, 1.0);
    auto c = build_qaoa_tail(H, 1);
    CvarConfig cfg;
    cfg.alpha_mode = AlphaMode::kFixed;
    std::vector<double> best = {std::numbers::pi / 4, -std::numbers::pi / 4};
    auto run = optimize(c, H, cfg, best);
    EXPECT_LE(run.best_cvar, run.initial_cvar);
    EXPECT_NEAR(run.initial_cvar, -1.0, 1e-12);
}

TEST(Optimize, EqualParametersGiveEqualValues) {
    IsingHamiltonian H(3);
    H.add_field(0, 0.4);
    H.add_coupling(0, 2, 0.7);
    H.add_coupling(1, 2, -0.3);
    auto c = build_qaoa_tail(H, 2);
    CvarConfig cfg;
    cfg.seed = 5;
    cfg.shots_per_eval = 500;
    OptimizeOptions oo;
    oo.budget = 30;
    auto a = optimize(c, H, cfg, init_params(InitKind::kRamp, 2), oo);
    auto b = optimize(c, H, cfg, init_params(InitKind::kRamp, 2), oo);
    EXPECT_EQ(a.best_params, b.best_params);
    EXPECT_EQ(a.trace_csv(), b.trace_csv());
    EXPECT_EQ(a.trace_csv().substr(0, 31), "iteration,cvar,theta_0,theta_1,");
    EXPECT_GT(a.d2q, 0);
    EXPECT_NEAR(a.alpha, adaptive_alpha(default_layer_fidelity(3), 3, a.d2q), 1e-15);
}

TEST(Optimize, BoundPrefixIsSimulatedOnce) {
    IsingHamiltonian H(3);
    H.add_field(1, 0.5);
    H.add_coupling(0, 1, 0.6);
    ParamCircuit c = build_anneal(H, linear_schedule(3, 1.0));
    c.append(build_qaoa_tail(H, 1));
    CvarConfig cfg;
    cfg.alpha_mode = AlphaMode::kFixed;
    cfg.fixed_alpha = 0.5;
    OptimizeOptions oo;
    oo.budget = 40;
    auto run = optimize(c, H, cfg, std::vector<double>{0.2, 0.1}, oo);
    // Re-evaluate the best point with the full circuit and the same uniforms.
    auto sv = simulate_from_plus(c, run.best_params);
    auto u = sorted_uniforms(cfg.shots_per_eval, derive_seed(cfg.seed, "cvar-eval"));
    EXPECT_DOUBLE_EQ(cvar(sample_with_uniforms(sv, u), H, 0.5), run.best_cvar);
}

TEST(Optimize, Errors) {
    IsingHamiltonian H(2);
    H.add_field(0, 1.0);
    CvarConfig cfg;
    EXPECT_THROW(optimize(build_anneal(H, linear_schedule(2, 1.0)), H, cfg, {}), std::invalid_argument);
    EXPECT_THROW(optimize(build_qaoa_tail(H, 1), H, cfg, std::vector<double>{0.1}), std::invalid_argument);
    cfg.alpha_mode = AlphaMode::kFixed;
    cfg.fixed_alpha = 0.0;
    EXPECT_THROW(optimize(build_qaoa_tail(H, 1), H, cfg, std::vector<double>{0.1, 0.1}), std::invalid_argument);
}
