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
#include <span>
#include <string>
#include <vector>

#include "qtransit/circuit.hpp"
#include "qtransit/ising.hpp"
#include "qtransit/sample_set.hpp"

namespace qtransit {

enum class AlphaMode { kAdaptive, kFixed };

std::string to_string(AlphaMode m);
AlphaMode alpha_mode_from_string(const std::string &s);

/// Layer fidelity giving a per-gate two-qubit fidelity of 0.994.
double default_layer_fidelity(int n);

struct CvarConfig {
    AlphaMode alpha_mode = AlphaMode::kAdaptive;
    double fixed_alpha = 1.0;
    /// Values <= 0 select default_layer_fidelity(n).
    double layer_fidelity = 0.0;
    std::uint64_t shots_per_eval = 10000;
    std::uint64_t seed = 0;
    Topology topology = Topology::kAllToAll;

    void validate() const;
};

/// Mean of the lowest ceil(alpha * shots) sampled costs (at least one).
double cvar(const SampleSet &samples, const IsingHamiltonian &cost, double alpha);
/// Same, with the cost of every basis state precomputed.
double cvar(const SampleSet &samples, std::span<const double> energies, double alpha);

/// fid_cx = lf^(1/(n-1)), gamma = d2q / fid_cx^2, alpha = min(1, 1/sqrt(gamma)).
double adaptive_alpha(double layer_fidelity, int n, int d2q);

enum class InitKind { kZeros, kRamp, kSeededUniform };

std::string to_string(InitKind k);
InitKind init_kind_from_string(const std::string &s);

/// 2p angles ordered gamma_1, beta_1, ..., gamma_p, beta_p.
/// ramp: gamma_l = (l/p) delta, beta_l = (1 - l/p) delta.
std::vector<double> init_params(InitKind kind, int p, double delta = 0.5, std::uint64_t seed = 0);

struct OptimizeOptions {
    int budget = 200;
    double rho_begin = 0.5;
    double rho_end = 1e-3;
    double lower = -3.141592653589793;
    double upper = 3.141592653589793;
};

struct OptTraceEntry {
    int iteration = 0;
    double cvar = 0.0;
    std::vector<double> params;
};

struct OptRun {
    std::vector<double> best_params;
    double best_cvar = 0.0;
    double initial_cvar = 0.0;
    int iterations = 0;
    double alpha = 1.0;
    int d2q = 0;
    bool used_simplex_fallback = false;
    std::vector<OptTraceEntry> trace;

    /// iteration,cvar,theta_0,...
    std::string trace_csv() const;
};

/// Minimizes CVaR of the sampled cost over the free angles of `circuit`,
/// starting from `x0` and |+>^n. Leading layers without free angles are
/// simulated once. Every evaluation reuses the same uniforms, so equal
/// parameters give equal values.
OptRun optimize(const ParamCircuit &circuit, const IsingHamiltonian &cost, const CvarConfig &cfg,
                std::span<const double> x0, const OptimizeOptions &opts = {});

}  // namespace qtransit
