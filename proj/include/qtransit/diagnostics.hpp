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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtransit/circuit.hpp"
#include "qtransit/encoders.hpp"
#include "qtransit/ising.hpp"
#include "qtransit/sample_set.hpp"
#include "qtransit/statevector.hpp"

namespace qtransit {

/// <H^2> - <H>^2 from exact amplitudes.
double energy_variance(const Statevector &sv, const IsingHamiltonian &cost);
/// Count-weighted sample moments (population form).
double energy_variance(const SampleSet &samples, const IsingHamiltonian &cost);

/// <sum_i X_i>.
double driver_energy(const Statevector &sv);

struct ProbeSettings {
    double strength = 0.01;
    /// Non-positive means one coarse step dt.
    double time = 0.0;
};

/// Central difference (<H_B>_+ - <H_B>_-) / (2 strength) after evolving
/// `state` under (1 - s +/- strength) H_B + s H_C for the probe time. The
/// evolution is split into steps of dt/2, cost factor first.
double susceptibility(const Statevector &state, const IsingHamiltonian &cost, double s, double dt,
                      const ProbeSettings &probe = {});
/// Same, probing the Trotter prefix state after m steps of `schedule` at
/// s = m dt / T.
double susceptibility(const IsingHamiltonian &cost, const Schedule &schedule, int m, const ProbeSettings &probe = {});

/// Trotter prefix state after the first m steps.
Statevector trotter_prefix_state(const IsingHamiltonian &cost, const Schedule &schedule, int m);

struct MetricsRow {
    int m = 0;
    int p = 0;
    std::string variant;
    int d2q = 0;
    int iterations = 0;
    std::uint64_t feasible_count = 0;
    std::uint64_t unique_feasible = 0;
    std::optional<double> avg_objective_feasible;
    double avg_qubo_cost = 0.0;
    std::optional<int> best_rank;
    double prefix_fidelity = 1.0;
    std::string error;

    nlohmann::json to_json() const;
};

struct DiagnosticsRow {
    int m = 0;
    double energy_variance = 0.0;
    double energy_variance_sampled = 0.0;
    double susceptibility = 0.0;
    double driver_energy = 0.0;
    double probe_strength = 0.0;
    double probe_time = 0.0;

    nlohmann::json to_json() const;
};

/// Decodes each distinct sampled bitstring once. Ranks order bitstrings by
/// descending count, then ascending QUBO cost, then lexicographic string.
MetricsRow evaluate_samples(const SampleSet &samples, const BinaryProgram &bp, const Qubo &qubo);

std::string metrics_csv_header();
std::string to_csv_line(const MetricsRow &row);
std::string diagnostics_csv_header();
std::string to_csv_line(const DiagnosticsRow &row);

}  // namespace qtransit
