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
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtransit/aqc.hpp"
#include "qtransit/diagnostics.hpp"
#include "qtransit/encoders.hpp"
#include "qtransit/variational.hpp"

namespace qtransit {

inline const std::vector<std::string> kVariants = {"anneal", "aqc-trot", "aqc-qaoa", "aqc-lcqaoa"};

/// Everything a sweep depends on. JSON keys match the field names.
struct SweepConfig {
    /// Path to an instance JSON file, or "benchmark:tsp|vrp|flp".
    std::string instance = "benchmark:vrp";
    int n_steps = 10;
    double total_time = 1.0;
    ScheduleRule rule = ScheduleRule::kRightEndpoint;
    std::vector<int> m_set = {0, 1, 2, 3, 4, 5, 6};
    std::vector<int> p_set = {1, 2, 3, 4, 5, 6};
    std::vector<std::string> variants = kVariants;
    double eta = 0.99;
    int compress_max_iters = 2000;
    CompressionBackend compress_backend = CompressionBackend::kAdjointLbfgs;
    std::uint64_t shots = 10000;
    AlphaMode alpha_mode = AlphaMode::kAdaptive;
    double fixed_alpha = 1.0;
    double layer_fidelity = 0.0;  // <= 0: default_layer_fidelity(n)
    InitKind init = InitKind::kRamp;
    double init_delta = 0.5;
    int budget = 200;
    double rho_begin = 0.5;
    double rho_end = 1e-3;
    std::uint64_t seed = 2026;
    Topology topology = Topology::kAllToAll;
    bool diagnostics = true;
    double probe_strength = 0.01;
    double probe_time = 0.0;  // <= 0: one coarse step
    int workers = 0;          // <= 0: hardware concurrency

    void validate() const;
    nlohmann::json to_json() const;
    /// Missing keys keep their defaults; unknown keys are rejected.
    static SweepConfig from_json(const nlohmann::json &j);
};

/// Resolves `spec` ("benchmark:<kind>" or a file path).
Instance resolve_instance(const std::string &spec);

struct CompressionSummary {
    int m = 0;
    double fidelity = 1.0;
    int iterations = 0;
    int ansatz_layers = 0;
    bool reached_eta = true;
    std::vector<double> angles;
};

struct SweepRow {
    MetricsRow metrics;
    std::uint64_t seed = 0;
    double seconds = 0.0;
    int prefix_d2q = 0;
    /// Depths under both topologies regardless of cfg.topology (JSON only).
    int d2q_all_to_all = 0;
    int d2q_linear = 0;
    int swap_count_linear = 0;
    double alpha = 1.0;
    std::vector<double> params;
};

struct SweepOutput {
    nlohmann::json config;
    int num_qubits = 0;
    std::vector<SweepRow> rows;
    std::vector<DiagnosticsRow> diagnostics;
    std::vector<CompressionSummary> compressions;

    std::string csv() const;
    std::string diagnostics_csv() const;
    nlohmann::json to_json() const;
};

/// Number of rows a config produces.
size_t expected_row_count(const SweepConfig &cfg);

SweepOutput run_sweep(const SweepConfig &cfg);

/// Writes `path` (CSV), the JSON mirror next to it and, if present, the
/// diagnostics CSV.
void write_sweep(const SweepOutput &out, const std::string &csv_path);

/// QTRANSIT_WORKERS overrides the configured value.
int resolve_workers(int configured);

}  // namespace qtransit
