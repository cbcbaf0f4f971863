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
#include <string>
#include <vector>

#include "json.hpp"
#include "qtransit/circuit.hpp"
#include "qtransit/statevector.hpp"

namespace qtransit {

enum class CompressionBackend {
    kAdjointLbfgs,    // exact adjoint gradient, L-BFGS ascent
    kDerivativeFree,  // trust-region on 1 - F, same optimizer as the variational module
};

std::string to_string(CompressionBackend b);
CompressionBackend compression_backend_from_string(const std::string &s);

struct CompressionSpec {
    int m = 1;
    double eta = 0.99;
    int max_iters = 2000;
    std::uint64_t seed = 0;
    CompressionBackend backend = CompressionBackend::kAdjointLbfgs;

    void validate() const;
};

struct CompressionResult {
    int m = 0;
    double eta = 0.0;
    ParamCircuit circuit;  // all angles bound
    std::vector<double> angles;
    double initial_fidelity = 0.0;
    double achieved_fidelity = 0.0;
    int iterations_used = 0;
    int target_layers = 0;
    int ansatz_layers = 0;
    bool reached_eta = false;
    std::string backend;
    /// Best-so-far fidelity after each optimizer iteration (entry 0 is the
    /// initialization).
    std::vector<double> fidelity_trace;

    nlohmann::json to_json() const;
    /// Rebuilds the bound circuit from the stored angles.
    static CompressionResult from_json(const nlohmann::json &j, const IsingHamiltonian &cost,
                                       const Schedule &schedule);
};

/// |+>^n evolved by 2m Trotter steps of size dt/2 over the first m steps.
Statevector build_target_prefix(const IsingHamiltonian &cost, const Schedule &schedule, int m);

struct Ansatz {
    ParamCircuit circuit;
    std::vector<double> initial;  // plain Trotter angles of the coarse prefix
};

/// ceil(m/3) Trotter-shaped layers covering the first m steps, with an
/// independent parameter for every rotation.
Ansatz build_ansatz(const IsingHamiltonian &cost, const Schedule &schedule, int m);

inline int ansatz_layer_count(int m) { return (m + 2) / 3; }

struct FidelityGradient {
    double fidelity = 0.0;
    std::vector<double> gradient;
};

/// F = |<target| U(params) |initial>|^2 and dF/dparams by reverse-mode
/// (adjoint) differentiation.
FidelityGradient fidelity_gradient(const ParamCircuit &circuit, std::span<const double> params,
                                   const Statevector &initial, const Statevector &target);

CompressionResult compress(const IsingHamiltonian &cost, const Schedule &schedule, const CompressionSpec &spec);

/// Compressed prefix (retagged "prefix") followed by `tail`. A null prefix
/// means m = 0.
ParamCircuit assemble_hybrid(const CompressionResult *prefix, const ParamCircuit &tail);

}  // namespace qtransit
